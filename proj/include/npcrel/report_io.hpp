#pragma once

// Report rendering: JSON (with unit-suffixed keys), CSV tables and plot data.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "npcrel/pipeline.hpp"

namespace npc {

enum class OutputFormat { json, csv, plotdata };
OutputFormat parse_format(std::string_view s);

// Shortest round-trip decimal text of v.
std::string format_number(double v);

nlohmann::ordered_json to_json(const StrategyReport& r);
nlohmann::ordered_json to_json(const ComparisonReport& r);
StrategyReport strategy_report_from_json(const nlohmann::json& j);
ComparisonReport comparison_report_from_json(const nlohmann::json& j);

std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string losses_csv(const std::vector<StrategyReport>& reports);
std::string parts_csv(const std::vector<StrategyReport>& reports);
std::string shares_csv(const std::vector<StrategyReport>& reports);
// Header "m,phi_deg,p_total_W" followed by one row per grid point.
std::string surface_csv(const std::vector<LossSurfacePoint>& points);

// Throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Writes the report into `dir` (created if needed) and returns the files in
// the order written:
//   json     report.json
//   csv      comparison.csv, losses.csv, parts.csv, shares.csv
//   plotdata loss_surface_<STRATEGY>.csv per strategy, shares.csv
std::vector<std::filesystem::path> emit_report(const ComparisonReport& report, OutputFormat format,
                                               const RunConfig& cfg,
                                               const std::filesystem::path& dir);

}  // namespace npc
