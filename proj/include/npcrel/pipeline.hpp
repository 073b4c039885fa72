#pragma once

// End-to-end evaluation: modulation -> losses -> thermal -> reliability.

#include <map>
#include <string>
#include <vector>

#include "npcrel/config.hpp"
#include "npcrel/dclink.hpp"
#include "npcrel/losses.hpp"
#include "npcrel/reliability.hpp"
#include "npcrel/thermal.hpp"

namespace npc {

enum class FactorSource { paper, model };
std::string_view to_string(FactorSource s);

struct RoleReport {
  Role role = Role::S1;
  std::string device;
  LossBreakdown loss;
  TemperaturePair temperature;
};

struct PartReport {
  PartFailureRate rate;
  StressFactorSet factors;
  FactorSource pi_t_source = FactorSource::model;
  double temperature_degC = 0.0;  // junction, or hotspot for capacitors
};

struct StrategyReport {
  Strategy strategy = Strategy::spwm;
  EvaluationMode mode = EvaluationMode::paper_factors;
  DclinkSource dclink_source = DclinkSource::config;
  std::vector<RoleReport> roles;  // leg A, S1..D6
  LossBreakdown inverter_loss;
  AppliedVoltage c1;
  AppliedVoltage c2;
  std::vector<PartReport> parts;  // legs A, B, C then C1, C2
  double lambda_total = 0.0;      // [1e-6/h]
  double mttf_h = 0.0;
  std::map<PartClass, double> shares_pct;
  std::vector<std::string> warnings;

  const RoleReport& role(Role r) const;
};

struct ComparisonRow {
  Strategy strategy = Strategy::spwm;
  double lambda_total = 0.0;
  double mttf_h = 0.0;
  double mttf_gain_pct = 0.0;  // relative to the lowest MTTF in the table
};

struct ComparisonReport {
  std::vector<StrategyReport> strategies;
  std::vector<ComparisonRow> rows;
};

// Errors from the modules are rethrown with the same type and the strategy
// (and role, where known) prefixed to the message.
StrategyReport evaluate_strategy(const RunConfig& cfg, Strategy s);

// Strategies run on up to `threads` worker threads; the result does not
// depend on the thread count or completion order.
ComparisonReport compare_strategies(const RunConfig& cfg, unsigned threads = 1);

// Rows from already evaluated strategies.
std::vector<ComparisonRow> comparison_rows(const std::vector<StrategyReport>& reports);

// S1 total loss over the configured (M, phi) grid at the configured current.
struct LossSurfacePoint {
  double m = 0.0;
  double phi_deg = 0.0;
  double p_total = 0.0;  // [W]
};
std::vector<LossSurfacePoint> loss_surface(const RunConfig& cfg, Strategy s, Role role = Role::S1);

}  // namespace npc
