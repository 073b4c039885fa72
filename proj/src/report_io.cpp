#include "npcrel/report_io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "npcrel/errors.hpp"

namespace npc {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct FactorField {
  const char* key;
  std::optional<double> StressFactorSet::*member;
};

constexpr std::array<FactorField, 10> kFactorFields{{
    {"lambda_b_1e-6_per_h", &StressFactorSet::lambda_b},
    {"pi_t", &StressFactorSet::pi_t},
    {"pi_a", &StressFactorSet::pi_a},
    {"pi_q", &StressFactorSet::pi_q},
    {"pi_e", &StressFactorSet::pi_e},
    {"pi_s", &StressFactorSet::pi_s},
    {"pi_c", &StressFactorSet::pi_c},
    {"pi_cp", &StressFactorSet::pi_cp},
    {"pi_v", &StressFactorSet::pi_v},
    {"pi_sr", &StressFactorSet::pi_sr},
}};

PartClass parse_class(const std::string& s) {
  for (PartClass c : {PartClass::mosfet, PartClass::freewheel_diode, PartClass::clamp_diode,
                      PartClass::capacitor}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("unknown part class '" + s + "'");
}

ordered_json loss_json(const LossBreakdown& b) {
  ordered_json j;
  j["p_cond_W"] = b.p_cond;
  j["p_sw_W"] = b.p_sw;
  j["p_total_W"] = b.total();
  return j;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out.push_back(',');
    out += c;
    first = false;
  }
  out.push_back('\n');
  return out;
}

}  // namespace

OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "plotdata") return OutputFormat::plotdata;
  throw ConfigError("unknown output format '" + std::string(s) + "' (json, csv or plotdata)");
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

ordered_json to_json(const StrategyReport& r) {
  ordered_json j;
  j["strategy"] = std::string(to_string(r.strategy));
  j["mode"] = std::string(to_string(r.mode));
  j["dclink_source"] = std::string(to_string(r.dclink_source));
  ordered_json devices = ordered_json::array();
  for (const auto& rr : r.roles) {
    ordered_json d;
    d["role"] = std::string(to_string(rr.role));
    d["device"] = rr.device;
    d["p_cond_W"] = rr.loss.p_cond;
    d["p_sw_W"] = rr.loss.p_sw;
    d["p_total_W"] = rr.loss.total();
    d["tc_degC"] = rr.temperature.t_case;
    d["tj_degC"] = rr.temperature.t_junction;
    devices.push_back(d);
  }
  j["devices"] = devices;
  j["inverter_loss"] = loss_json(r.inverter_loss);
  j["capacitors"] = {{"C1", {{"v_dc_V", r.c1.v_dc}, {"v_ac_rms_V", r.c1.v_ac}}},
                     {"C2", {{"v_dc_V", r.c2.v_dc}, {"v_ac_rms_V", r.c2.v_ac}}}};
  ordered_json parts = ordered_json::array();
  for (const auto& p : r.parts) {
    ordered_json e;
    e["id"] = p.rate.part_id;
    e["class"] = std::string(to_string(p.rate.part_class));
    e["temperature_degC"] = p.temperature_degC;
    e["pi_t_source"] = std::string(to_string(p.pi_t_source));
    ordered_json f = ordered_json::object();
    for (const auto& field : kFactorFields) {
      if (const auto& v = p.factors.*field.member) f[field.key] = *v;
    }
    e["factors"] = f;
    e["lambda_1e-6_per_h"] = p.rate.rate;
    parts.push_back(e);
  }
  j["parts"] = parts;
  j["lambda_1e-6_per_h"] = r.lambda_total;
  j["lambda_FIT"] = r.lambda_total * 1e3;
  j["mttf_h"] = r.mttf_h;
  ordered_json shares = ordered_json::object();
  for (const auto& [cls, v] : r.shares_pct) shares[std::string(to_string(cls))] = v;
  j["shares_pct"] = shares;
  j["warnings"] = r.warnings;
  return j;
}

ordered_json to_json(const ComparisonReport& r) {
  ordered_json j;
  ordered_json strategies = ordered_json::array();
  for (const auto& s : r.strategies) strategies.push_back(to_json(s));
  j["strategies"] = strategies;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json e;
    e["strategy"] = std::string(to_string(row.strategy));
    e["lambda_1e-6_per_h"] = row.lambda_total;
    e["mttf_h"] = row.mttf_h;
    e["mttf_gain_pct_vs_min"] = row.mttf_gain_pct;
    rows.push_back(e);
  }
  j["comparison"] = rows;
  return j;
}

StrategyReport strategy_report_from_json(const json& j) {
  try {
    StrategyReport r;
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.dclink_source = parse_dclink_source(j.at("dclink_source").get<std::string>());
    for (const auto& d : j.at("devices")) {
      RoleReport rr;
      rr.role = parse_role(d.at("role").get<std::string>());
      rr.device = d.at("device").get<std::string>();
      rr.loss = {d.at("p_cond_W").get<double>(), d.at("p_sw_W").get<double>()};
      rr.temperature = {d.at("tc_degC").get<double>(), d.at("tj_degC").get<double>()};
      r.roles.push_back(rr);
    }
    const auto& il = j.at("inverter_loss");
    r.inverter_loss = {il.at("p_cond_W").get<double>(), il.at("p_sw_W").get<double>()};
    const auto& caps = j.at("capacitors");
    r.c1 = {caps.at("C1").at("v_dc_V").get<double>(), caps.at("C1").at("v_ac_rms_V").get<double>()};
    r.c2 = {caps.at("C2").at("v_dc_V").get<double>(), caps.at("C2").at("v_ac_rms_V").get<double>()};
    for (const auto& e : j.at("parts")) {
      PartReport p;
      p.rate.part_id = e.at("id").get<std::string>();
      p.rate.part_class = parse_class(e.at("class").get<std::string>());
      p.rate.rate = e.at("lambda_1e-6_per_h").get<double>();
      p.temperature_degC = e.at("temperature_degC").get<double>();
      p.pi_t_source =
          e.at("pi_t_source").get<std::string>() == "paper" ? FactorSource::paper : FactorSource::model;
      const auto& f = e.at("factors");
      for (const auto& field : kFactorFields) {
        if (f.contains(field.key)) p.factors.*field.member = f.at(field.key).get<double>();
      }
      r.parts.push_back(p);
    }
    r.lambda_total = j.at("lambda_1e-6_per_h").get<double>();
    r.mttf_h = j.at("mttf_h").get<double>();
    for (const auto& [k, v] : j.at("shares_pct").items()) r.shares_pct[parse_class(k)] = v.get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

ComparisonReport comparison_report_from_json(const json& j) {
  ComparisonReport r;
  try {
    for (const auto& s : j.at("strategies")) r.strategies.push_back(strategy_report_from_json(s));
    for (const auto& e : j.at("comparison")) {
      r.rows.push_back({parse_strategy(e.at("strategy").get<std::string>()),
                        e.at("lambda_1e-6_per_h").get<double>(), e.at("mttf_h").get<double>(),
                        e.at("mttf_gain_pct_vs_min").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "strategy,lambda_1e-6_per_h,mttf_h,mttf_gain_pct_vs_min\n";
  for (const auto& r : rows) {
    out += csv_line({std::string(to_string(r.strategy)), format_number(r.lambda_total),
                     format_number(r.mttf_h), format_number(r.mttf_gain_pct)});
  }
  return out;
}

std::string losses_csv(const std::vector<StrategyReport>& reports) {
  std::string out = "strategy,role,device,p_cond_W,p_sw_W,p_total_W,tc_degC,tj_degC\n";
  for (const auto& r : reports) {
    for (const auto& rr : r.roles) {
      out += csv_line({std::string(to_string(r.strategy)), std::string(to_string(rr.role)),
                       rr.device, format_number(rr.loss.p_cond), format_number(rr.loss.p_sw),
                       format_number(rr.loss.total()), format_number(rr.temperature.t_case),
                       format_number(rr.temperature.t_junction)});
    }
  }
  return out;
}

std::string parts_csv(const std::vector<StrategyReport>& reports) {
  std::string out = "strategy,part,class,temperature_degC,pi_t_source";
  for (const auto& field : kFactorFields) {
    out.push_back(',');
    out += field.key;
  }
  out += ",lambda_1e-6_per_h\n";
  for (const auto& r : reports) {
    for (const auto& p : r.parts) {
      out += std::string(to_string(r.strategy)) + "," + p.rate.part_id + "," +
             std::string(to_string(p.rate.part_class)) + "," + format_number(p.temperature_degC) +
             "," + std::string(to_string(p.pi_t_source));
      for (const auto& field : kFactorFields) {
        out.push_back(',');
        if (const auto& v = p.factors.*field.member) out += format_number(*v);
      }
      out += "," + format_number(p.rate.rate) + "\n";
    }
  }
  return out;
}

std::string shares_csv(const std::vector<StrategyReport>& reports) {
  std::string out = "strategy,class,share_pct\n";
  for (const auto& r : reports) {
    for (const auto& [cls, v] : r.shares_pct) {
      out += csv_line({std::string(to_string(r.strategy)), std::string(to_string(cls)),
                       format_number(v)});
    }
  }
  return out;
}

std::string surface_csv(const std::vector<LossSurfacePoint>& points) {
  std::string out = "m,phi_deg,p_total_W\n";
  for (const auto& p : points) {
    out += csv_line({format_number(p.m), format_number(p.phi_deg), format_number(p.p_total)});
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::filesystem::path> emit_report(const ComparisonReport& report, OutputFormat format,
                                               const RunConfig& cfg,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto put = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    write_text_file(path, content);
    written.push_back(path);
  };
  switch (format) {
    case OutputFormat::json:
      put("report.json", to_json(report).dump(2) + "\n");
      break;
    case OutputFormat::csv:
      put("comparison.csv", comparison_csv(report.rows));
      put("losses.csv", losses_csv(report.strategies));
      put("parts.csv", parts_csv(report.strategies));
      put("shares.csv", shares_csv(report.strategies));
      break;
    case OutputFormat::plotdata:
      for (const auto& s : report.strategies) {
        put("loss_surface_" + std::string(to_string(s.strategy)) + ".csv",
            surface_csv(loss_surface(cfg, s.strategy)));
      }
      put("shares.csv", shares_csv(report.strategies));
      break;
  }
  return written;
}

}  // namespace npc
