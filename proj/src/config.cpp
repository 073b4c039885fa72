#include "npcrel/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "npcrel/errors.hpp"

namespace npc {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const char* key, const std::string& fallback,
                 const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.is_object() || !j.contains(key)) return empty;
  const auto& v = j.at(key);
  if (!v.is_object()) throw ConfigError(std::string("section '") + key + "' must be an object");
  return v;
}

ThermalPath thermal_from(const json& j, ThermalPath fallback, const std::string& where) {
  ThermalPath p = fallback;
  p.r_jc = number(j, "r_jc_degC_per_W", p.r_jc, where);
  const bool heatsink = j.is_object() && (j.contains("r_ch_degC_per_W") || j.contains("r_ha_degC_per_W"));
  if (heatsink) {
    if (j.contains("r_ca_degC_per_W")) {
      throw ConfigError(where + ": give either r_ca or r_ch + r_ha, not both");
    }
    Heatsink h;
    h.r_ch = number(j, "r_ch_degC_per_W", -1.0, where);
    h.r_ha = number(j, "r_ha_degC_per_W", -1.0, where);
    p.sink = h;
  } else if (j.is_object() && j.contains("r_ca_degC_per_W")) {
    p.sink = FreeAir{number(j, "r_ca_degC_per_W", 0.0, where)};
  }
  p.validate();
  return p;
}

ordered_json thermal_to(const ThermalPath& p) {
  ordered_json j;
  j["r_jc_degC_per_W"] = p.r_jc;
  if (const auto* f = std::get_if<FreeAir>(&p.sink)) {
    j["r_ca_degC_per_W"] = f->r_ca;
  } else {
    const auto& h = std::get<Heatsink>(p.sink);
    j["r_ch_degC_per_W"] = h.r_ch;
    j["r_ha_degC_per_W"] = h.r_ha;
  }
  return j;
}

CapacitorSpec capacitor_from(const json& j, const std::string& where) {
  CapacitorSpec c;
  c.capacitance_uF = number(j, "capacitance_uF", c.capacitance_uF, where);
  c.v_rated = number(j, "v_rated_V", c.v_rated, where);
  c.pi_q = number(j, "pi_q", c.pi_q, where);
  c.pi_sr = number(j, "pi_sr", c.pi_sr, where);
  c.validate();
  return c;
}

ordered_json capacitor_to(const CapacitorSpec& c) {
  ordered_json j;
  j["capacitance_uF"] = c.capacitance_uF;
  j["v_rated_V"] = c.v_rated;
  j["pi_q"] = c.pi_q;
  j["pi_sr"] = c.pi_sr;
  return j;
}

AppliedVoltage applied_from(const json& j, AppliedVoltage fallback, const std::string& where) {
  AppliedVoltage a = fallback;
  a.v_dc = number(j, "dc_V", a.v_dc, where);
  a.v_ac = number(j, "ac_rms_V", a.v_ac, where);
  if (!(a.v_dc >= 0.0) || !(a.v_ac >= 0.0)) {
    throw ConfigError(where + ": applied voltages must be non-negative");
  }
  return a;
}

ordered_json applied_to(const AppliedVoltage& a) {
  ordered_json j;
  j["dc_V"] = a.v_dc;
  j["ac_rms_V"] = a.v_ac;
  return j;
}

PartTypeFactors part_factors_from(const json& j, PartTypeFactors f, bool mosfet,
                                  const std::string& where) {
  f.lambda_b = number(j, "lambda_b_1e-6_per_h", f.lambda_b, where);
  f.pi_q = number(j, "pi_q", f.pi_q, where);
  f.pi_e = number(j, "pi_e", f.pi_e, where);
  if (mosfet) {
    f.pi_a = number(j, "pi_a", f.pi_a, where);
  } else {
    f.pi_c = number(j, "pi_c", f.pi_c, where);
  }
  return f;
}

StrategyInputs default_inputs(Strategy s) {
  // Applied voltages are the ones whose pi_V equals the published value with
  // a 250 V rating and no ripple.
  StrategyInputs in;
  in.paper.pi_s = 0.19;
  switch (s) {
    case Strategy::spwm:
      in.c1 = in.c2 = {149.412, 0.0};
      in.paper.pi_t = {{RoleGroup::S1_S4, 2.136},
                       {RoleGroup::S2_S3, 2.655},
                       {RoleGroup::D1_D4, 1.103},
                       {RoleGroup::D5_D6, 1.394}};
      in.paper.pi_v_c1 = in.paper.pi_v_c2 = 13.61;
      break;
    case Strategy::thipwm:
      in.c1 = in.c2 = {142.354, 0.0};
      in.paper.pi_t = {{RoleGroup::S1_S4, 2.005},
                       {RoleGroup::S2_S3, 2.204},
                       {RoleGroup::D1_D4, 1.103},
                       {RoleGroup::D5_D6, 1.201}};
      in.paper.pi_v_c1 = in.paper.pi_v_c2 = 10.90;
      break;
    case Strategy::svpwm:
      in.c1 = {113.215, 0.0};
      in.c2 = {171.356, 0.0};
      in.np_policy.common_mode_bias = 0.5;
      in.paper.pi_t = {{RoleGroup::S1_S4, 1.942},
                       {RoleGroup::S2_S3, 2.125},
                       {RoleGroup::D1_D4, 1.103},
                       {RoleGroup::D5_D6, 1.190}};
      in.paper.pi_v_c1 = 4.15;
      in.paper.pi_v_c2 = 26.02;
      break;
  }
  return in;
}

constexpr std::array<RoleGroup, 4> kGroups{RoleGroup::S1_S4, RoleGroup::S2_S3, RoleGroup::D1_D4,
                                           RoleGroup::D5_D6};

}  // namespace

std::string_view to_string(EvaluationMode m) {
  return m == EvaluationMode::paper_factors ? "paper-factors" : "model";
}

EvaluationMode parse_mode(std::string_view s) {
  if (s == "paper-factors") return EvaluationMode::paper_factors;
  if (s == "model") return EvaluationMode::model;
  throw ConfigError("unknown evaluation mode '" + std::string(s) +
                    "' (expected paper-factors or model)");
}

std::string_view to_string(DclinkSource s) {
  return s == DclinkSource::config ? "config" : "simulate";
}

DclinkSource parse_dclink_source(std::string_view s) {
  if (s == "config") return DclinkSource::config;
  if (s == "simulate") return DclinkSource::simulate;
  throw ConfigError("unknown dclink_source '" + std::string(s) + "' (expected config or simulate)");
}

std::string_view to_string(RoleGroup g) {
  switch (g) {
    case RoleGroup::S1_S4:
      return "S1_S4";
    case RoleGroup::S2_S3:
      return "S2_S3";
    case RoleGroup::D1_D4:
      return "D1_D4";
    case RoleGroup::D5_D6:
      return "D5_D6";
  }
  return "?";
}

RoleGroup group_of(Role r) {
  switch (r) {
    case Role::S1:
    case Role::S4:
      return RoleGroup::S1_S4;
    case Role::S2:
    case Role::S3:
      return RoleGroup::S2_S3;
    case Role::D5:
    case Role::D6:
      return RoleGroup::D5_D6;
    default:
      return RoleGroup::D1_D4;
  }
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  for (Strategy s : kAllStrategies) cfg.strategies[s] = default_inputs(s);
  return cfg;
}

RunConfig RunConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration root must be an object");
  RunConfig cfg = defaults();
  try {
    const json& op = section(doc, "operating_point");
    const std::string w = "operating_point";
    cfg.op.v_dc = number(op, "dc_link_voltage_V", cfg.op.v_dc, w);
    cfg.op.f_out = number(op, "output_frequency_Hz", cfg.op.f_out, w);
    cfg.op.f_sw = number(op, "carrier_frequency_Hz", cfg.op.f_sw, w);
    cfg.op.modulation_index = number(op, "modulation_index", cfg.op.modulation_index, w);
    cfg.power_factor = number(op, "power_factor", cfg.power_factor, w);
    cfg.op.i_max = number(op, "peak_current_A", cfg.op.i_max, w);
    cfg.op.t_ambient = number(op, "ambient_temperature_degC", cfg.op.t_ambient, w);
    if (!(cfg.power_factor > -1.0 && cfg.power_factor <= 1.0)) {
      throw ConfigError("operating_point.power_factor must lie in (-1, 1]");
    }
    cfg.op.phi = std::acos(cfg.power_factor);

    const json& sim = section(doc, "simulation");
    cfg.dclink_sim.dt = number(sim, "step_s", cfg.dclink_sim.dt, "simulation");
    cfg.dclink_sim.cycles = integer(sim, "dclink_cycles", cfg.dclink_sim.cycles, "simulation");
    cfg.quadrature.samples = integer(sim, "angular_samples", cfg.quadrature.samples, "simulation");
    cfg.quadrature.tolerance =
        number(sim, "quadrature_tolerance", cfg.quadrature.tolerance, "simulation");
    const json& grid = section(sim, "loss_surface");
    cfg.surface.m_points = integer(grid, "m_points", cfg.surface.m_points, "loss_surface");
    cfg.surface.m_min = number(grid, "m_min", cfg.surface.m_min, "loss_surface");
    cfg.surface.phi_points = integer(grid, "phi_points", cfg.surface.phi_points, "loss_surface");
    cfg.surface.phi_max_deg = number(grid, "phi_max_deg", cfg.surface.phi_max_deg, "loss_surface");

    if (doc.contains("devices")) cfg.library = DeviceLibrary::from_json(doc);
    const json& sel = section(doc, "device_selection");
    cfg.selection.outer_switch = text(sel, "outer_switch", cfg.selection.outer_switch, "device_selection");
    cfg.selection.inner_switch = text(sel, "inner_switch", cfg.selection.inner_switch, "device_selection");
    cfg.selection.freewheel_diode =
        text(sel, "freewheel_diode", cfg.selection.freewheel_diode, "device_selection");
    cfg.selection.clamp_diode = text(sel, "clamp_diode", cfg.selection.clamp_diode, "device_selection");

    const json& th = section(doc, "thermal");
    cfg.switch_thermal = thermal_from(section(th, "switch"), cfg.switch_thermal, "thermal.switch");
    cfg.freewheel_thermal =
        thermal_from(section(th, "freewheel_diode"), cfg.freewheel_thermal, "thermal.freewheel_diode");
    cfg.clamp_thermal = thermal_from(section(th, "clamp_diode"), cfg.clamp_thermal, "thermal.clamp_diode");

    const json& caps = section(doc, "capacitors");
    cfg.c1 = capacitor_from(section(caps, "C1"), "capacitors.C1");
    cfg.c2 = capacitor_from(section(caps, "C2"), "capacitors.C2");
    cfg.reliability.capacitor_hotspot_degC = number(
        caps, "hotspot_temperature_degC", cfg.reliability.capacitor_hotspot_degC, "capacitors");
    cfg.dclink_sim.balancing_resistance = number(
        caps, "balancing_resistance_ohm", cfg.dclink_sim.balancing_resistance, "capacitors");

    const json& rel = section(doc, "reliability");
    cfg.reliability.mosfet =
        part_factors_from(section(rel, "mosfet"), cfg.reliability.mosfet, true, "reliability.mosfet");
    cfg.reliability.diode =
        part_factors_from(section(rel, "diode"), cfg.reliability.diode, false, "reliability.diode");
    const json& cap = section(rel, "capacitor");
    cfg.reliability.capacitor_lambda_b =
        number(cap, "lambda_b_1e-6_per_h", cfg.reliability.capacitor_lambda_b, "reliability.capacitor");
    cfg.reliability.capacitor_pi_e = number(cap, "pi_e", cfg.reliability.capacitor_pi_e, "reliability.capacitor");
    const json& vs = section(rel, "diode_stress");
    cfg.reliability.freewheel_v_s =
        number(vs, "freewheel_v_s", cfg.reliability.freewheel_v_s, "reliability.diode_stress");
    cfg.reliability.clamp_v_s = number(vs, "clamp_v_s", cfg.reliability.clamp_v_s, "reliability.diode_stress");

    const json& ev = section(doc, "evaluation");
    cfg.mode = parse_mode(text(ev, "mode", std::string(to_string(cfg.mode)), "evaluation"));
    cfg.dclink_source = parse_dclink_source(
        text(ev, "dclink_source", std::string(to_string(cfg.dclink_source)), "evaluation"));

    const json& strat = section(doc, "strategies");
    for (const auto& [name, entry] : strat.items()) {
      const Strategy s = parse_strategy(name);
      StrategyInputs& in = cfg.strategies[s];
      const std::string w2 = "strategies." + name;
      const json& av = section(entry, "applied_voltage");
      in.c1 = applied_from(section(av, "C1"), in.c1, w2 + ".applied_voltage.C1");
      in.c2 = applied_from(section(av, "C2"), in.c2, w2 + ".applied_voltage.C2");
      in.np_policy.common_mode_bias =
          number(entry, "np_common_mode_bias", in.np_policy.common_mode_bias, w2);
      const json& pf = section(entry, "paper_factors");
      const json& pt = section(pf, "pi_t");
      for (RoleGroup g : kGroups) {
        const std::string key(to_string(g));
        in.paper.pi_t[g] = number(pt, key.c_str(), in.paper.pi_t[g], w2 + ".paper_factors.pi_t");
      }
      in.paper.pi_s = number(pf, "pi_s", in.paper.pi_s, w2 + ".paper_factors");
      const json& pv = section(pf, "pi_v");
      in.paper.pi_v_c1 = number(pv, "C1", in.paper.pi_v_c1, w2 + ".paper_factors.pi_v");
      in.paper.pi_v_c2 = number(pv, "C2", in.paper.pi_v_c2, w2 + ".paper_factors.pi_v");
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return from_json(doc);
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  ordered_json& op_j = j["operating_point"];
  op_j["dc_link_voltage_V"] = op.v_dc;
  op_j["output_frequency_Hz"] = op.f_out;
  op_j["carrier_frequency_Hz"] = op.f_sw;
  op_j["modulation_index"] = op.modulation_index;
  op_j["power_factor"] = power_factor;
  op_j["peak_current_A"] = op.i_max;
  op_j["ambient_temperature_degC"] = op.t_ambient;

  ordered_json& sim = j["simulation"];
  sim["step_s"] = dclink_sim.dt;
  sim["dclink_cycles"] = dclink_sim.cycles;
  sim["angular_samples"] = quadrature.samples;
  sim["quadrature_tolerance"] = quadrature.tolerance;
  sim["loss_surface"] = {{"m_points", surface.m_points},
                         {"m_min", surface.m_min},
                         {"phi_points", surface.phi_points},
                         {"phi_max_deg", surface.phi_max_deg}};

  j["devices"] = ordered_json::parse(library.to_json().at("devices").dump());
  j["device_selection"] = {{"outer_switch", selection.outer_switch},
                           {"inner_switch", selection.inner_switch},
                           {"freewheel_diode", selection.freewheel_diode},
                           {"clamp_diode", selection.clamp_diode}};
  j["thermal"] = {{"switch", thermal_to(switch_thermal)},
                  {"freewheel_diode", thermal_to(freewheel_thermal)},
                  {"clamp_diode", thermal_to(clamp_thermal)}};

  ordered_json& caps = j["capacitors"];
  caps["C1"] = capacitor_to(c1);
  caps["C2"] = capacitor_to(c2);
  caps["hotspot_temperature_degC"] = reliability.capacitor_hotspot_degC;
  caps["balancing_resistance_ohm"] = dclink_sim.balancing_resistance;

  ordered_json& rel = j["reliability"];
  rel["mosfet"] = {{"lambda_b_1e-6_per_h", reliability.mosfet.lambda_b},
                   {"pi_a", reliability.mosfet.pi_a},
                   {"pi_q", reliability.mosfet.pi_q},
                   {"pi_e", reliability.mosfet.pi_e}};
  rel["diode"] = {{"lambda_b_1e-6_per_h", reliability.diode.lambda_b},
                  {"pi_c", reliability.diode.pi_c},
                  {"pi_q", reliability.diode.pi_q},
                  {"pi_e", reliability.diode.pi_e}};
  rel["capacitor"] = {{"lambda_b_1e-6_per_h", reliability.capacitor_lambda_b},
                      {"pi_e", reliability.capacitor_pi_e}};
  rel["diode_stress"] = {{"freewheel_v_s", reliability.freewheel_v_s},
                         {"clamp_v_s", reliability.clamp_v_s}};

  j["evaluation"] = {{"mode", std::string(to_string(mode))},
                     {"dclink_source", std::string(to_string(dclink_source))}};

  ordered_json& st = j["strategies"];
  for (const auto& [s, in] : strategies) {
    ordered_json e;
    e["applied_voltage"] = {{"C1", applied_to(in.c1)}, {"C2", applied_to(in.c2)}};
    e["np_common_mode_bias"] = in.np_policy.common_mode_bias;
    ordered_json pt;
    for (RoleGroup g : kGroups) pt[std::string(to_string(g))] = in.paper.pi_t.at(g);
    e["paper_factors"] = {{"pi_t", pt},
                          {"pi_s", in.paper.pi_s},
                          {"pi_v", {{"C1", in.paper.pi_v_c1}, {"C2", in.paper.pi_v_c2}}}};
    st[std::string(to_string(s))] = e;
  }
  return j;
}

DeviceSet RunConfig::device_set() const {
  DeviceSet d;
  d.outer_switch = library.switch_device(selection.outer_switch);
  d.inner_switch = library.switch_device(selection.inner_switch);
  d.freewheel = library.diode(selection.freewheel_diode);
  d.clamp = library.diode(selection.clamp_diode);
  return d;
}

const ThermalPath& RunConfig::thermal_path(Role r) const {
  if (is_switch(r)) return switch_thermal;
  return is_clamp_diode(r) ? clamp_thermal : freewheel_thermal;
}

const StrategyInputs& RunConfig::inputs(Strategy s) const {
  auto it = strategies.find(s);
  if (it == strategies.end()) {
    throw ConfigError("no inputs configured for strategy " + std::string(to_string(s)));
  }
  return it->second;
}

void RunConfig::validate() const {
  try {
    op.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("operating_point: ") + e.what());
  }
  (void)device_set();
  switch_thermal.validate();
  freewheel_thermal.validate();
  clamp_thermal.validate();
  c1.validate();
  c2.validate();
  if (quadrature.samples < 16) throw ConfigError("simulation.angular_samples must be >= 16");
  if (!(quadrature.tolerance > 0.0)) throw ConfigError("simulation.quadrature_tolerance must be positive");
  if (dclink_sim.cycles < 10) throw ConfigError("simulation.dclink_cycles must be >= 10");
  if (!(dclink_sim.dt > 0.0)) throw ConfigError("simulation.step_s must be positive");
  if (surface.m_points < 2 || surface.phi_points < 2) {
    throw ConfigError("loss_surface needs at least two points per axis");
  }
  if (!(surface.m_min > 0.0 && surface.m_min < 1.0)) {
    throw ConfigError("loss_surface.m_min must lie in (0, 1)");
  }
  if (!(surface.phi_max_deg >= 0.0 && surface.phi_max_deg < 180.0)) {
    throw ConfigError("loss_surface.phi_max_deg must lie in [0, 180)");
  }
  for (const auto& [s, in] : strategies) {
    for (const auto& [g, v] : in.paper.pi_t) {
      if (!(v > 0.0)) throw ConfigError("published pi_t factors must be positive");
    }
  }
}

}  // namespace npc
