#pragma once

// Run configuration: one JSON document with nested sections. The defaults
// describe the 300 V / 1 kHz IRF740 + MUR1560 reference inverter together
// with the published stress factors for each strategy.

#include <map>
#include <string>

#include <json.hpp>

#include "npcrel/dclink.hpp"
#include "npcrel/device_models.hpp"
#include "npcrel/losses.hpp"
#include "npcrel/modulation.hpp"
#include "npcrel/thermal.hpp"

namespace npc {

enum class EvaluationMode { paper_factors, model };
std::string_view to_string(EvaluationMode m);
EvaluationMode parse_mode(std::string_view s);  // "paper-factors" | "model"

enum class DclinkSource { config, simulate };
std::string_view to_string(DclinkSource s);
DclinkSource parse_dclink_source(std::string_view s);

// Role groups that share one published factor.
enum class RoleGroup { S1_S4, S2_S3, D1_D4, D5_D6 };
std::string_view to_string(RoleGroup g);
RoleGroup group_of(Role r);

// Published factors injected in paper-factors mode.
struct PaperFactors {
  std::map<RoleGroup, double> pi_t;
  double pi_s = 0.19;
  double pi_v_c1 = 1.0;
  double pi_v_c2 = 1.0;
};

struct StrategyInputs {
  AppliedVoltage c1;  // used for pi_V in model mode when the DC-link source is config
  AppliedVoltage c2;
  NpPolicy np_policy;
  PaperFactors paper;
};

struct PartTypeFactors {
  double lambda_b = 0.0;
  double pi_a = 1.0;  // MOSFET only
  double pi_q = 1.0;
  double pi_e = 1.0;
  double pi_c = 1.0;  // diode only
};

struct ReliabilitySettings {
  PartTypeFactors mosfet{0.012, 8.0, 8.0, 1.0, 1.0};
  PartTypeFactors diode{0.025, 1.0, 8.0, 1.0, 1.0};
  double capacitor_lambda_b = 0.00012;
  double capacitor_pi_e = 1.0;
  double freewheel_v_s = 0.505;  // reverse voltage stress ratio
  double clamp_v_s = 0.505;
  double capacitor_hotspot_degC = 50.0;
};

struct DeviceSelection {
  std::string outer_switch = "IRF740";
  std::string inner_switch = "IRF740";
  std::string freewheel_diode = "IRF740-body-diode";
  std::string clamp_diode = "MUR1560";
};

struct SurfaceGrid {
  int m_points = 21;  // M from m_min to 1
  double m_min = 0.05;
  int phi_points = 19;  // phi from 0 to phi_max
  double phi_max_deg = 90.0;
};

struct RunConfig {
  OperatingPoint op;
  double power_factor = 1.0;  // op.phi = acos(power_factor)
  DeviceLibrary library = DeviceLibrary::defaults();
  DeviceSelection selection;
  ThermalPath switch_thermal = ThermalPath::switch_default();
  ThermalPath freewheel_thermal = ThermalPath::switch_default();
  ThermalPath clamp_thermal = ThermalPath::clamp_diode_default();
  CapacitorSpec c1;
  CapacitorSpec c2;
  ReliabilitySettings reliability;
  EvaluationMode mode = EvaluationMode::paper_factors;
  DclinkSource dclink_source = DclinkSource::config;
  DclinkSimOptions dclink_sim;
  QuadratureOptions quadrature;
  SurfaceGrid surface;
  std::map<Strategy, StrategyInputs> strategies;

  static RunConfig defaults();
  // Missing sections and keys fall back to defaults; malformed entries and
  // unknown devices throw ConfigError.
  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig load(const std::string& path);
  nlohmann::ordered_json to_json() const;

  DeviceSet device_set() const;
  const ThermalPath& thermal_path(Role r) const;
  const StrategyInputs& inputs(Strategy s) const;
  void validate() const;
};

}  // namespace npc
