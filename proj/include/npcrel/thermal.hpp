#pragma once

// Steady-state junction temperature through a series thermal path.

#include <variant>

namespace npc {

struct FreeAir {
  double r_ca = 61.0;  // case to ambient [degC/W]
};

struct Heatsink {
  double r_ch = 0.5;   // case to heatsink [degC/W]
  double r_ha = 1.0;   // heatsink to ambient [degC/W]
};

struct ThermalPath {
  double r_jc = 1.0;  // junction to case [degC/W]
  std::variant<FreeAir, Heatsink> sink = FreeAir{};

  double r_case_to_ambient() const;
  // Throws ConfigError unless every resistance is positive.
  void validate() const;

  static ThermalPath switch_default() { return {1.0, FreeAir{61.0}}; }
  static ThermalPath clamp_diode_default() { return {2.0, FreeAir{58.0}}; }
};

struct TemperaturePair {
  double t_case = 0.0;      // [degC]
  double t_junction = 0.0;  // [degC]
};

// T_c = T_a + P R_ca, T_j = T_c + P R_jc. DomainError for negative loss.
TemperaturePair junction_temperature(double p_loss, double t_ambient, const ThermalPath& path);

}  // namespace npc
