#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace npc {

// Failure rates are carried in 1e-6 failures per hour throughout.

enum class PartType { mosfet, diode, capacitor };
std::string_view to_string(PartType t);

// Grouping used for contribution shares.
enum class PartClass { mosfet, freewheel_diode, clamp_diode, capacitor };
std::string_view to_string(PartClass c);
PartType part_type_of(PartClass c);

// exp(-k (1/(T + 273) - 1/298)), k = 1925 / 3091 / 4062 for MOSFET, diode
// and capacitor. T is the junction temperature for semiconductors and the
// hotspot temperature for capacitors [degC].
double pi_t(PartType type, double t_degC);

// 0.054 for vs <= 0.3, vs^2.43 above. StressOverrangeError for vs > 1,
// DomainError for vs < 0.
double pi_s_diode(double vs);

// C^0.23 with C in microfarads.
double pi_cp(double capacitance_uF);

struct StressFactorSet {
  std::optional<double> lambda_b;
  std::optional<double> pi_t;
  std::optional<double> pi_a;
  std::optional<double> pi_q;
  std::optional<double> pi_e;
  std::optional<double> pi_s;
  std::optional<double> pi_c;
  std::optional<double> pi_cp;
  std::optional<double> pi_v;
  std::optional<double> pi_sr;
};

// Names of the factors a part type multiplies, lambda_b first.
std::vector<std::string_view> required_factors(PartType type);

struct PartFailureRate {
  std::string part_id;
  PartClass part_class = PartClass::mosfet;
  double rate = 0.0;  // [1e-6/h]
};

// Product of the factors the part type needs. ConfigError naming the first
// missing factor; DomainError for a non-positive one.
double part_failure_rate(PartType type, const StressFactorSet& factors);
PartFailureRate part_failure_rate(std::string part_id, PartClass cls,
                                  const StressFactorSet& factors);

// Series system: sum of part rates. DomainError for an empty list. When
// `warnings` is given, a note is appended if the part mix differs from the
// 12 MOSFET / 12 freewheel / 6 clamp / 2 capacitor inverter.
double inverter_failure_rate(std::span<const PartFailureRate> parts,
                             std::vector<std::string>* warnings = nullptr);

// 1 / lambda, in hours, for lambda in 1e-6/h.
double mttf_hours(double lambda_total);

// Percent of the total carried by each class present; sums to 100.
std::map<PartClass, double> contribution_shares(std::span<const PartFailureRate> parts);

// --- electrolytic capacitor lifetime --------------------------------------

struct ThreeRegimeConstants {
  double xi_low = 0.0;   // below: low-stress branch
  double xi_high = 0.0;  // above: high-stress branch
  double a0 = 0.0;       // [eV per unit xi]
  double a1 = 0.0;       // [1/V]
  double ea0 = 0.0;      // [eV]
};

struct CapacitorLifetimeModel {
  enum class Kind { arrhenius_power, ten_degree_doubling, three_regime };
  Kind kind = Kind::ten_degree_doubling;
  double l0 = 0.0;   // [h]
  double v0 = 0.0;   // [V]
  double t0 = 0.0;   // [K]
  double n = 0.0;
  double ea = 0.0;   // [eV]
  double kb = 8.62e-5;  // [eV/K]
  std::optional<ThreeRegimeConstants> regimes;
};

// Lifetime in hours at voltage v [V] and temperature t [K]:
//   arrhenius_power     L0 (V/V0)^-n exp(Ea/kB (1/T - 1/T0))
//   ten_degree_doubling L0 (V/V0)^-n 2^((T0 - T)/10)
//   three_regime        low xi:    L0 (V/V0) exp(Ea/kB (1/T - 1/T0))
//                       medium xi: L0 (V/V0)^-n exp(Ea/kB (1/T - 1/T0))
//                       high xi:   L0 exp(a1 (V0 - V)) exp((Ea0 - xi a0)/kB (1/T - 1/T0))
// `xi` only matters for three_regime, which throws ConfigError without its
// constants.
double capacitor_lifetime(const CapacitorLifetimeModel& model, double v, double t_kelvin,
                          double xi = 0.0);

}  // namespace npc
