#pragma once

// Static characteristics of the semiconductors: affine on-state models and
// double-exponential commutation-energy fits.

#include <map>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

namespace npc {

// E(I) = a e^{b I} + c e^{d I}, energies in joules, current in amperes.
struct EnergyFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double evaluate(double i) const;
  bool operator==(const EnergyFit&) const = default;
};

struct SwitchPhysics {
  std::string name;
  double v_ceo = 0.0;  // threshold [V]
  double i_cn = 1.0;   // rated current of the linearization [A]
  double v_cen = 0.0;  // on-voltage at i_cn [V]
  EnergyFit eon;
  EnergyFit eoff;

  double r_s() const { return (v_cen - v_ceo) / i_cn; }
  void validate() const;
};

struct DiodePhysics {
  std::string name;
  double v_fo = 0.0;
  double i_cn = 1.0;
  double v_fn = 0.0;
  EnergyFit erec;
  double v_rev_rated = 0.0;  // [V]

  double r_d() const { return (v_fn - v_fo) / i_cn; }
  void validate() const;
};

using DevicePhysics = std::variant<SwitchPhysics, DiodePhysics>;

// v_ceo + r_s i for a switch, v_fo + r_d i for a diode. Throws DomainError
// for i < 0; the model conducts in one direction only.
double on_state_voltage(const SwitchPhysics& dev, double i);
double on_state_voltage(const DiodePhysics& dev, double i);
double on_state_voltage(const DevicePhysics& dev, double i);

// Threshold and slope of whichever device is held.
struct OnStateLine {
  double v0 = 0.0;
  double r = 0.0;
};
OnStateLine on_state_line(const DevicePhysics& dev);

// fit(i) for i >= 0. Throws DomainError on negative current and
// ModelValidityError if the fit goes negative there.
double commutation_energy(const EnergyFit& fit, double i);

struct EnergySample {
  double current = 0.0;  // [A]
  double energy = 0.0;   // [J]
};

struct EnergyFitResult {
  EnergyFit fit;
  double residual_rms = 0.0;  // [J]
  int iterations = 0;
};

struct EnergyFitOptions {
  int max_iterations = 500;
  // Converged when the relative parameter step falls below this.
  double step_tolerance = 1e-13;
};

// Least-squares double-exponential fit. Needs >= 4 samples at distinct
// currents (DomainError otherwise); throws FittingError with the best
// residual found if the optimiser does not converge. The returned fit is
// ordered so that b >= d.
EnergyFitResult fit_energy_curve(std::span<const EnergySample> samples,
                                 const EnergyFitOptions& options = {});

// Datasheet defaults. Energy fits are the published IRF740 curve fits; the
// on-state lines are linearised from the manufacturer datasheets:
//  - IRF740: R_DS(on) 0.55 ohm at V_GS = 10 V, treated as a pure resistor
//    (v_ceo = 0) through the 10 A continuous rating.
//  - IRF740 body diode: V_SD 0.8 V knee, 2.0 V at 10 A, 400 V blocking.
//  - MUR1560: 0.7 V knee, 1.25 V at 15 A (25 degC max), 600 V blocking.
// The reverse-recovery fit is shared by both diodes; it is the only one
// published for this converter.
namespace defaults {
EnergyFit irf740_eon();
EnergyFit irf740_eoff();
EnergyFit erec();
SwitchPhysics irf740();
DiodePhysics irf740_body_diode();
DiodePhysics mur1560();
}  // namespace defaults

// Named devices, as read from/written to the device library document:
//
//   { "devices": {
//       "IRF740":  { "kind": "switch", "v_ceo_V": 0, "i_cn_A": 10, "v_cen_V": 5.5,
//                    "eon_J":  {"a":..,"b":..,"c":..,"d":..}, "eoff_J": {...} },
//       "MUR1560": { "kind": "diode", "v_fo_V": 0.7, "i_cn_A": 15, "v_fn_V": 1.25,
//                    "v_rev_rated_V": 600, "erec_J": {...} } } }
class DeviceLibrary {
 public:
  static DeviceLibrary defaults();
  static DeviceLibrary from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  void add(DevicePhysics dev);
  bool contains(const std::string& name) const { return devices_.count(name) != 0; }
  // Throw ConfigError when absent or of the wrong kind.
  const SwitchPhysics& switch_device(const std::string& name) const;
  const DiodePhysics& diode(const std::string& name) const;

  const std::map<std::string, DevicePhysics>& devices() const { return devices_; }

 private:
  std::map<std::string, DevicePhysics> devices_;
};

}  // namespace npc
