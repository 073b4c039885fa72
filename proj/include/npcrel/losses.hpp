#pragma once

// Conduction and switching losses of the ten devices in one NPC leg.
//
// Conduction windows per role (current i = I sin(theta), duty from the
// modulating function MF at the same instant):
//   S1        i > 0   max(MF, 0)          S4        i < 0   max(-MF, 0)
//   S2        i > 0   1 - max(-MF, 0)     S3        i < 0   1 - max(MF, 0)
//   D1, D2    i < 0   max(MF, 0)          D3, D4    i > 0   max(-MF, 0)
//   D5        i > 0   1 - |MF|            D6        i < 0   1 - |MF|
//
// Commutation pairs (one turn-on and one turn-off per carrier period):
//   i > 0, MF > 0 : S1 switches, D5 recovers
//   i < 0, MF > 0 : S3 switches, D1 recovers
//   i < 0, MF < 0 : S4 switches, D6 recovers
//   i > 0, MF < 0 : S2 switches, D4 recovers
// D2 and D3 conduct in series with D1 and D4 but are never charged a
// recovery event.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "npcrel/device_models.hpp"
#include "npcrel/modulation.hpp"

namespace npc {

enum class Role { S1, S2, S3, S4, D1, D2, D3, D4, D5, D6 };

inline constexpr std::array<Role, 10> kAllRoles{Role::S1, Role::S2, Role::S3, Role::S4, Role::D1,
                                                Role::D2, Role::D3, Role::D4, Role::D5, Role::D6};

std::string_view to_string(Role r);
Role parse_role(std::string_view name);
bool is_switch(Role r);
bool is_clamp_diode(Role r);  // D5, D6

enum class Leg { A, B, C };
inline constexpr std::array<Leg, 3> kAllLegs{Leg::A, Leg::B, Leg::C};
std::string_view to_string(Leg l);

struct DeviceRole {
  Leg leg = Leg::A;
  Role role = Role::S1;
};

struct LossBreakdown {
  double p_cond = 0.0;  // [W]
  double p_sw = 0.0;    // [W]
  double total() const { return p_cond + p_sw; }
};

// Physics of every role in a leg.
struct DeviceSet {
  SwitchPhysics outer_switch = defaults::irf740();  // S1, S4
  SwitchPhysics inner_switch = defaults::irf740();  // S2, S3
  DiodePhysics freewheel = defaults::irf740_body_diode();  // D1..D4
  DiodePhysics clamp = defaults::mur1560();                // D5, D6

  static DeviceSet defaults() { return {}; }
  DevicePhysics physics(Role r) const;
};

// ---------------------------------------------------------------------------
// Closed forms (SPWM and THIPWM only).

// Throws UnsupportedStrategyError for SVPWM and DomainError when the device
// kind does not fit the role.
double conduction_loss_closed_form(Strategy s, Role role, const DevicePhysics& dev,
                                   const OperatingPoint& op);

// Same expressions with the THIPWM S2/S3 and D1..D4 sin^4(phi/2)
// coefficient read as 296 instead of 269.
double conduction_loss_closed_form_corrected(Strategy s, Role role, const DevicePhysics& dev,
                                             const OperatingPoint& op);

// ---------------------------------------------------------------------------
// Numeric integration over one fundamental period.

struct QuadratureOptions {
  int samples = 10000;       // per fundamental period
  double tolerance = 1e-3;   // relative agreement required between N and N/2
};

double conduction_loss_numeric(Strategy s, Role role, const DevicePhysics& dev,
                               const OperatingPoint& op, const QuadratureOptions& q = {});

double switching_loss(Role role, const DevicePhysics& dev, const OperatingPoint& op, Strategy s,
                      const QuadratureOptions& q = {});

// Independent reference: walks every carrier period of one fundamental
// cycle, places the turn-on and turn-off instants symmetrically about the
// period centre (regular sampling at the centre) and sums the energies of
// the events the role takes part in. Returns average power.
double switching_loss_point_by_point(Role role, const DevicePhysics& dev,
                                     const OperatingPoint& op, Strategy s);

// ---------------------------------------------------------------------------

struct LossDistribution {
  std::map<Role, LossBreakdown> per_role;  // leg A; legs B and C are identical
  LossBreakdown leg_total;
  LossBreakdown inverter_total;  // three legs

  const LossBreakdown& at(Role r) const { return per_role.at(r); }
};

LossDistribution loss_distribution(const OperatingPoint& op, Strategy s, const DeviceSet& devices,
                                   const QuadratureOptions& q = {});

// One closed form compared with the integrator.
struct ClosedFormCheck {
  Strategy strategy;
  Role role;
  double modulation_index;
  double phi;
  double closed_form;  // [W]
  double numeric;      // [W], authoritative
  double rel_error;
  bool flagged;  // rel_error above the threshold
};

// Grid M x phi for every role with a closed form. Roles sharing an
// expression (S4/S1, S3/S2, D1..D4, D6/D5) are reported once, under the
// lower-numbered role.
std::vector<ClosedFormCheck> validate_closed_forms(const DeviceSet& devices, double i_max,
                                                   const std::vector<double>& m_grid,
                                                   const std::vector<double>& phi_grid,
                                                   double threshold = 5e-3);

}  // namespace npc
