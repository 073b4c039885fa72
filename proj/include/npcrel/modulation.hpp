#pragma once

// Modulating functions, switching states and effective duty cycles of a
// three-level NPC leg.
//
// Angle convention used throughout the library: the load current of phase A
// is the reference, i(theta) = I * sin(theta), and the modulating voltage
// leads it by phi, v(theta) = M * f(theta + phi). With this convention the
// positive-current, positive-voltage interval of S1 is theta in [0, pi - phi].

#include <array>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace npc {

enum class Strategy { spwm, thipwm, svpwm };

inline constexpr std::array<Strategy, 3> kAllStrategies{Strategy::spwm, Strategy::thipwm,
                                                        Strategy::svpwm};

std::string_view to_string(Strategy s);
// Accepts "SPWM", "THIPWM", "SVPWM" in any case. Throws DomainError.
Strategy parse_strategy(std::string_view name);

struct OperatingPoint {
  double modulation_index = 1.0;  // M, (0, 1]
  double phi = 0.0;               // current lag behind voltage [rad], [0, pi)
  double i_max = 2.5;             // peak load current [A]
  double f_out = 50.0;            // fundamental [Hz]
  double f_sw = 1000.0;           // carrier [Hz]
  double v_dc = 300.0;            // DC bus [V]
  double t_ambient = 25.0;        // [degC]

  // Throws DomainError naming the first violated bound. i_max == 0 is
  // accepted (idle inverter).
  void validate() const;
};

// Switching states of one leg.
enum class LegState { positive = 1, zero = 2, negative = 3 };

struct SwitchingState {
  LegState state;
  std::array<bool, 4> gates;  // S1..S4

  // Output level in units of Vdc/2: +1, 0, -1.
  int level() const;
};

SwitchingState switching_state(LegState state);

// Effective duty of each switching state for one carrier period.
struct DutyCycleSet {
  double dt_p = 0.0;   // state 1
  double dt_zp = 0.0;  // state 2 while MF >= 0
  double dt_zn = 0.0;  // state 2 while MF < 0
  double dt_n = 0.0;   // state 3

  double zero() const { return dt_zp + dt_zn; }
};

// Throws DomainError for |mf| > 1 (overmodulation is not modelled).
DutyCycleSet duty_cycles(double mf);

// Instantaneous phase-A load current, M * I_max * sin(theta). phi only
// locates the voltage: the current crosses zero at voltage angle phi.
double load_current(double m, double theta, double phi, double i_max);

// ---------------------------------------------------------------------------
// SVPWM region tables
//
// The 120 degree excursion of the reference vector is alpha in
// [-pi/6, pi/2), alpha measured from the phase-A axis. The inner-hexagon
// vertices (small vectors) sit at -30, 30 and 90 degrees, so the excursion
// covers two 60 degree sectors. Inside each sector the reference circle of
// radius M crosses triangle edges where M * cos(angle to the edge normal) is
// 1/2; with delta = acos(1 / (2M)) the region boundaries in the local angle
// u = alpha + pi/6 are
//   M <= 0.5          : 0, 30, 60, 90, 120 deg                (4 regions)
//   0.5 < M <= 0.577  : 0, 30-d, 30, 30+d, 60, 90-d, 90, 90+d, 120
//   0.577 < M <= 1    : 0, d-30, 30, 90-d, 60, 30+d, 90, 150-d, 120
// (8 regions each). The phase-A expression of each region is applied at the
// true angle; outside the excursion the same region pattern repeats every
// 120 degrees.

enum class SvpwmBand { low, mid, high };  // (0,0.5], (0.5,0.577], (0.577,1]

SvpwmBand svpwm_band(double m);

// Phase-A voltage expression of one region:
//   scale * M * cos(alpha + shift) + offset
// with (scale, shift) one of (1/sqrt3, +pi/6), (1, 0), (1/sqrt3, -pi/6) and
// offset in {-0.25, 0, 0.25}.
struct RegionExpression {
  enum class Shape { lead, axis, lag };  // cos(a + pi/6), cos(a), cos(a - pi/6)
  Shape shape = Shape::axis;
  double offset = 0.0;

  double evaluate(double m, double alpha) const;
  std::string describe() const;
};

struct SvpwmRegion {
  int id = 0;           // 1-based, Delta_id
  double begin = 0.0;   // local angle u = alpha + pi/6 [rad]
  double end = 0.0;
  RegionExpression expression;
};

class SvpwmRegionTable {
 public:
  explicit SvpwmRegionTable(double m);

  double modulation_index() const { return m_; }
  SvpwmBand band() const { return band_; }
  const std::vector<SvpwmRegion>& regions() const { return regions_; }

  // Region containing alpha (must lie in [-pi/6, pi/2]; the closing edge
  // belongs to the last region). Throws DomainError outside the excursion.
  const SvpwmRegion& region_at(double alpha) const;

  // Phase-A voltage at any reference angle, by 120-degree repetition of the
  // region pattern.
  double voltage(double alpha) const;

 private:
  double m_;
  SvpwmBand band_;
  std::vector<SvpwmRegion> regions_;
};

inline constexpr double kExcursionBegin = -std::numbers::pi / 6.0;
inline constexpr double kExcursionEnd = std::numbers::pi / 2.0;

// Region id (1-based) at alpha. M in (0, 1].
int svpwm_region(double m, double alpha);

// Modulating function MF in [-1, 1]. theta in [0, 2 pi).
//   SPWM   : M sin(theta + phi)
//   THIPWM : 2M/sqrt3 [sin(theta + phi) + sin(3(theta + phi)) / 6]
//   SVPWM  : region expression at alpha = theta + phi - pi/2
double modulating_function(Strategy s, double m, double theta, double phi);

// Same, reusing a precomputed table (its M is used).
double svpwm_modulating_function(const SvpwmRegionTable& table, double theta, double phi);

}  // namespace npc
