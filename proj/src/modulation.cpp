#include "npcrel/modulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "npcrel/errors.hpp"

namespace npc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt3 = 0.57735026918962576451;
constexpr double kExcursion = 2.0 * kPi / 3.0;
constexpr double kDeg = kPi / 180.0;
// Slack for |MF| <= 1 checks; the region expressions touch 1 exactly at M = 1.
constexpr double kUnitSlack = 1e-12;

void require_modulation_index(double m) {
  if (!(m > 0.0 && m <= 1.0)) {
    throw DomainError("modulation index must lie in (0, 1], got " + std::to_string(m));
  }
}

double clamp_unit(double mf) {
  if (mf > 1.0 && mf <= 1.0 + kUnitSlack) return 1.0;
  if (mf < -1.0 && mf >= -1.0 - kUnitSlack) return -1.0;
  return mf;
}

using Shape = RegionExpression::Shape;

// Expression order per band, Delta_1 .. Delta_n.
std::vector<RegionExpression> band_expressions(SvpwmBand band) {
  switch (band) {
    case SvpwmBand::low:
      return {{Shape::lead, 0.0}, {Shape::axis, 0.0}, {Shape::lag, 0.0}, {Shape::lead, 0.0}};
    case SvpwmBand::mid:
      return {{Shape::lead, 0.0},  {Shape::axis, -0.25}, {Shape::lead, 0.25}, {Shape::axis, 0.0},
              {Shape::lag, 0.0},   {Shape::lead, 0.25},  {Shape::lag, -0.25}, {Shape::lead, 0.0}};
    case SvpwmBand::high:
      return {{Shape::lag, 0.0},  {Shape::axis, -0.25}, {Shape::lead, 0.25}, {Shape::lag, 0.0},
              {Shape::axis, 0.0}, {Shape::lead, 0.25},  {Shape::lag, -0.25}, {Shape::axis, 0.0}};
  }
  return {};
}

// Region boundaries in degrees of the local excursion angle.
std::vector<double> band_boundaries_deg(SvpwmBand band, double m) {
  if (band == SvpwmBand::low) {
    return {0.0, 30.0, 60.0, 90.0, 120.0};
  }
  double delta = std::acos(std::min(1.0, 0.5 / m)) / kDeg;
  if (band == SvpwmBand::mid) {
    delta = std::min(delta, 30.0);
    return {0.0, 30.0 - delta, 30.0, 30.0 + delta, 60.0, 90.0 - delta, 90.0, 90.0 + delta, 120.0};
  }
  // The literal band edge 0.577 sits just below 1/sqrt3, where delta would
  // dip under 30 degrees; pin it so the corner regions start at zero width.
  delta = std::max(delta, 30.0);
  return {0.0, delta - 30.0, 30.0, 90.0 - delta, 60.0, 30.0 + delta, 90.0, 150.0 - delta, 120.0};
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::spwm:
      return "SPWM";
    case Strategy::thipwm:
      return "THIPWM";
    case Strategy::svpwm:
      return "SVPWM";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Strategy s : kAllStrategies) {
    if (upper == to_string(s)) return s;
  }
  throw DomainError("unknown modulation strategy '" + std::string(name) + "'");
}

void OperatingPoint::validate() const {
  require_modulation_index(modulation_index);
  if (!(phi >= 0.0 && phi < kPi)) {
    throw DomainError("phase lag phi must lie in [0, pi), got " + std::to_string(phi));
  }
  if (!(i_max >= 0.0) || !std::isfinite(i_max)) {
    throw DomainError("peak current must be finite and non-negative");
  }
  if (!(f_out > 0.0)) {
    throw DomainError("fundamental frequency must be positive");
  }
  if (!(f_sw >= 10.0 * f_out)) {
    throw DomainError("carrier frequency must be at least 10x the fundamental");
  }
  if (!(v_dc > 0.0)) {
    throw DomainError("DC bus voltage must be positive");
  }
  if (!(t_ambient > -273.15)) {
    throw DomainError("ambient temperature below absolute zero");
  }
}

int SwitchingState::level() const {
  switch (state) {
    case LegState::positive:
      return 1;
    case LegState::zero:
      return 0;
    case LegState::negative:
      return -1;
  }
  return 0;
}

SwitchingState switching_state(LegState state) {
  switch (state) {
    case LegState::positive:
      return {state, {true, true, false, false}};
    case LegState::zero:
      return {state, {false, true, true, false}};
    case LegState::negative:
      return {state, {false, false, true, true}};
  }
  throw DomainError("invalid leg state");
}

DutyCycleSet duty_cycles(double mf) {
  if (!(std::abs(mf) <= 1.0 + kUnitSlack)) {
    throw DomainError("modulating function outside [-1, 1] (overmodulation): " +
                      std::to_string(mf));
  }
  mf = clamp_unit(mf);
  DutyCycleSet d;
  if (mf >= 0.0) {
    d.dt_p = mf;
    d.dt_zp = 1.0 - mf;
  } else {
    d.dt_n = -mf;
    d.dt_zn = 1.0 + mf;
  }
  return d;
}

double load_current(double m, double theta, double /*phi*/, double i_max) {
  return m * i_max * std::sin(theta);
}

SvpwmBand svpwm_band(double m) {
  require_modulation_index(m);
  if (m <= 0.5) return SvpwmBand::low;
  if (m <= 0.577) return SvpwmBand::mid;
  return SvpwmBand::high;
}

double RegionExpression::evaluate(double m, double alpha) const {
  switch (shape) {
    case Shape::lead:
      return m * kInvSqrt3 * std::cos(alpha + kPi / 6.0) + offset;
    case Shape::axis:
      return m * std::cos(alpha) + offset;
    case Shape::lag:
      return m * kInvSqrt3 * std::cos(alpha - kPi / 6.0) + offset;
  }
  return 0.0;
}

std::string RegionExpression::describe() const {
  std::ostringstream os;
  switch (shape) {
    case Shape::lead:
      os << "M/sqrt3*cos(alpha+pi/6)";
      break;
    case Shape::axis:
      os << "M*cos(alpha)";
      break;
    case Shape::lag:
      os << "M/sqrt3*cos(alpha-pi/6)";
      break;
  }
  if (offset > 0.0) os << "+" << offset;
  if (offset < 0.0) os << offset;
  return os.str();
}

SvpwmRegionTable::SvpwmRegionTable(double m) : m_(m), band_(svpwm_band(m)) {
  const auto exprs = band_expressions(band_);
  const auto edges = band_boundaries_deg(band_, m);
  regions_.reserve(exprs.size());
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    regions_.push_back({static_cast<int>(k + 1), edges[k] * kDeg, edges[k + 1] * kDeg, exprs[k]});
  }
}

const SvpwmRegion& SvpwmRegionTable::region_at(double alpha) const {
  constexpr double eps = 1e-12;
  if (!(alpha >= kExcursionBegin - eps && alpha <= kExcursionEnd + eps)) {
    throw DomainError("angle outside the 120 degree SVPWM excursion");
  }
  const double u = std::clamp(alpha - kExcursionBegin, 0.0, kExcursion);
  const SvpwmRegion* last_nonempty = nullptr;
  for (const auto& r : regions_) {
    if (r.end <= r.begin) continue;
    last_nonempty = &r;
    if (u >= r.begin && u < r.end) return r;
  }
  return *last_nonempty;
}

double SvpwmRegionTable::voltage(double alpha) const {
  double u = alpha - kExcursionBegin;
  u -= kExcursion * std::floor(u / kExcursion);
  const SvpwmRegion& r = region_at(kExcursionBegin + u);
  return clamp_unit(r.expression.evaluate(m_, alpha));
}

int svpwm_region(double m, double alpha) { return SvpwmRegionTable(m).region_at(alpha).id; }

double svpwm_modulating_function(const SvpwmRegionTable& table, double theta, double phi) {
  return table.voltage(theta + phi - kPi / 2.0);
}

double modulating_function(Strategy s, double m, double theta, double phi) {
  require_modulation_index(m);
  const double x = theta + phi;
  switch (s) {
    case Strategy::spwm:
      return m * std::sin(x);
    case Strategy::thipwm:
      return clamp_unit(2.0 * m * kInvSqrt3 * (std::sin(x) + std::sin(3.0 * x) / 6.0));
    case Strategy::svpwm:
      return svpwm_modulating_function(SvpwmRegionTable(m), theta, phi);
  }
  throw DomainError("invalid strategy");
}

}  // namespace npc
