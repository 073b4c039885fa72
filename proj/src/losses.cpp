#include "npcrel/losses.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "npcrel/errors.hpp"
#include "npcrel/kernels/kernels.hpp"

namespace npc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

constexpr std::array<std::string_view, 10> kRoleNames{"S1", "S2", "S3", "S4", "D1",
                                                      "D2", "D3", "D4", "D5", "D6"};

// Midpoint samples of one fundamental period. The period is cut at the
// points where the integrands may jump or the current changes sign
// (theta = 0, pi and, for SVPWM, every region boundary); each piece gets a
// share of the N cells proportional to its length. `cell` is the cell width
// in units of 2pi/N, so the cells sum to about N.
struct Waveform {
  std::vector<double> theta;
  std::vector<double> left;  // left cell boundary
  std::vector<double> cell;
  std::vector<double> sin_theta;
  std::vector<double> mf;
};

Waveform sample_waveform(Strategy s, const OperatingPoint& op, int n) {
  constexpr double kTwoPi = 2.0 * kPi;
  std::vector<double> cuts{0.0, kPi};
  std::optional<SvpwmRegionTable> table;
  if (s == Strategy::svpwm) {
    table.emplace(op.modulation_index);
    for (const SvpwmRegion& r : table->regions()) {
      for (int j = 0; j < 3; ++j) {
        const double theta = std::fmod(r.begin + kPi / 3.0 - op.phi + j * kTwoPi / 3.0 + 2.0 * kTwoPi, kTwoPi);
        cuts.push_back(theta);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(kTwoPi);
  const double h = kTwoPi / n;

  Waveform w;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double len = cuts[c + 1] - cuts[c];
    if (len <= 1e-12) continue;
    const long count = std::max(1L, std::lround(len / h));
    const double width = len / static_cast<double>(count);
    for (long k = 0; k < count; ++k) {
      const double lo = cuts[c] + k * width;
      const double theta = lo + 0.5 * width;
      w.theta.push_back(theta);
      w.left.push_back(lo);
      w.cell.push_back(width / h);
      w.sin_theta.push_back(std::sin(theta));
      w.mf.push_back(table ? svpwm_modulating_function(*table, theta, op.phi)
                           : modulating_function(s, op.modulation_index, theta, op.phi));
    }
  }
  return w;
}

// Duty of the role's conduction at one instant; 0 outside its window.
double conduction_duty(Role role, double i, double mf) {
  const double pos = std::max(mf, 0.0);
  const double neg = std::max(-mf, 0.0);
  switch (role) {
    case Role::S1:
      return i > 0.0 ? pos : 0.0;
    case Role::S2:
      return i > 0.0 ? 1.0 - neg : 0.0;
    case Role::S3:
      return i < 0.0 ? 1.0 - pos : 0.0;
    case Role::S4:
      return i < 0.0 ? neg : 0.0;
    case Role::D1:
    case Role::D2:
      return i < 0.0 ? pos : 0.0;
    case Role::D3:
    case Role::D4:
      return i > 0.0 ? neg : 0.0;
    case Role::D5:
      return i > 0.0 ? 1.0 - std::abs(mf) : 0.0;
    case Role::D6:
      return i < 0.0 ? 1.0 - std::abs(mf) : 0.0;
  }
  return 0.0;
}

// 1 where the role takes part in a commutation at this instant.
bool commutates(Role role, double i, double mf) {
  if (i == 0.0 || mf == 0.0) return false;
  const bool ip = i > 0.0;
  const bool mp = mf > 0.0;
  switch (role) {
    case Role::S1:
    case Role::D5:
      return ip && mp;
    case Role::S3:
    case Role::D1:
      return !ip && mp;
    case Role::S4:
    case Role::D6:
      return !ip && !mp;
    case Role::S2:
    case Role::D4:
      return ip && !mp;
    case Role::D2:
    case Role::D3:
      return false;
  }
  return false;
}

void require_kind(Role role, const DevicePhysics& dev) {
  const bool sw = std::holds_alternative<SwitchPhysics>(dev);
  if (sw != is_switch(role)) {
    throw DomainError(std::string("role ") + std::string(to_string(role)) + " needs a " +
                      (is_switch(role) ? "switch" : "diode") + " model");
  }
}

// Peak conduction power, the absolute scale for quadrature checks.
double power_scale(const OnStateLine& line, double i_max) {
  return (line.r * i_max + line.v0) * i_max;
}

double conduction_at(Strategy s, Role role, const OnStateLine& line, const OperatingPoint& op,
                     int n) {
  const Waveform w = sample_waveform(s, op, n);
  std::vector<double> current(w.sin_theta.size());
  std::vector<double> weight(w.sin_theta.size());
  for (std::size_t k = 0; k < current.size(); ++k) {
    const double i = op.i_max * w.sin_theta[k];
    current[k] = std::abs(i);
    weight[k] = conduction_duty(role, i, w.mf[k]) * w.cell[k];
  }
  return kernels::conduction_sum(current, weight, line.r, line.v0) / n;
}

// Mean over the period of E(|i|) on the role's commutation window. The
// window is an indicator, so plain midpoint sums are only first order; each
// edge is located by bisection and the two cells around it are reweighted.
double commutation_mean(Strategy s, Role role, const std::vector<const EnergyFit*>& fits,
                        const OperatingPoint& op, int n) {
  const Waveform w = sample_waveform(s, op, n);
  const double amp = op.modulation_index * op.i_max;
  std::vector<double> current(w.sin_theta.size());
  std::vector<double> window(w.sin_theta.size());
  for (std::size_t k = 0; k < current.size(); ++k) {
    const double i = amp * w.sin_theta[k];
    current[k] = std::abs(i);
    window[k] = commutates(role, i, w.mf[k]) ? 1.0 : 0.0;
  }
  std::vector<double> weighted(window.size());
  for (std::size_t k = 0; k < window.size(); ++k) weighted[k] = window[k] * w.cell[k];

  std::optional<SvpwmRegionTable> table;
  if (s == Strategy::svpwm) table.emplace(op.modulation_index);
  const auto inside = [&](double theta) {
    const double mf = table ? svpwm_modulating_function(*table, theta, op.phi)
                            : modulating_function(s, op.modulation_index, theta, op.phi);
    return commutates(role, amp * std::sin(theta), mf);
  };
  const auto energy_at = [&](const EnergyFit& fit, double i) {
    const double e = fit.evaluate(i);
    if (e < 0.0) (void)commutation_energy(fit, i);  // raises the model-validity error
    return e;
  };

  const double h = 2.0 * kPi / n;
  double sum = 0.0;
  for (const EnergyFit* fit : fits) {
    std::vector<double> energy(current.size());
    kernels::double_exponential(current, fit->a, fit->b, fit->c, fit->d, energy);
    for (std::size_t k = 0; k < energy.size(); ++k) {
      if (window[k] != 0.0 && energy[k] < 0.0) (void)commutation_energy(*fit, current[k]);
    }
    sum += kernels::dot(energy, weighted);
  }

  // Edge corrections between consecutive midpoints (cyclic).
  const std::size_t m = window.size();
  for (std::size_t cur = 0; cur < m; ++cur) {
    const std::size_t prev = (cur + m - 1) % m;
    if (window[prev] == window[cur]) continue;
    double lo = cur == 0 ? w.theta[prev] - 2.0 * kPi : w.theta[prev];
    double hi = w.theta[cur];
    const bool lo_in = window[prev] != 0.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (inside(mid) == lo_in) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double edge = 0.5 * (lo + hi);
    // The midpoint rule puts the edge at the shared cell boundary.
    const double shift = (edge - w.left[cur]) / h;
    const double i_edge = std::abs(amp * std::sin(edge));
    for (const EnergyFit* fit : fits) {
      sum += shift * (window[prev] - window[cur]) * energy_at(*fit, i_edge);
    }
  }
  return sum / n;
}

template <typename F>
double checked_quadrature(F&& at, const QuadratureOptions& q, double floor, const char* what) {
  if (q.samples < 16) throw DomainError("quadrature needs at least 16 samples per period");
  const double fine = at(q.samples);
  const double coarse = at(q.samples / 2);
  const double diff = std::abs(fine - coarse);
  if (diff > q.tolerance * std::max(std::abs(fine), floor)) {
    std::ostringstream os;
    os << what << ": quadrature did not settle (" << q.samples << " samples give " << fine
       << " W, " << q.samples / 2 << " give " << coarse << " W); increase the sample count";
    throw NumericError(os.str());
  }
  return fine;
}

// --- closed forms ----------------------------------------------------------

double spwm_closed(Role role, double m, double f, double i, double r, double v) {
  const double c = std::cos(f);
  const double s = std::sin(f);
  switch (role) {
    case Role::S1:
    case Role::S4:
      return m * r * i * i / (6.0 * kPi) * (1.0 + c) * (1.0 + c) +
             m * i * v / (4.0 * kPi) * ((kPi - f) * c + s);
    case Role::S2:
    case Role::S3:
      return r * i * i / 4.0 + i * v / kPi - m * r * i * i / (6.0 * kPi) * (1.0 - c) * (1.0 - c) +
             m * i * v / (4.0 * kPi) * (f * c - s);
    case Role::D1:
    case Role::D2:
    case Role::D3:
    case Role::D4:
      return m * v * i / (4.0 * kPi) * (s - f * c) +
             m * r * i * i / (6.0 * kPi) * (1.0 - c) * (1.0 - c);
    case Role::D5:
    case Role::D6:
      return r * i * i / 4.0 + i * v / kPi +
             m * (i * v / (4.0 * kPi) * ((2.0 * f - kPi) * c - 2.0 * s) -
                  r * i * i / (3.0 * kPi) * (1.0 + c * c));
  }
  return 0.0;
}

double thipwm_closed(Role role, double m, double f, double i, double r, double v, double k_s4) {
  const double c = std::cos(f);
  const double s = std::sin(f);
  const double s4 = std::pow(std::sin(f / 2.0), 4);
  const double c4 = std::pow(std::cos(f / 2.0), 4);
  switch (role) {
    case Role::S1:
    case Role::S4:
      return m * i / (180.0 * kSqrt3 * kPi) *
             (8.0 * i * r * c4 * (37.0 - 8.0 * c) +
              15.0 * v * (6.0 * (kPi - f) * c + (6.0 + s * s) * s));
    case Role::S2:
    case Role::S3:
      return i / (540.0 * kPi) *
             (-k_s4 * kSqrt3 * m * i * r * s4 +
              2.0 * kSqrt3 * m * c * (45.0 * f * v - 32.0 * i * r * s4) +
              15.0 * (9.0 * kPi * i * r + 36.0 * v - 6.0 * kSqrt3 * m * v * s -
                      kSqrt3 * m * v * s * s * s));
    case Role::D1:
    case Role::D2:
    case Role::D3:
    case Role::D4:
      return m * i / (180.0 * kSqrt3 * kPi) *
             (k_s4 * i * r * s4 + c * (-90.0 * f * v + 64.0 * i * r * s4) +
              15.0 * v * (6.0 + s * s) * s);
    case Role::D5:
    case Role::D6:
      return i / (1080.0 * kPi) *
             (-180.0 * kSqrt3 * m * (kPi - 2.0 * f) * v * c -
              84.0 * kSqrt3 * m * i * r * std::cos(2.0 * f) +
              5.0 * (-76.0 * kSqrt3 * m * i * r + 54.0 * kPi * i * r + 216.0 * v -
                     81.0 * kSqrt3 * m * v * s + 3.0 * kSqrt3 * m * v * std::sin(3.0 * f)));
  }
  return 0.0;
}

double closed_form(Strategy s, Role role, const DevicePhysics& dev, const OperatingPoint& op,
                   double k_s4) {
  op.validate();
  require_kind(role, dev);
  const OnStateLine line = on_state_line(dev);
  const double m = op.modulation_index;
  switch (s) {
    case Strategy::spwm:
      return spwm_closed(role, m, op.phi, op.i_max, line.r, line.v0);
    case Strategy::thipwm:
      return thipwm_closed(role, m, op.phi, op.i_max, line.r, line.v0, k_s4);
    case Strategy::svpwm:
      break;
  }
  throw UnsupportedStrategyError(
      "no closed-form conduction loss exists for SVPWM; use conduction_loss_numeric");
}

}  // namespace

std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }

Role parse_role(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Role r : kAllRoles) {
    if (upper == to_string(r)) return r;
  }
  throw DomainError("unknown device role '" + std::string(name) + "'");
}

bool is_switch(Role r) { return r == Role::S1 || r == Role::S2 || r == Role::S3 || r == Role::S4; }
bool is_clamp_diode(Role r) { return r == Role::D5 || r == Role::D6; }

std::string_view to_string(Leg l) {
  switch (l) {
    case Leg::A:
      return "A";
    case Leg::B:
      return "B";
    case Leg::C:
      return "C";
  }
  return "?";
}

DevicePhysics DeviceSet::physics(Role r) const {
  switch (r) {
    case Role::S1:
    case Role::S4:
      return outer_switch;
    case Role::S2:
    case Role::S3:
      return inner_switch;
    case Role::D5:
    case Role::D6:
      return clamp;
    default:
      return freewheel;
  }
}

double conduction_loss_closed_form(Strategy s, Role role, const DevicePhysics& dev,
                                   const OperatingPoint& op) {
  return closed_form(s, role, dev, op, 269.0);
}

double conduction_loss_closed_form_corrected(Strategy s, Role role, const DevicePhysics& dev,
                                             const OperatingPoint& op) {
  return closed_form(s, role, dev, op, 296.0);
}

double conduction_loss_numeric(Strategy s, Role role, const DevicePhysics& dev,
                               const OperatingPoint& op, const QuadratureOptions& q) {
  op.validate();
  require_kind(role, dev);
  const OnStateLine line = on_state_line(dev);
  return checked_quadrature([&](int n) { return conduction_at(s, role, line, op, n); }, q,
                            1e-9 * power_scale(line, op.i_max), "conduction loss");
}

double switching_loss(Role role, const DevicePhysics& dev, const OperatingPoint& op, Strategy s,
                      const QuadratureOptions& q) {
  op.validate();
  require_kind(role, dev);
  std::vector<const EnergyFit*> fits;
  if (const auto* sw = std::get_if<SwitchPhysics>(&dev)) {
    fits = {&sw->eon, &sw->eoff};
  } else if (role != Role::D2 && role != Role::D3) {
    fits = {&std::get<DiodePhysics>(dev).erec};
  }
  if (fits.empty() || op.i_max == 0.0) return 0.0;
  // Results below a thousandth of the per-period energy at peak current are
  // judged on that absolute scale.
  double floor = 0.0;
  for (const EnergyFit* f : fits) floor += std::abs(f->evaluate(op.modulation_index * op.i_max));
  return op.f_sw * checked_quadrature(
                       [&](int n) { return commutation_mean(s, role, fits, op, n); }, q,
                       1e-3 * floor, "switching loss");
}

double switching_loss_point_by_point(Role role, const DevicePhysics& dev,
                                     const OperatingPoint& op, Strategy s) {
  op.validate();
  require_kind(role, dev);
  const auto* sw = std::get_if<SwitchPhysics>(&dev);
  const auto* di = std::get_if<DiodePhysics>(&dev);

  const double period = 1.0 / op.f_out;
  const double ts = 1.0 / op.f_sw;
  const double w0 = 2.0 * kPi * op.f_out;
  const auto current = [&](double t) {
    return load_current(op.modulation_index, w0 * t, op.phi, op.i_max);
  };
  const auto energy = [](const EnergyFit& fit, double i) {
    return i == 0.0 ? 0.0 : commutation_energy(fit, std::abs(i));
  };

  double total = 0.0;
  for (int k = 0; (k + 1) * ts <= period * (1.0 + 1e-12); ++k) {
    const double tc = (k + 0.5) * ts;
    const double mf = modulating_function(s, op.modulation_index, w0 * tc, op.phi);
    if (mf == 0.0) continue;
    const double d = std::abs(mf);
    // Active state (1 for MF > 0, 3 for MF < 0) occupies [t_on, t_off].
    const double t_on = tc - 0.5 * d * ts;
    const double t_off = tc + 0.5 * d * ts;
    const double i_on = current(t_on);
    const double i_off = current(t_off);
    const bool mp = mf > 0.0;

    switch (role) {
      case Role::S1:  // on into state 1, off out of it, i > 0
        if (mp && i_on > 0.0) total += energy(sw->eon, i_on);
        if (mp && i_off > 0.0) total += energy(sw->eoff, i_off);
        break;
      case Role::D5:  // displaced by S1 turning on
        if (mp && i_on > 0.0) total += energy(di->erec, i_on);
        break;
      case Role::S3:  // off while state 1 is entered, on when it ends, i < 0
        if (mp && i_on < 0.0) total += energy(sw->eoff, i_on);
        if (mp && i_off < 0.0) total += energy(sw->eon, i_off);
        break;
      case Role::D1:  // displaced by S3 turning back on
        if (mp && i_off < 0.0) total += energy(di->erec, i_off);
        break;
      case Role::S4:
        if (!mp && i_on < 0.0) total += energy(sw->eon, i_on);
        if (!mp && i_off < 0.0) total += energy(sw->eoff, i_off);
        break;
      case Role::D6:
        if (!mp && i_on < 0.0) total += energy(di->erec, i_on);
        break;
      case Role::S2:
        if (!mp && i_on > 0.0) total += energy(sw->eoff, i_on);
        if (!mp && i_off > 0.0) total += energy(sw->eon, i_off);
        break;
      case Role::D4:
        if (!mp && i_off > 0.0) total += energy(di->erec, i_off);
        break;
      case Role::D2:
      case Role::D3:
        break;
    }
  }
  return total / period;
}

LossDistribution loss_distribution(const OperatingPoint& op, Strategy s, const DeviceSet& devices,
                                   const QuadratureOptions& q) {
  LossDistribution out;
  for (Role r : kAllRoles) {
    const DevicePhysics dev = devices.physics(r);
    LossBreakdown b{conduction_loss_numeric(s, r, dev, op, q), switching_loss(r, dev, op, s, q)};
    out.per_role[r] = b;
    out.leg_total.p_cond += b.p_cond;
    out.leg_total.p_sw += b.p_sw;
  }
  out.inverter_total = {3.0 * out.leg_total.p_cond, 3.0 * out.leg_total.p_sw};
  return out;
}

std::vector<ClosedFormCheck> validate_closed_forms(const DeviceSet& devices, double i_max,
                                                   const std::vector<double>& m_grid,
                                                   const std::vector<double>& phi_grid,
                                                   double threshold) {
  std::vector<ClosedFormCheck> out;
  for (Strategy s : {Strategy::spwm, Strategy::thipwm}) {
    for (Role r : {Role::S1, Role::S2, Role::D1, Role::D5}) {
      const DevicePhysics dev = devices.physics(r);
      for (double m : m_grid) {
        for (double phi : phi_grid) {
          OperatingPoint op;
          op.modulation_index = m;
          op.phi = phi;
          op.i_max = i_max;
          const double cf = conduction_loss_closed_form(s, r, dev, op);
          const double num = conduction_loss_numeric(s, r, dev, op);
          const double scale = std::max(std::abs(num), 1e-12);
          const double err = std::abs(cf - num) / scale;
          out.push_back({s, r, m, phi, cf, num, err, err > threshold});
        }
      }
    }
  }
  return out;
}

}  // namespace npc
