#include "npcrel/dclink.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "npcrel/errors.hpp"

namespace npc {
namespace {

constexpr double kPi = std::numbers::pi;

void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  out.append(buf.data(), end);
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  return theta < 0.0 ? theta + 2.0 * kPi : theta;
}

}  // namespace

void CapacitorSpec::validate() const {
  if (!(capacitance_uF > 0.0)) throw ConfigError("capacitance must be positive");
  if (!(v_rated > 0.0)) throw ConfigError("capacitor rated voltage must be positive");
  if (!(pi_q > 0.0) || !(pi_sr > 0.0)) throw ConfigError("capacitor factors must be positive");
}

double voltage_stress(const AppliedVoltage& applied, const CapacitorSpec& spec) {
  return (applied.v_dc + std::numbers::sqrt2 * applied.v_ac) / (0.6 * spec.v_rated);
}

double pi_v(double s) {
  if (!(s >= 0.0)) throw DomainError("voltage stress must be non-negative");
  return std::pow(s / 0.6, 5.0) + 1.0;
}

DclinkResult simulate_np_voltages(Strategy s, const OperatingPoint& op, const CapacitorSpec& c1,
                                  const CapacitorSpec& c2, const NpPolicy& policy,
                                  const DclinkSimOptions& options) {
  op.validate();
  c1.validate();
  c2.validate();
  if (options.cycles < 10) {
    throw DomainError("the neutral-point simulation needs at least 10 fundamental cycles");
  }
  if (!(options.balancing_resistance > 0.0)) {
    throw ConfigError("balancing resistance must be positive");
  }
  if (!(policy.common_mode_bias >= 0.0 && policy.common_mode_bias <= 1.0)) {
    throw ConfigError("common-mode bias must lie in [0, 1]");
  }

  const double dt = options.dt;
  const double c_sum = (c1.capacitance_uF + c2.capacitance_uF) * 1e-6;
  const double tau = options.balancing_resistance * c_sum / 2.0;
  const double t_carrier = 1.0 / op.f_sw;
  if (!(dt > 0.0) || dt > t_carrier / 20.0) {
    throw StepSizeError("time step must resolve the carrier with at least 20 steps per period");
  }
  if (dt > 0.1 * tau) {
    throw StepSizeError("time step too large for the capacitor/balancing-resistor time constant");
  }

  const double period = 1.0 / op.f_out;
  const auto steps = static_cast<long>(std::llround(options.cycles * period / dt));
  const long measure_from = steps / 2;
  const double w0 = 2.0 * kPi * op.f_out;
  const double m = op.modulation_index;
  const double vdc = op.v_dc;

  std::optional<SvpwmRegionTable> table;
  if (s == Strategy::svpwm) table.emplace(m);

  DclinkResult out;
  if (options.record_trace) {
    out.trace.time.reserve(static_cast<std::size_t>(steps + 1));
    out.trace.v_c1.reserve(static_cast<std::size_t>(steps + 1));
    out.trace.v_c2.reserve(static_cast<std::size_t>(steps + 1));
  }

  double v1 = vdc / 2.0;
  double sum1 = 0.0;
  double sumsq1 = 0.0;
  double sum_np = 0.0;
  long measured = 0;
  const double max_step = 0.01 * vdc;

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (options.record_trace) {
      out.trace.time.push_back(t);
      out.trace.v_c1.push_back(v1);
      out.trace.v_c2.push_back(vdc - v1);
    }
    if (k >= measure_from) {
      sum1 += v1;
      sumsq1 += v1 * v1;
      ++measured;
    }
    if (k == steps) break;

    std::array<double, 3> ref{};
    std::array<double, 3> cur{};
    for (int x = 0; x < 3; ++x) {
      const double theta = wrap_angle(w0 * t - 2.0 * kPi * x / 3.0);
      ref[static_cast<std::size_t>(x)] =
          table ? svpwm_modulating_function(*table, theta, op.phi)
                : modulating_function(s, m, theta, op.phi);
      cur[static_cast<std::size_t>(x)] = load_current(m, theta, op.phi, op.i_max);
    }
    const double cm = policy.common_mode_bias * (1.0 - *std::max_element(ref.begin(), ref.end()));

    // Triangle in [0, 1], peak at the start of each carrier period.
    const double phase = t / t_carrier - std::floor(t / t_carrier);
    const double upper = std::abs(2.0 * phase - 1.0);
    const double lower = upper - 1.0;
    double i_np = 0.0;
    for (std::size_t x = 0; x < 3; ++x) {
      const double r = ref[x] + cm;
      const bool zero_state = !(r > upper) && !(r < lower);
      if (zero_state) i_np += cur[x];
    }
    if (k >= measure_from) sum_np += i_np;

    const double dv = dt * (i_np + (vdc - 2.0 * v1) / options.balancing_resistance) / c_sum;
    if (!(std::abs(dv) <= max_step)) {
      throw StepSizeError("capacitor voltage moved more than 1% of the bus in one step");
    }
    v1 += dv;
  }

  const double n = static_cast<double>(measured);
  const double mean1 = sum1 / n;
  const double var1 = std::max(0.0, sumsq1 / n - mean1 * mean1);
  const double ripple = var1 < 1e-18 * vdc * vdc ? 0.0 : std::sqrt(var1);
  out.c1 = {mean1, ripple};
  out.c2 = {vdc - mean1, ripple};
  out.mean_np_current = sum_np / n;
  return out;
}

std::string format_trace(const DclinkTrace& trace) {
  std::string out = "time_s v_c1_V v_c2_V\n";
  out.reserve(trace.time.size() * 40 + out.size());
  for (std::size_t k = 0; k < trace.time.size(); ++k) {
    append_number(out, trace.time[k]);
    out.push_back(' ');
    append_number(out, trace.v_c1[k]);
    out.push_back(' ');
    append_number(out, trace.v_c2[k]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace npc
