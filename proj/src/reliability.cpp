#include "npcrel/reliability.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "npcrel/errors.hpp"

namespace npc {

std::string_view to_string(PartType t) {
  switch (t) {
    case PartType::mosfet:
      return "mosfet";
    case PartType::diode:
      return "diode";
    case PartType::capacitor:
      return "capacitor";
  }
  return "?";
}

std::string_view to_string(PartClass c) {
  switch (c) {
    case PartClass::mosfet:
      return "mosfet";
    case PartClass::freewheel_diode:
      return "freewheel_diode";
    case PartClass::clamp_diode:
      return "clamp_diode";
    case PartClass::capacitor:
      return "capacitor";
  }
  return "?";
}

PartType part_type_of(PartClass c) {
  switch (c) {
    case PartClass::mosfet:
      return PartType::mosfet;
    case PartClass::capacitor:
      return PartType::capacitor;
    default:
      return PartType::diode;
  }
}

double pi_t(PartType type, double t_degC) {
  if (!(t_degC > -273.0)) throw DomainError("temperature below absolute zero");
  double k = 0.0;
  switch (type) {
    case PartType::mosfet:
      k = 1925.0;
      break;
    case PartType::diode:
      k = 3091.0;
      break;
    case PartType::capacitor:
      k = 4062.0;
      break;
  }
  return std::exp(-k * (1.0 / (t_degC + 273.0) - 1.0 / 298.0));
}

double pi_s_diode(double vs) {
  if (!(vs >= 0.0)) throw DomainError("diode voltage stress ratio must be non-negative");
  if (vs > 1.0) {
    throw StressOverrangeError("diode reverse voltage exceeds its rating (V_S = " +
                               std::to_string(vs) + ")");
  }
  return vs <= 0.3 ? 0.054 : std::pow(vs, 2.43);
}

double pi_cp(double capacitance_uF) {
  if (!(capacitance_uF > 0.0)) throw DomainError("capacitance must be positive");
  return std::pow(capacitance_uF, 0.23);
}

std::vector<std::string_view> required_factors(PartType type) {
  switch (type) {
    case PartType::mosfet:
      return {"lambda_b", "pi_t", "pi_a", "pi_q", "pi_e"};
    case PartType::diode:
      return {"lambda_b", "pi_t", "pi_s", "pi_c", "pi_q", "pi_e"};
    case PartType::capacitor:
      return {"lambda_b", "pi_t", "pi_cp", "pi_v", "pi_sr", "pi_q", "pi_e"};
  }
  return {};
}

namespace {

const std::optional<double>& factor(const StressFactorSet& f, std::string_view name) {
  if (name == "lambda_b") return f.lambda_b;
  if (name == "pi_t") return f.pi_t;
  if (name == "pi_a") return f.pi_a;
  if (name == "pi_q") return f.pi_q;
  if (name == "pi_e") return f.pi_e;
  if (name == "pi_s") return f.pi_s;
  if (name == "pi_c") return f.pi_c;
  if (name == "pi_cp") return f.pi_cp;
  if (name == "pi_v") return f.pi_v;
  return f.pi_sr;
}

}  // namespace

double part_failure_rate(PartType type, const StressFactorSet& factors) {
  double rate = 1.0;
  for (std::string_view name : required_factors(type)) {
    const auto& v = factor(factors, name);
    if (!v) {
      throw ConfigError(std::string(to_string(type)) + " failure rate needs factor " +
                        std::string(name));
    }
    if (!(*v > 0.0)) {
      throw DomainError("factor " + std::string(name) + " must be positive");
    }
    rate *= *v;
  }
  return rate;
}

PartFailureRate part_failure_rate(std::string part_id, PartClass cls,
                                  const StressFactorSet& factors) {
  return {std::move(part_id), cls, part_failure_rate(part_type_of(cls), factors)};
}

double inverter_failure_rate(std::span<const PartFailureRate> parts,
                             std::vector<std::string>* warnings) {
  if (parts.empty()) throw DomainError("inverter failure rate of an empty part list");
  if (warnings) {
    std::map<PartClass, int> count;
    for (const auto& p : parts) ++count[p.part_class];
    const std::map<PartClass, int> canonical{{PartClass::mosfet, 12},
                                             {PartClass::freewheel_diode, 12},
                                             {PartClass::clamp_diode, 6},
                                             {PartClass::capacitor, 2}};
    for (const auto& [cls, n] : canonical) {
      const int have = count.count(cls) ? count.at(cls) : 0;
      if (have != n) {
        std::ostringstream os;
        os << "part list has " << have << " " << to_string(cls) << " entries, the three-level NPC has "
           << n;
        warnings->push_back(os.str());
      }
    }
  }
  // Sum in the order given; callers pass a fixed order so results are reproducible.
  double total = 0.0;
  for (const auto& p : parts) total += p.rate;
  return total;
}

double mttf_hours(double lambda_total) {
  if (!(lambda_total > 0.0)) throw DomainError("MTTF needs a positive failure rate");
  return 1e6 / lambda_total;
}

std::map<PartClass, double> contribution_shares(std::span<const PartFailureRate> parts) {
  if (parts.empty()) throw DomainError("contribution shares of an empty part list");
  std::map<PartClass, double> sums;
  double total = 0.0;
  for (const auto& p : parts) {
    sums[p.part_class] += p.rate;
    total += p.rate;
  }
  if (!(total > 0.0)) throw DomainError("contribution shares need a positive total rate");
  for (auto& [cls, v] : sums) v = 100.0 * v / total;
  return sums;
}

double capacitor_lifetime(const CapacitorLifetimeModel& model, double v, double t_kelvin,
                          double xi) {
  if (!(model.l0 > 0.0)) throw ConfigError("capacitor lifetime model needs L0 > 0");
  if (!(model.v0 > 0.0) || !(model.t0 > 0.0)) {
    throw ConfigError("capacitor lifetime model needs positive V0 and T0");
  }
  if (!(v > 0.0) || !(t_kelvin > 0.0)) {
    throw DomainError("capacitor lifetime needs positive voltage and absolute temperature");
  }
  const double ratio = v / model.v0;
  const double arrhenius =
      std::exp(model.ea / model.kb * (1.0 / t_kelvin - 1.0 / model.t0));
  switch (model.kind) {
    case CapacitorLifetimeModel::Kind::arrhenius_power:
      return model.l0 * std::pow(ratio, -model.n) * arrhenius;
    case CapacitorLifetimeModel::Kind::ten_degree_doubling:
      return model.l0 * std::pow(ratio, -model.n) * std::exp2((model.t0 - t_kelvin) / 10.0);
    case CapacitorLifetimeModel::Kind::three_regime: {
      if (!model.regimes) {
        throw ConfigError("three-regime capacitor model needs its regime constants");
      }
      const auto& r = *model.regimes;
      if (!(r.xi_low < r.xi_high)) {
        throw ConfigError("three-regime thresholds must satisfy xi_low < xi_high");
      }
      if (xi < r.xi_low) return model.l0 * ratio * arrhenius;
      if (xi <= r.xi_high) return model.l0 * std::pow(ratio, -model.n) * arrhenius;
      const double ea = r.ea0 - xi * r.a0;
      return model.l0 * std::exp(r.a1 * (model.v0 - v)) *
             std::exp(ea / model.kb * (1.0 / t_kelvin - 1.0 / model.t0));
    }
  }
  return 0.0;
}

}  // namespace npc
