#include "npcrel/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numbers>
#include <thread>

#include "npcrel/errors.hpp"

namespace npc {
namespace {

[[noreturn]] void rethrow_with_context(const std::string& ctx) {
  try {
    throw;
  } catch (const StepSizeError& e) {
    throw StepSizeError(ctx + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(ctx + ": " + e.what());
  } catch (const StressOverrangeError& e) {
    throw StressOverrangeError(ctx + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(ctx + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + ": " + e.what());
  } catch (const ModelValidityError& e) {
    throw ModelValidityError(ctx + ": " + e.what());
  } catch (const FittingError& e) {
    throw FittingError(ctx + ": " + e.what());
  } catch (const UnsupportedStrategyError& e) {
    throw UnsupportedStrategyError(ctx + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(ctx + ": " + e.what());
  }
}

template <typename F>
auto with_context(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    rethrow_with_context(ctx);
  }
}

PartClass class_of(Role r) {
  if (is_switch(r)) return PartClass::mosfet;
  return is_clamp_diode(r) ? PartClass::clamp_diode : PartClass::freewheel_diode;
}

std::string device_name(const RunConfig& cfg, Role r) {
  switch (r) {
    case Role::S1:
    case Role::S4:
      return cfg.selection.outer_switch;
    case Role::S2:
    case Role::S3:
      return cfg.selection.inner_switch;
    case Role::D5:
    case Role::D6:
      return cfg.selection.clamp_diode;
    default:
      return cfg.selection.freewheel_diode;
  }
}

}  // namespace

std::string_view to_string(FactorSource s) { return s == FactorSource::paper ? "paper" : "model"; }

const RoleReport& StrategyReport::role(Role r) const {
  for (const auto& rr : roles) {
    if (rr.role == r) return rr;
  }
  throw DomainError("role " + std::string(to_string(r)) + " missing from report");
}

StrategyReport evaluate_strategy(const RunConfig& cfg, Strategy s) {
  const std::string sname(to_string(s));
  StrategyReport rep;
  rep.strategy = s;
  rep.mode = cfg.mode;
  rep.dclink_source = cfg.dclink_source;

  const StrategyInputs& in = with_context(sname, [&]() -> const StrategyInputs& {
    cfg.op.validate();
    return cfg.inputs(s);
  });
  const DeviceSet devices = with_context(sname, [&] { return cfg.device_set(); });

  for (Role r : kAllRoles) {
    const std::string ctx = sname + "/" + std::string(to_string(r));
    RoleReport rr;
    rr.role = r;
    rr.device = device_name(cfg, r);
    with_context(ctx, [&] {
      const DevicePhysics dev = devices.physics(r);
      rr.loss.p_cond = conduction_loss_numeric(s, r, dev, cfg.op, cfg.quadrature);
      rr.loss.p_sw = switching_loss(r, dev, cfg.op, s, cfg.quadrature);
      rr.temperature = junction_temperature(rr.loss.total(), cfg.op.t_ambient, cfg.thermal_path(r));
      return 0;
    });
    rep.inverter_loss.p_cond += 3.0 * rr.loss.p_cond;
    rep.inverter_loss.p_sw += 3.0 * rr.loss.p_sw;
    rep.roles.push_back(rr);
  }

  if (cfg.dclink_source == DclinkSource::simulate) {
    DclinkSimOptions opt = cfg.dclink_sim;
    opt.record_trace = false;
    const DclinkResult sim = with_context(sname + "/dclink", [&] {
      return simulate_np_voltages(s, cfg.op, cfg.c1, cfg.c2, in.np_policy, opt);
    });
    rep.c1 = sim.c1;
    rep.c2 = sim.c2;
  } else {
    rep.c1 = in.c1;
    rep.c2 = in.c2;
  }

  const bool paper = cfg.mode == EvaluationMode::paper_factors;
  const ReliabilitySettings& rel = cfg.reliability;
  for (Leg leg : kAllLegs) {
    for (const RoleReport& rr : rep.roles) {
      const std::string id = std::string(to_string(leg)) + "." + std::string(to_string(rr.role));
      with_context(sname + "/" + id, [&] {
        PartReport part;
        part.temperature_degC = rr.temperature.t_junction;
        part.pi_t_source = paper ? FactorSource::paper : FactorSource::model;
        StressFactorSet& f = part.factors;
        const PartClass cls = class_of(rr.role);
        const PartType type = part_type_of(cls);
        f.pi_t = paper ? in.paper.pi_t.at(group_of(rr.role)) : pi_t(type, rr.temperature.t_junction);
        if (type == PartType::mosfet) {
          f.lambda_b = rel.mosfet.lambda_b;
          f.pi_a = rel.mosfet.pi_a;
          f.pi_q = rel.mosfet.pi_q;
          f.pi_e = rel.mosfet.pi_e;
        } else {
          f.lambda_b = rel.diode.lambda_b;
          f.pi_c = rel.diode.pi_c;
          f.pi_q = rel.diode.pi_q;
          f.pi_e = rel.diode.pi_e;
          const double vs = cls == PartClass::clamp_diode ? rel.clamp_v_s : rel.freewheel_v_s;
          f.pi_s = paper ? in.paper.pi_s : pi_s_diode(vs);
        }
        part.rate = part_failure_rate(id, cls, f);
        rep.parts.push_back(part);
        return 0;
      });
    }
  }

  const double t_hot = rel.capacitor_hotspot_degC;
  for (int k = 0; k < 2; ++k) {
    const CapacitorSpec& spec = k == 0 ? cfg.c1 : cfg.c2;
    const AppliedVoltage& applied = k == 0 ? rep.c1 : rep.c2;
    const std::string id = k == 0 ? "C1" : "C2";
    with_context(sname + "/" + id, [&] {
      PartReport part;
      part.temperature_degC = t_hot;
      part.pi_t_source = FactorSource::model;
      StressFactorSet& f = part.factors;
      f.lambda_b = rel.capacitor_lambda_b;
      f.pi_t = pi_t(PartType::capacitor, t_hot);
      f.pi_cp = pi_cp(spec.capacitance_uF);
      f.pi_v = paper ? (k == 0 ? in.paper.pi_v_c1 : in.paper.pi_v_c2)
                     : pi_v(voltage_stress(applied, spec));
      f.pi_sr = spec.pi_sr;
      f.pi_q = spec.pi_q;
      f.pi_e = rel.capacitor_pi_e;
      part.rate = part_failure_rate(id, PartClass::capacitor, f);
      rep.parts.push_back(part);
      return 0;
    });
  }

  std::vector<PartFailureRate> rates;
  rates.reserve(rep.parts.size());
  for (const auto& p : rep.parts) rates.push_back(p.rate);
  rep.lambda_total = inverter_failure_rate(rates, &rep.warnings);
  rep.mttf_h = mttf_hours(rep.lambda_total);
  rep.shares_pct = contribution_shares(rates);
  return rep;
}

std::vector<ComparisonRow> comparison_rows(const std::vector<StrategyReport>& reports) {
  std::vector<ComparisonRow> rows;
  if (reports.empty()) return rows;
  double min_mttf = reports.front().mttf_h;
  for (const auto& r : reports) min_mttf = std::min(min_mttf, r.mttf_h);
  for (const auto& r : reports) {
    rows.push_back({r.strategy, r.lambda_total, r.mttf_h, 100.0 * (r.mttf_h / min_mttf - 1.0)});
  }
  return rows;
}

ComparisonReport compare_strategies(const RunConfig& cfg, unsigned threads) {
  std::vector<Strategy> todo;
  for (Strategy s : kAllStrategies) {
    if (cfg.strategies.count(s)) todo.push_back(s);
  }
  std::vector<StrategyReport> results(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        results[i] = evaluate_strategy(cfg, todo[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(todo.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ComparisonReport out;
  out.strategies = std::move(results);
  out.rows = comparison_rows(out.strategies);
  return out;
}

std::vector<LossSurfacePoint> loss_surface(const RunConfig& cfg, Strategy s, Role role) {
  const DeviceSet devices = cfg.device_set();
  const DevicePhysics dev = devices.physics(role);
  const SurfaceGrid& g = cfg.surface;
  std::vector<LossSurfacePoint> out;
  out.reserve(static_cast<std::size_t>(g.m_points * g.phi_points));
  for (int i = 0; i < g.m_points; ++i) {
    const double m = g.m_min + (1.0 - g.m_min) * i / (g.m_points - 1);
    for (int j = 0; j < g.phi_points; ++j) {
      const double phi_deg = g.phi_max_deg * j / (g.phi_points - 1);
      OperatingPoint op = cfg.op;
      op.modulation_index = std::min(m, 1.0);
      op.phi = phi_deg * std::numbers::pi / 180.0;
      const double p = with_context(std::string(to_string(s)) + "/surface", [&] {
        return conduction_loss_numeric(s, role, dev, op, cfg.quadrature) +
               switching_loss(role, dev, op, s, cfg.quadrature);
      });
      out.push_back({op.modulation_index, phi_deg, p});
    }
  }
  return out;
}

}  // namespace npc
