// npcrel: losses, temperatures and reliability of a three-level NPC inverter.
//
//   npcrel compare  --config cfg.json --mode paper-factors --format csv --out dir
//   npcrel evaluate --strategy SVPWM --mode model
//   npcrel losses   --format plotdata --out dir
//   npcrel simulate-dclink --strategy SVPWM --out dir
//   npcrel dump-default-config
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 numeric error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "npcrel/config.hpp"
#include "npcrel/dclink.hpp"
#include "npcrel/errors.hpp"
#include "npcrel/pipeline.hpp"
#include "npcrel/report_io.hpp"

namespace {

struct Common {
  std::string config;
  std::string mode;
  std::string dclink_source;
  std::string format = "json";
  std::string out;
  std::string strategy;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_strategy, bool with_threads) {
  cmd->add_option("--config", c.config, "JSON configuration file (defaults if omitted)");
  cmd->add_option("--mode", c.mode, "paper-factors or model (overrides the config)");
  cmd->add_option("--dclink-source", c.dclink_source, "config or simulate (overrides the config)");
  cmd->add_option("--format", c.format, "json, csv or plotdata");
  cmd->add_option("--out", c.out, "output directory; stdout when omitted");
  if (with_strategy) cmd->add_option("--strategy", c.strategy, "SPWM, THIPWM or SVPWM");
  if (with_threads) cmd->add_option("--threads", c.threads, "worker threads for strategies");
}

npc::RunConfig load_config(const Common& c) {
  npc::RunConfig cfg = c.config.empty() ? npc::RunConfig::defaults() : npc::RunConfig::load(c.config);
  if (!c.mode.empty()) cfg.mode = npc::parse_mode(c.mode);
  if (!c.dclink_source.empty()) cfg.dclink_source = npc::parse_dclink_source(c.dclink_source);
  return cfg;
}

// Keeps only the requested strategy (all when empty).
void restrict_strategies(npc::RunConfig& cfg, const std::string& name) {
  if (name.empty()) return;
  npc::Strategy s;
  try {
    s = npc::parse_strategy(name);
  } catch (const npc::DomainError& e) {
    throw npc::ConfigError(e.what());
  }
  const npc::StrategyInputs in = cfg.inputs(s);
  cfg.strategies.clear();
  cfg.strategies[s] = in;
}

int emit(const npc::ComparisonReport& rep, const npc::RunConfig& cfg, const Common& c,
         const std::string& stdout_csv) {
  const npc::OutputFormat fmt = npc::parse_format(c.format);
  if (!c.out.empty()) {
    for (const auto& p : npc::emit_report(rep, fmt, cfg, c.out)) std::cerr << "wrote " << p.string() << "\n";
    return 0;
  }
  switch (fmt) {
    case npc::OutputFormat::json:
      std::cout << npc::to_json(rep).dump(2) << "\n";
      break;
    case npc::OutputFormat::csv:
      std::cout << stdout_csv;
      break;
    case npc::OutputFormat::plotdata:
      throw npc::ConfigError("plotdata writes several files; pass --out <dir>");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss, temperature and reliability evaluation of three-level NPC inverters"};
  app.require_subcommand(1);

  Common evaluate_opts;
  Common compare_opts;
  Common losses_opts;
  Common dclink_opts;
  int cycles = 0;

  auto* evaluate = app.add_subcommand("evaluate", "Full chain for one strategy");
  add_common(evaluate, evaluate_opts, true, false);
  auto* compare = app.add_subcommand("compare", "Full chain for every strategy, with MTTF comparison");
  add_common(compare, compare_opts, false, true);
  auto* losses = app.add_subcommand("losses", "Device losses and temperatures");
  add_common(losses, losses_opts, true, true);
  auto* dclink = app.add_subcommand("simulate-dclink", "Neutral-point capacitor voltage simulation");
  add_common(dclink, dclink_opts, true, false);
  dclink->add_option("--cycles", cycles, "fundamental cycles to simulate (>= 10)");
  auto* dump = app.add_subcommand("dump-default-config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dump->parsed()) {
      std::cout << npc::RunConfig::defaults().to_json().dump(2) << "\n";
      return 0;
    }
    if (evaluate->parsed()) {
      npc::RunConfig cfg = load_config(evaluate_opts);
      restrict_strategies(cfg, evaluate_opts.strategy.empty() ? "SPWM" : evaluate_opts.strategy);
      npc::ComparisonReport rep = npc::compare_strategies(cfg, 1);
      return emit(rep, cfg, evaluate_opts, npc::parts_csv(rep.strategies));
    }
    if (compare->parsed()) {
      const npc::RunConfig cfg = load_config(compare_opts);
      const npc::ComparisonReport rep = npc::compare_strategies(cfg, compare_opts.threads);
      return emit(rep, cfg, compare_opts, npc::comparison_csv(rep.rows));
    }
    if (losses->parsed()) {
      npc::RunConfig cfg = load_config(losses_opts);
      restrict_strategies(cfg, losses_opts.strategy);
      const npc::ComparisonReport rep = npc::compare_strategies(cfg, losses_opts.threads);
      return emit(rep, cfg, losses_opts, npc::losses_csv(rep.strategies));
    }
    if (dclink->parsed()) {
      npc::RunConfig cfg = load_config(dclink_opts);
      if (cycles != 0) cfg.dclink_sim.cycles = cycles;
      const npc::Strategy s = npc::parse_strategy(dclink_opts.strategy.empty() ? "SVPWM" : dclink_opts.strategy);
      npc::DclinkSimOptions opt = cfg.dclink_sim;
      opt.record_trace = !dclink_opts.out.empty();
      const npc::DclinkResult r =
          npc::simulate_np_voltages(s, cfg.op, cfg.c1, cfg.c2, cfg.inputs(s).np_policy, opt);
      nlohmann::ordered_json j;
      j["strategy"] = std::string(npc::to_string(s));
      j["C1"] = {{"v_dc_V", r.c1.v_dc}, {"v_ac_rms_V", r.c1.v_ac}};
      j["C2"] = {{"v_dc_V", r.c2.v_dc}, {"v_ac_rms_V", r.c2.v_ac}};
      j["mean_np_current_A"] = r.mean_np_current;
      j["pi_v_C1"] = npc::pi_v(npc::voltage_stress(r.c1, cfg.c1));
      j["pi_v_C2"] = npc::pi_v(npc::voltage_stress(r.c2, cfg.c2));
      if (!dclink_opts.out.empty()) {
        std::filesystem::create_directories(dclink_opts.out);
        const auto path = std::filesystem::path(dclink_opts.out) /
                          ("dclink_trace_" + std::string(npc::to_string(s)) + ".txt");
        npc::write_text_file(path, npc::format_trace(r.trace));
        npc::write_text_file(std::filesystem::path(dclink_opts.out) /
                                 ("dclink_summary_" + std::string(npc::to_string(s)) + ".json"),
                             j.dump(2) + "\n");
        std::cerr << "wrote " << path.string() << "\n";
      } else {
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const npc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const npc::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const npc::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
