// rocbound: ROC lower bounds for cooperative spectrum sensing.
//
// Subcommands compute the information-theoretic lower-bound ROC of a
// scenario file, the analytic/simulated energy-detector ROC, equilibrium
// probability sweeps and large-SNR expansion diagnostics, all as CSV.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rocbound/commands.hpp"
#include "rocbound/scenario_io.hpp"

namespace {

struct CommonOptions {
  std::string scenario_path;
  std::string out_path;
  bool dump_config = false;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_path, "Output CSV path (stdout when omitted)");
  cmd->add_flag("--dump-config", opt.dump_config,
                "Print the resolved configuration as JSON and exit");
  cmd->add_option("--seed", opt.seed, "Override simulation.seed");
  cmd->add_option("--trials", opt.trials, "Override simulation.trials");
}

int emit(const rocbound::cli::CsvTable& table, const CommonOptions& opt) {
  if (opt.out_path.empty()) {
    table.write(std::cout);
    return 0;
  }
  std::ofstream out(opt.out_path);
  if (!out) {
    std::cerr << "rocbound: cannot open output file " << opt.out_path << "\n";
    return 3;
  }
  table.write(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-theoretic ROC lower bounds for cooperative spectrum sensing"};
  app.require_subcommand(1);

  CommonOptions opt;
  bool simulate = false;
  std::optional<int> depth;

  CLI::App* bound = app.add_subcommand("bound", "Lower-bound ROC curve from the scenario");
  add_common(bound, opt);
  CLI::App* energy = app.add_subcommand("energy-roc", "Analytic energy-detector ROC");
  add_common(energy, opt);
  energy->add_flag("--simulate", simulate, "Append Monte-Carlo estimate columns");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "Equilibrium probability vs additive SNR");
  add_common(equilibrium, opt);
  CLI::App* asymptotic = app.add_subcommand("asymptotic", "Large-SNR expansion diagnostics");
  add_common(asymptotic, opt);
  asymptotic->add_option("--depth", depth, "Override sweep.depth (0..9)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  rocbound::ScenarioConfig cfg;
  try {
    cfg = rocbound::load_scenario_file(opt.scenario_path);
    if (opt.seed) cfg.scenario.seed = *opt.seed;
    if (opt.trials) {
      if (*opt.trials < 1000) throw rocbound::config_error("--trials: must be >= 1000");
      cfg.trials = *opt.trials;
    }
    if (depth) {
      auto* sweep = std::get_if<rocbound::AsymptoticSweep>(&cfg.sweep);
      if (!sweep) throw rocbound::config_error("--depth: scenario sweep.what must be 'asymptotic'");
      if (*depth < 0 || *depth > 9) throw rocbound::config_error("--depth: must lie in [0,9]");
      sweep->depth = *depth;
    }
  } catch (const rocbound::config_error& e) {
    std::cerr << "rocbound: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rocbound: configuration error: " << e.what() << "\n";
    return 2;
  }

  if (opt.dump_config) {
    std::cout << cfg.to_json().dump(2) << "\n";
    return 0;
  }

  try {
    rocbound::cli::CsvTable table;
    if (bound->parsed()) {
      table = rocbound::cli::cmd_bound(cfg);
    } else if (energy->parsed()) {
      table = rocbound::cli::cmd_energy_roc(cfg, simulate);
    } else if (equilibrium->parsed()) {
      table = rocbound::cli::cmd_equilibrium(cfg);
    } else {
      table = rocbound::cli::cmd_asymptotic(cfg);
    }
    return emit(table, opt);
  } catch (const rocbound::config_error& e) {
    std::cerr << "rocbound: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rocbound: numerical failure: " << e.what() << "\n";
    return 3;
  }
}
