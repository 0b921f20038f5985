// Command implementations behind the CLI: each takes a resolved scenario
// configuration and produces a CSV table whose comment header embeds the
// full configuration, so every output file is reproducible from its own
// header.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "rocbound/channel_mi.hpp"
#include "rocbound/energy_detector.hpp"
#include "rocbound/monte_carlo.hpp"
#include "rocbound/roc_bound.hpp"
#include "rocbound/scenario_io.hpp"

namespace rocbound::cli {

struct CsvTable {
  std::vector<std::string> comments;  // emitted as '# ...' lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os) const {
    for (const auto& c : comments) os << "# " << c << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << columns[i] << (i + 1 < columns.size() ? "," : "");
    }
    os << "\n";
    char buf[64];
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", row[i]);
        os << buf << (i + 1 < row.size() ? "," : "");
      }
      os << "\n";
    }
  }
};

namespace detail_cli {

/// Mutual information of a scenario together with its (mean) additive SNR
/// and, for Rayleigh gains, the mixture it was averaged over.
struct MiResult {
  double mi = 0.0;
  double snr = 0.0;  // linear; E[Gamma] for random gains
  std::optional<GammaMixture> mixture;
};

inline std::vector<std::pair<double, double>> signal_pmf_of(const Scenario& sc) {
  std::vector<std::pair<double, double>> pmf;
  if (const auto* fs = std::get_if<FixedSignal>(&sc.signal)) {
    double e = 0.0;
    for (const auto& v : fs->values) e += std::norm(v);
    pmf.emplace_back(e, 1.0);
  } else {
    for (const auto& a : std::get<SignalEnergyPmf>(sc.signal).atoms) {
      pmf.emplace_back(a.energy, a.prob);
    }
  }
  return pmf;
}

inline MiResult scenario_mi(const Scenario& sc, const QuadratureRule& hermite = default_hermite(),
                            const QuadratureRule& laguerre = default_laguerre()) {
  const Prior prior(sc.alpha);
  MiResult res;
  res.snr = sc.mean_additive_snr();
  const auto pmf = signal_pmf_of(sc);
  if (const auto* fg = std::get_if<FixedGains>(&sc.gains)) {
    // Fixed gains: condition on the signal energy atom and average.
    double mi = 0.0;
    for (const auto& [energy, prob] : pmf) {
      double snr_m = 0.0;
      for (std::size_t k = 0; k < fg->values.size(); ++k) {
        snr_m += std::norm(fg->values[k]) * energy / sc.noise_vars[k];
      }
      mi += prob * biawgn_mi(prior, snr_m, hermite);
    }
    res.mi = mi;
  } else {
    const auto& rg = std::get<RayleighGains>(sc.gains);
    std::vector<double> mean_snrs(rg.mean_square.size());
    for (std::size_t k = 0; k < rg.mean_square.size(); ++k) {
      mean_snrs[k] = rg.mean_square[k] / sc.noise_vars[k];
    }
    res.mixture = rayleigh_gamma_mixture(mean_snrs, pmf);
    res.mi = averaged_mi(prior, *res.mixture, hermite, laguerre);
  }
  return res;
}

inline void standard_header(CsvTable& table, const ScenarioConfig& cfg, const std::string& command) {
  table.comments.push_back(std::string("rocbound ") + kVersion);
  table.comments.push_back("command: " + command);
  char buf[128];
  std::snprintf(buf, sizeof buf, "alpha: %.12g", cfg.scenario.alpha);
  table.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "seed: %llu", static_cast<unsigned long long>(cfg.scenario.seed));
  table.comments.push_back(buf);
  table.comments.push_back("config: " + cfg.to_json().dump());
}

inline const RocSweep& roc_sweep_of(const ScenarioConfig& cfg, const char* cmd) {
  const auto* sweep = std::get_if<RocSweep>(&cfg.sweep);
  if (!sweep) throw config_error(std::string(cmd) + ": scenario sweep.what must be 'roc'");
  return *sweep;
}

}  // namespace detail_cli

/// ROC lower bound from the information constraint: rows (pfa, pmd_bound).
inline CsvTable cmd_bound(const ScenarioConfig& cfg) {
  const RocSweep& sweep = detail_cli::roc_sweep_of(cfg, "bound");
  const Prior prior(cfg.scenario.alpha);
  const auto mi = detail_cli::scenario_mi(cfg.scenario);

  CsvTable table;
  detail_cli::standard_header(table, cfg, "bound");
  char buf[128];
  std::snprintf(buf, sizeof buf, "snr_linear: %.12g", mi.snr);
  table.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "snr_db: %.12g", detail::linear_to_db(mi.snr));
  table.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "mi_bits: %.12g", mi.mi);
  table.comments.push_back(buf);
  if (mi.mi >= prior.entropy()) {
    table.comments.push_back(
        "warning: mutual information reaches H_b(alpha); the constraint never binds and the bound is "
        "pmd = 0 everywhere");
  }

  const auto grid = sweep.pfa_grid.make();
  const RocCurve curve = roc_lower_bound(prior, mi.mi, grid);
  table.columns = {"pfa", "pmd_bound"};
  for (const auto& p : curve.points) table.rows.push_back({p.pfa, p.pmd});
  return table;
}

/// Analytic energy-detector ROC, optionally with Monte-Carlo estimates:
/// rows (theta, pfa, pmd[, pfa_mc, pfa_ci_low, pfa_ci_high, pmd_mc, ...]).
inline CsvTable cmd_energy_roc(const ScenarioConfig& cfg, bool with_simulation) {
  const RocSweep& sweep = detail_cli::roc_sweep_of(cfg, "energy-roc");
  const Scenario& sc = cfg.scenario;
  const int kn = sc.kn();
  const double snr = sc.mean_additive_snr();
  const auto theta_grid = default_theta_grid(kn, snr, sc.alpha, sweep.theta_count);

  CsvTable table;
  detail_cli::standard_header(table, cfg, "energy-roc");
  char buf[128];
  std::snprintf(buf, sizeof buf, "kn: %d", kn);
  table.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "snr_linear: %.12g", snr);
  table.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "snr_db: %.12g", detail::linear_to_db(snr));
  table.comments.push_back(buf);

  std::optional<GammaMixture> mixture;
  if (const auto* rg = std::get_if<RayleighGains>(&sc.gains)) {
    std::vector<double> mean_snrs(rg->mean_square.size());
    for (std::size_t k = 0; k < rg->mean_square.size(); ++k) {
      mean_snrs[k] = rg->mean_square[k] / sc.noise_vars[k];
    }
    mixture = rayleigh_gamma_mixture(mean_snrs, detail_cli::signal_pmf_of(sc));
    table.comments.push_back("pmd averaged over the fading distribution of the additive SNR");
  }

  table.columns = {"theta", "pfa", "pmd"};
  for (double theta : theta_grid) {
    EnergyDetectorConfig ed{kn, snr, sc.alpha, theta};
    const double pfa = pfa_analytic(ed);
    const double pmd = mixture ? pmd_mixture_analytic(kn, *mixture, sc.alpha, theta) : pmd_analytic(ed);
    table.rows.push_back({theta, pfa, pmd});
  }

  if (with_simulation) {
    table.columns.insert(table.columns.end(),
                         {"pfa_mc", "pfa_ci_low", "pfa_ci_high", "pmd_mc", "pmd_ci_low", "pmd_ci_high"});
    std::snprintf(buf, sizeof buf, "trials: %lld", cfg.trials);
    table.comments.push_back(buf);
    const auto est = estimate_detector_roc(sc, theta_grid, cfg.trials);
    for (std::size_t i = 0; i < est.size(); ++i) {
      auto& row = table.rows[i];
      row.insert(row.end(), {est[i].pfa.value, est[i].pfa.ci_low, est[i].pfa.ci_high,
                             est[i].pmd.value, est[i].pmd.ci_low, est[i].pmd.ci_high});
    }
  }
  return table;
}

/// Equilibrium probability versus additive SNR:
/// rows (snr_db, peq, peq_asymptotic).
inline CsvTable cmd_equilibrium(const ScenarioConfig& cfg) {
  const auto* sweep = std::get_if<EquilibriumSweep>(&cfg.sweep);
  if (!sweep) throw config_error("equilibrium: scenario sweep.what must be 'equilibrium'");
  const Prior prior(cfg.scenario.alpha);

  std::function<double(double)> mi_source;
  if (const auto* rg = std::get_if<RayleighGains>(&cfg.scenario.gains)) {
    std::vector<double> mean_snrs(rg->mean_square.size());
    for (std::size_t k = 0; k < rg->mean_square.size(); ++k) {
      mean_snrs[k] = rg->mean_square[k] / cfg.scenario.noise_vars[k];
    }
    auto mixture = rayleigh_gamma_mixture(mean_snrs, detail_cli::signal_pmf_of(cfg.scenario));
    mi_source = averaged_mi_source(prior, mixture);
  } else {
    mi_source = quadrature_mi_source(prior);
  }

  CsvTable table;
  detail_cli::standard_header(table, cfg, "equilibrium");
  table.columns = {"snr_db", "peq", "peq_asymptotic"};
  const auto grid_db = sweep->snr_grid.make_db();
  std::vector<double> grid_lin(grid_db.size());
  for (std::size_t i = 0; i < grid_db.size(); ++i) grid_lin[i] = detail::db_to_linear(grid_db[i]);
  const auto curve = equilibrium_vs_snr_curve(prior, grid_lin, mi_source);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    table.rows.push_back({grid_db[i], curve[i].peq, equilibrium_asymptotic(curve[i].snr)});
  }
  return table;
}

/// Quadrature MI against the partial sums of the large-SNR expansion:
/// rows (snr_db, snr_linear, mi_quadrature, partial_sum_0.., bracket_ok).
inline CsvTable cmd_asymptotic(const ScenarioConfig& cfg) {
  const auto* sweep = std::get_if<AsymptoticSweep>(&cfg.sweep);
  if (!sweep) throw config_error("asymptotic: scenario sweep.what must be 'asymptotic'");
  const Prior prior(cfg.scenario.alpha);
  const int depth = sweep->depth;

  CsvTable table;
  detail_cli::standard_header(table, cfg, "asymptotic");
  char buf[64];
  std::snprintf(buf, sizeof buf, "depth: %d", depth);
  table.comments.push_back(buf);
  table.columns = {"snr_db", "snr_linear", "mi_quadrature"};
  for (int d = 0; d <= depth; ++d) table.columns.push_back("partial_sum_" + std::to_string(d));
  table.columns.push_back("bracket_ok");

  // Slack for the bracket test: the partial-sum bounds are exact, but at
  // very high SNR the quadrature error floor (~1e-13) exceeds the width of
  // the bracket itself.
  constexpr double kSlack = 1e-12;
  for (double snr_db : sweep->snr_grid.make_db()) {
    const double snr = detail::db_to_linear(snr_db);
    const double quad = biawgn_mi(prior, snr);
    std::vector<double> partial(depth + 1);
    bool ok = true;
    for (int d = 0; d <= depth; ++d) {
      const AsymptoticMi am = biawgn_mi_asymptotic(prior, snr, d);
      partial[d] = am.value;
      if (quad < am.lower - kSlack || quad > am.upper + kSlack) ok = false;
    }
    std::vector<double> row = {snr_db, snr, quad};
    row.insert(row.end(), partial.begin(), partial.end());
    row.push_back(ok ? 1.0 : 0.0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rocbound::cli
