// Scenario files: JSON documents describing a sensing experiment plus the
// sweep a command should run. Parsing is strict (unknown keys are rejected)
// and converts dB quantities to linear exactly once; everything downstream
// is linear-scale. A resolved configuration can be echoed back as JSON that
// re-parses to the same configuration.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rocbound/monte_carlo.hpp"

namespace rocbound {

inline constexpr const char* kVersion = "0.1.0";

/// Schema or semantic problem in a scenario file (CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PfaGridSpec {
  double start = 1e-4;
  double stop = 0.99;
  int count = 200;
  bool log_spacing = true;

  std::vector<double> make() const {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      g[i] = log_spacing ? start * std::pow(stop / start, f) : start + (stop - start) * f;
    }
    return g;
  }
};

struct SnrGridSpec {
  double start_db = -10.0;
  double stop_db = 20.0;
  int count = 61;

  std::vector<double> make_db() const {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
      g[i] = count == 1 ? start_db : start_db + (stop_db - start_db) * i / (count - 1);
    }
    return g;
  }
};

struct RocSweep {
  PfaGridSpec pfa_grid;
  int theta_count = 400;
};
struct EquilibriumSweep {
  SnrGridSpec snr_grid;
};
struct AsymptoticSweep {
  SnrGridSpec snr_grid;
  int depth = 3;
};
using SweepSpec = std::variant<RocSweep, EquilibriumSweep, AsymptoticSweep>;

struct ScenarioConfig {
  Scenario scenario;  // resolved, linear units
  long long trials = 100000;
  SweepSpec sweep = RocSweep{};

  nlohmann::json to_json() const;
};

namespace detail {

using nlohmann::json;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline void expect_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
  if (!obj.is_object()) throw config_error(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw config_error(where + ": unknown key '" + item.key() + "'");
    }
  }
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error(where + ": missing required key '" + key + "'");
  return *it;
}

inline double require_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw config_error(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline int require_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw config_error(where + "." + key + ": expected an integer");
  return v.get<int>();
}

// A per-sensor positive quantity given either as "<base>_db" or
// "<base>_linear", scalar (broadcast) or array of length `count`.
inline std::vector<double> parse_scaled_list(const json& obj, const std::string& base, int count,
                                             const std::string& where) {
  const std::string kdb = base + "_db";
  const std::string klin = base + "_linear";
  const bool has_db = obj.contains(kdb);
  const bool has_lin = obj.contains(klin);
  if (has_db == has_lin) {
    throw config_error(where + ": provide exactly one of '" + kdb + "' or '" + klin + "'");
  }
  const json& v = obj.at(has_db ? kdb : klin);
  std::vector<double> vals;
  if (v.is_number()) {
    vals.assign(count, v.get<double>());
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != count) {
      throw config_error(where + ": expected " + std::to_string(count) + " entries");
    }
    for (const auto& e : v) {
      if (!e.is_number()) throw config_error(where + ": entries must be numbers");
      vals.push_back(e.get<double>());
    }
  } else {
    throw config_error(where + ": expected a number or an array");
  }
  if (has_db) {
    for (double& x : vals) x = db_to_linear(x);
  }
  for (double x : vals) {
    if (!(x > 0.0)) throw config_error(where + ": values must be positive (linear scale)");
  }
  return vals;
}

inline std::vector<std::complex<double>> parse_complex_list(const json& v, int count,
                                                            const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != count) {
    throw config_error(where + ": expected an array of " + std::to_string(count) + " [re, im] pairs");
  }
  std::vector<std::complex<double>> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw config_error(where + ": each entry must be a [re, im] pair");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

inline SweepSpec parse_sweep(const json& sw) {
  const std::string what = require(sw, "what", "sweep").get<std::string>();
  if (what == "roc") {
    expect_keys(sw, {"what", "pfa_grid", "theta_count"}, "sweep");
    RocSweep r;
    if (sw.contains("pfa_grid")) {
      const json& g = sw.at("pfa_grid");
      expect_keys(g, {"start", "stop", "count", "spacing"}, "sweep.pfa_grid");
      if (g.contains("start")) r.pfa_grid.start = require_number(g, "start", "sweep.pfa_grid");
      if (g.contains("stop")) r.pfa_grid.stop = require_number(g, "stop", "sweep.pfa_grid");
      if (g.contains("count")) r.pfa_grid.count = require_int(g, "count", "sweep.pfa_grid");
      if (g.contains("spacing")) {
        const std::string s = g.at("spacing").get<std::string>();
        if (s != "log" && s != "linear") throw config_error("sweep.pfa_grid.spacing: 'log' or 'linear'");
        r.pfa_grid.log_spacing = s == "log";
      }
      if (!(r.pfa_grid.start > 0.0 && r.pfa_grid.stop < 1.0 && r.pfa_grid.start < r.pfa_grid.stop)) {
        throw config_error("sweep.pfa_grid: need 0 < start < stop < 1");
      }
      if (r.pfa_grid.count < 2) throw config_error("sweep.pfa_grid.count: need at least 2");
    }
    if (sw.contains("theta_count")) {
      r.theta_count = require_int(sw, "theta_count", "sweep");
      if (r.theta_count < 2) throw config_error("sweep.theta_count: need at least 2");
    }
    return r;
  }
  if (what == "equilibrium" || what == "asymptotic") {
    expect_keys(sw, {"what", "snr_grid_db", "depth"}, "sweep");
    SnrGridSpec grid;
    if (sw.contains("snr_grid_db")) {
      const json& g = sw.at("snr_grid_db");
      expect_keys(g, {"start", "stop", "count"}, "sweep.snr_grid_db");
      grid.start_db = require_number(g, "start", "sweep.snr_grid_db");
      grid.stop_db = require_number(g, "stop", "sweep.snr_grid_db");
      grid.count = require_int(g, "count", "sweep.snr_grid_db");
      if (grid.count < 1 || !(grid.start_db < grid.stop_db)) {
        throw config_error("sweep.snr_grid_db: need start < stop and count >= 1");
      }
    }
    if (what == "equilibrium") {
      if (sw.contains("depth")) throw config_error("sweep: 'depth' only applies to asymptotic sweeps");
      return EquilibriumSweep{grid};
    }
    AsymptoticSweep a{grid, 3};
    if (sw.contains("depth")) {
      a.depth = require_int(sw, "depth", "sweep");
      if (a.depth < 0 || a.depth > 9) throw config_error("sweep.depth: must lie in [0,9]");
    }
    return a;
  }
  throw config_error("sweep.what: expected 'roc', 'equilibrium' or 'asymptotic'");
}

}  // namespace detail

inline ScenarioConfig parse_scenario_json(const nlohmann::json& root) {
  using detail::expect_keys;
  using detail::require;
  using detail::require_int;
  using detail::require_number;

  expect_keys(root, {"prior", "sensors", "gains", "signal", "sampling", "simulation", "sweep"},
              "scenario");
  ScenarioConfig cfg;
  Scenario& sc = cfg.scenario;

  const auto& prior = require(root, "prior", "scenario");
  expect_keys(prior, {"alpha"}, "prior");
  sc.alpha = require_number(prior, "alpha", "prior");
  if (!(sc.alpha >= 0.0 && sc.alpha <= 1.0)) throw config_error("prior.alpha: must lie in [0,1]");

  const auto& sensors = require(root, "sensors", "scenario");
  expect_keys(sensors, {"k", "noise_vars_db", "noise_vars_linear"}, "sensors");
  sc.sensors = require_int(sensors, "k", "sensors");
  if (sc.sensors < 1) throw config_error("sensors.k: must be >= 1");
  sc.noise_vars = detail::parse_scaled_list(sensors, "noise_vars", sc.sensors, "sensors");

  if (root.contains("sampling")) {
    const auto& sampling = root.at("sampling");
    expect_keys(sampling, {"n"}, "sampling");
    sc.samples = require_int(sampling, "n", "sampling");
    if (sc.samples < 1) throw config_error("sampling.n: must be >= 1");
  }

  const auto& gains = require(root, "gains", "scenario");
  const std::string gmodel = require(gains, "model", "gains").get<std::string>();
  if (gmodel == "fixed") {
    expect_keys(gains, {"model", "values"}, "gains");
    sc.gains = FixedGains{detail::parse_complex_list(require(gains, "values", "gains"), sc.sensors, "gains.values")};
  } else if (gmodel == "rayleigh") {
    expect_keys(gains, {"model", "mean_square_db", "mean_square_linear"}, "gains");
    sc.gains = RayleighGains{detail::parse_scaled_list(gains, "mean_square", sc.sensors, "gains")};
  } else {
    throw config_error("gains.model: expected 'fixed' or 'rayleigh'");
  }

  const auto& signal = require(root, "signal", "scenario");
  const std::string smodel = require(signal, "model", "signal").get<std::string>();
  if (smodel == "fixed") {
    expect_keys(signal, {"model", "values"}, "signal");
    sc.signal = FixedSignal{detail::parse_complex_list(require(signal, "values", "signal"), sc.samples, "signal.values")};
  } else if (smodel == "pmf") {
    expect_keys(signal, {"model", "atoms"}, "signal");
    const auto& atoms = require(signal, "atoms", "signal");
    if (!atoms.is_array() || atoms.empty()) throw config_error("signal.atoms: expected a nonempty array");
    SignalEnergyPmf pmf;
    for (const auto& a : atoms) {
      expect_keys(a, {"energy_db", "energy_linear", "prob"}, "signal.atoms[]");
      const bool has_db = a.contains("energy_db");
      const bool has_lin = a.contains("energy_linear");
      if (has_db == has_lin) {
        throw config_error("signal.atoms[]: provide exactly one of 'energy_db' or 'energy_linear'");
      }
      const double e = has_db ? detail::db_to_linear(require_number(a, "energy_db", "signal.atoms[]"))
                              : require_number(a, "energy_linear", "signal.atoms[]");
      const double p = require_number(a, "prob", "signal.atoms[]");
      if (!(e > 0.0) || !(p >= 0.0)) throw config_error("signal.atoms[]: need energy > 0, prob >= 0");
      pmf.atoms.push_back({e, p});
    }
    double psum = 0.0;
    for (const auto& a : pmf.atoms) psum += a.prob;
    if (std::abs(psum - 1.0) > 1e-10) throw config_error("signal.atoms: probabilities must sum to 1");
    sc.signal = std::move(pmf);
  } else {
    throw config_error("signal.model: expected 'fixed' or 'pmf'");
  }

  if (root.contains("simulation")) {
    const auto& sim = root.at("simulation");
    expect_keys(sim, {"seed", "trials"}, "simulation");
    if (sim.contains("seed")) {
      const auto& v = sim.at("seed");
      if (!v.is_number_unsigned() && !v.is_number_integer()) throw config_error("simulation.seed: integer expected");
      sc.seed = v.get<std::uint64_t>();
    }
    if (sim.contains("trials")) {
      cfg.trials = sim.at("trials").get<long long>();
      if (cfg.trials < 1000) throw config_error("simulation.trials: must be >= 1000");
    }
  }

  cfg.sweep = detail::parse_sweep(require(root, "sweep", "scenario"));
  sc.validate();
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open scenario file: " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("scenario file is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario_json(root);
}

inline nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json root;
  root["prior"] = {{"alpha", scenario.alpha}};
  root["sensors"] = {{"k", scenario.sensors}, {"noise_vars_linear", scenario.noise_vars}};
  root["sampling"] = {{"n", scenario.samples}};
  if (const auto* fg = std::get_if<FixedGains>(&scenario.gains)) {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& h : fg->values) vals.push_back({h.real(), h.imag()});
    root["gains"] = {{"model", "fixed"}, {"values", vals}};
  } else {
    root["gains"] = {{"model", "rayleigh"},
                     {"mean_square_linear", std::get<RayleighGains>(scenario.gains).mean_square}};
  }
  if (const auto* fs = std::get_if<FixedSignal>(&scenario.signal)) {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& s : fs->values) vals.push_back({s.real(), s.imag()});
    root["signal"] = {{"model", "fixed"}, {"values", vals}};
  } else {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : std::get<SignalEnergyPmf>(scenario.signal).atoms) {
      atoms.push_back({{"energy_linear", a.energy}, {"prob", a.prob}});
    }
    root["signal"] = {{"model", "pmf"}, {"atoms", atoms}};
  }
  root["simulation"] = {{"seed", scenario.seed}, {"trials", trials}};
  if (const auto* r = std::get_if<RocSweep>(&sweep)) {
    root["sweep"] = {{"what", "roc"},
                     {"pfa_grid",
                      {{"start", r->pfa_grid.start},
                       {"stop", r->pfa_grid.stop},
                       {"count", r->pfa_grid.count},
                       {"spacing", r->pfa_grid.log_spacing ? "log" : "linear"}}},
                     {"theta_count", r->theta_count}};
  } else if (const auto* e = std::get_if<EquilibriumSweep>(&sweep)) {
    root["sweep"] = {{"what", "equilibrium"},
                     {"snr_grid_db",
                      {{"start", e->snr_grid.start_db}, {"stop", e->snr_grid.stop_db}, {"count", e->snr_grid.count}}}};
  } else {
    const auto& a = std::get<AsymptoticSweep>(sweep);
    root["sweep"] = {{"what", "asymptotic"},
                     {"snr_grid_db",
                      {{"start", a.snr_grid.start_db}, {"stop", a.snr_grid.stop_db}, {"count", a.snr_grid.count}}},
                     {"depth", a.depth}};
  }
  return root;
}

}  // namespace rocbound
