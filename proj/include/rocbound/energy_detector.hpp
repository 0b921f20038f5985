// Analytic ROC of the energy-detection rule in the whitened (unit-noise)
// domain: the test statistic ||Y||^2 is central chi-square-like (a sum of kn
// unit-mean exponentials) when the signal is absent and noncentral when
// present, so the two error probabilities come from the regularized gamma
// function and the Marcum Q function.
//
// The decision rule declares "signal present" when the statistic exceeds
// theta + ln(alpha_bar) and "absent" below theta + ln(alpha). For
// alpha != 1/2 the band in between is not assigned by the rule; the
// Monte-Carlo counterpart of this detector resolves the band as "present"
// (conservative toward the licensed user). The two analytic formulas below
// keep their own offsets.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocbound/channel_mi.hpp"
#include "rocbound/roc_bound.hpp"
#include "rocbound/special_functions.hpp"

namespace rocbound {

struct EnergyDetectorConfig {
  int kn;        // sensors x samples, dimension of the whitened observation
  double snr;    // additive SNR (squared norm of the whitened mean offset)
  double alpha;  // prior probability of signal absence
  double theta;  // threshold parameter

  void check() const {
    if (kn < 1) throw std::domain_error("EnergyDetectorConfig: kn must be >= 1");
    if (!(snr >= 0.0)) throw std::domain_error("EnergyDetectorConfig: snr must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::domain_error("EnergyDetectorConfig: alpha must lie in [0,1]");
    }
  }
};

/// False-alarm probability P(||Z||^2 > theta + ln(alpha_bar)).
inline double pfa_analytic(const EnergyDetectorConfig& cfg) {
  cfg.check();
  const double u = cfg.theta + std::log(1.0 - cfg.alpha);
  if (!(u > 0.0)) return 1.0;  // energy is nonnegative
  return regularized_gamma_upper(cfg.kn, u);
}

/// Missed-detection probability P(||A + Z||^2 < theta + ln(alpha)).
inline double pmd_analytic(const EnergyDetectorConfig& cfg) {
  cfg.check();
  const double u = cfg.theta + std::log(cfg.alpha);
  if (!(u > 0.0)) return 0.0;
  return 1.0 - marcum_q(cfg.kn, std::sqrt(2.0 * cfg.snr), std::sqrt(2.0 * u));
}

/// Missed-detection probability with the additive SNR drawn from `mixture`
/// instead of fixed: E_Gamma[ 1 - Q_kn(sqrt(2 Gamma), sqrt(2u)) ], one
/// Gauss-Laguerre integral per exponential component.
inline double pmd_mixture_analytic(int kn, const GammaMixture& mixture, double alpha, double theta,
                                   const QuadratureRule& laguerre = default_laguerre()) {
  if (kn < 1) throw std::domain_error("pmd_mixture_analytic: kn must be >= 1");
  detail::require_kind(laguerre, QuadKind::laguerre, "pmd_mixture_analytic");
  const double u = theta + std::log(alpha);
  if (!(u > 0.0)) return 0.0;
  const double b = std::sqrt(2.0 * u);
  double pmd = 0.0;
  for (const auto& comp : mixture.components) {
    double inner = 0.0;
    for (int i = 0; i < laguerre.order(); ++i) {
      inner += laguerre.weights[i] *
               (1.0 - marcum_q(kn, std::sqrt(2.0 * comp.mean * laguerre.nodes[i]), b));
    }
    pmd += comp.weight * inner;
  }
  return std::min(std::max(pmd, 0.0), 1.0);
}

/// Threshold grid for ROC sweeps: the effective false-alarm threshold u
/// spans [max(0, c - 8 s), c + 8 s] with c = kn + snr and s = sqrt(kn + 2 snr),
/// covering both hypotheses' energy distributions to eight deviations.
inline std::vector<double> default_theta_grid(int kn, double snr, double alpha, int count = 400) {
  if (count < 2) throw std::invalid_argument("default_theta_grid: need at least 2 points");
  const double c = kn + snr;
  const double s = std::sqrt(kn + 2.0 * snr);
  const double lo = std::max(0.0, c - 8.0 * s);
  const double hi = c + 8.0 * s;
  const double shift = std::log(1.0 - alpha);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * i / (count - 1) - shift;
  }
  return grid;
}

namespace detail {

inline RocCurve assemble_roc(std::vector<OperatingPoint> pts, RocSource source, std::string label) {
  // theta ascending means pfa descending; flip, then merge points whose pfa
  // coincide (keeping the smallest pmd) so pfa ends up strictly increasing.
  std::reverse(pts.begin(), pts.end());
  RocCurve curve;
  curve.source = source;
  curve.label = std::move(label);
  for (const auto& p : pts) {
    if (!curve.points.empty() && !(p.pfa > curve.points.back().pfa)) {
      curve.points.back().pmd = std::min(curve.points.back().pmd, p.pmd);
    } else {
      curve.points.push_back(p);
    }
  }
  return curve;
}

}  // namespace detail

/// Parametric analytic ROC over an ascending theta grid.
inline RocCurve roc_sweep(int kn, double snr, double alpha, std::span<const double> theta_grid) {
  std::vector<OperatingPoint> pts;
  pts.reserve(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
      throw std::invalid_argument("roc_sweep: theta grid must be ascending");
    }
    EnergyDetectorConfig cfg{kn, snr, alpha, theta_grid[i]};
    pts.push_back({pfa_analytic(cfg), pmd_analytic(cfg)});
  }
  return detail::assemble_roc(std::move(pts), RocSource::energy_detector_analytic,
                              "energy detector kn=" + std::to_string(kn));
}

/// Analytic ROC with Rayleigh-faded (mixture-distributed) additive SNR.
inline RocCurve roc_sweep_mixture(int kn, const GammaMixture& mixture, double alpha,
                                  std::span<const double> theta_grid,
                                  const QuadratureRule& laguerre = default_laguerre()) {
  std::vector<OperatingPoint> pts;
  pts.reserve(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
      throw std::invalid_argument("roc_sweep_mixture: theta grid must be ascending");
    }
    EnergyDetectorConfig cfg{kn, 0.0, alpha, theta_grid[i]};
    pts.push_back({pfa_analytic(cfg), pmd_mixture_analytic(kn, mixture, alpha, theta_grid[i], laguerre)});
  }
  return detail::assemble_roc(std::move(pts), RocSource::energy_detector_analytic,
                              "energy detector (faded) kn=" + std::to_string(kn));
}

/// Threshold achieving a target false-alarm probability, by bisection on the
/// effective threshold u (pfa is strictly decreasing in u).
inline double threshold_for_pfa(int kn, double alpha, double target_pfa) {
  if (kn < 1) throw std::domain_error("threshold_for_pfa: kn must be >= 1");
  if (!(target_pfa > 0.0 && target_pfa < 1.0)) {
    throw std::domain_error("threshold_for_pfa: target must lie strictly in (0,1)");
  }
  double lo = 0.0, hi = kn + 16.0;
  while (regularized_gamma_upper(kn, hi) > target_pfa) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("threshold_for_pfa: target unreachable");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (regularized_gamma_upper(kn, mid) > target_pfa ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);
  if (std::abs(regularized_gamma_upper(kn, u) - target_pfa) > 1e-9) {
    throw std::runtime_error("threshold_for_pfa: bisection failed to reach the target");
  }
  return u - std::log(1.0 - alpha);
}

}  // namespace rocbound
