// Inversion of the information constraint I(input; decision) <= mi into an
// explicit lower-bound ROC curve, plus the equilibrium (pfa == pmd) section
// of that curve and its closed-form limits.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocbound/channel_mi.hpp"

namespace rocbound {

struct OperatingPoint {
  double pfa;
  double pmd;
};

enum class RocSource { dpi_bound, energy_detector_analytic, energy_detector_montecarlo };

struct RocCurve {
  std::vector<OperatingPoint> points;  // strictly increasing pfa, nonincreasing pmd
  RocSource source = RocSource::dpi_bound;
  std::string label;
  double mi = 0.0;  // information value the curve was generated from (bound only)
};

namespace detail {

// Smallest pmd in [0, 1-pfa] with bac MI <= target. The map pmd -> MI is
// strictly decreasing on [0, 1-pfa), which makes the root unique; beyond
// 1-pfa the channel inverts and the MI rises again, so the bracket stays
// inside the useful-channel region.
inline double bound_pmd_at(const Prior& prior, double target, double pfa) {
  if (bac_mutual_information(prior, pfa, 0.0) <= target) return 0.0;
  double lo = 0.0, hi = 1.0 - pfa;
  if (bac_mutual_information(prior, pfa, hi) - target > 0.0) return hi;  // only mi ~ 0 with fp noise
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bac_mutual_information(prior, pfa, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Lower-bound ROC: for each pfa on the grid, the smallest pmd compatible
/// with the constraint bac MI <= min(mi, H_b(alpha)).
inline RocCurve roc_lower_bound(const Prior& prior, double mi, std::span<const double> pfa_grid) {
  if (!(mi >= 0.0)) throw std::domain_error("roc_lower_bound: mi must be nonnegative");
  for (std::size_t i = 0; i < pfa_grid.size(); ++i) {
    if (!(pfa_grid[i] > 0.0 && pfa_grid[i] < 1.0)) {
      throw std::invalid_argument("roc_lower_bound: pfa grid values must lie in (0,1)");
    }
    if (i > 0 && !(pfa_grid[i] > pfa_grid[i - 1])) {
      throw std::invalid_argument("roc_lower_bound: pfa grid must be strictly increasing");
    }
  }
  const double target = std::min(mi, prior.entropy());
  RocCurve curve;
  curve.source = RocSource::dpi_bound;
  curve.mi = target;
  curve.points.reserve(pfa_grid.size());
  for (double pfa : pfa_grid) {
    curve.points.push_back({pfa, detail::bound_pmd_at(prior, target, pfa)});
  }
  return curve;
}

/// The pfa == pmd point of the bound: p in [0, 1/2] with bac MI(p,p) == mi.
/// For alpha = 1/2 this reduces to binary_entropy_inverse(1 - mi).
inline double equilibrium_probability(const Prior& prior, double mi) {
  const double hb = prior.entropy();
  if (!(mi >= 0.0)) throw std::domain_error("equilibrium_probability: mi must be nonnegative");
  if (mi > hb) {
    throw std::domain_error("equilibrium_probability: no solution, mi exceeds H_b(alpha)");
  }
  // bac MI(p,p) decreases from H_b(alpha) at p=0 to 0 at p=1/2.
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bac_mutual_information(prior, mid, mid) > mi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Small-alpha expansion of the BAC mutual information at the equilibrium
/// point. Both terms are in bits; the quadratic coefficient carries the
/// 1/ln2 that converts its natural-log form (checks against the exact
/// formula put the bits version an order of magnitude closer than the
/// natural-log one).
inline double equilibrium_small_alpha_mi(double alpha, double peq, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("equilibrium_small_alpha_mi: order must be 1 or 2");
  }
  if (!(peq > 0.0 && peq < 0.5)) {
    throw std::domain_error("equilibrium_small_alpha_mi: peq must lie strictly in (0, 0.5)");
  }
  double v = (1.0 - 2.0 * peq) * std::log2((1.0 - peq) / peq) * alpha;
  if (order == 2) {
    const double c = (1.0 - 2.0 * peq) * (1.0 - 2.0 * peq) / (2.0 * peq * (1.0 - peq) * kLn2);
    v -= c * alpha * alpha;
  }
  return v;
}

/// Joint small-alpha / large-SNR limit of the equilibrium probability.
inline double equilibrium_asymptotic(double snr) { return std::exp(-snr); }

struct SnrPeq {
  double snr;  // linear
  double peq;
};

/// Equilibrium probability along an ascending SNR grid, with the mutual
/// information supplied by `mi_of_snr` (quadrature or mixture-averaged).
inline std::vector<SnrPeq> equilibrium_vs_snr_curve(const Prior& prior,
                                                    std::span<const double> snr_grid,
                                                    const std::function<double(double)>& mi_of_snr) {
  for (std::size_t i = 0; i < snr_grid.size(); ++i) {
    if (!(snr_grid[i] >= 0.0)) throw std::invalid_argument("equilibrium_vs_snr_curve: snr must be >= 0");
    if (i > 0 && !(snr_grid[i] > snr_grid[i - 1])) {
      throw std::invalid_argument("equilibrium_vs_snr_curve: snr grid must be ascending");
    }
  }
  std::vector<SnrPeq> out;
  out.reserve(snr_grid.size());
  const double hb = prior.entropy();
  for (double snr : snr_grid) {
    const double mi = std::min(mi_of_snr(snr), hb);
    out.push_back({snr, equilibrium_probability(prior, mi)});
  }
  return out;
}

/// mi source computing biawgn_mi at each grid SNR.
inline std::function<double(double)> quadrature_mi_source(
    const Prior& prior, const QuadratureRule& hermite = default_hermite()) {
  return [&prior, &hermite](double snr) { return biawgn_mi(prior, snr, hermite); };
}

/// mi source averaging over the mixture, rescaled so its mean tracks each
/// grid SNR.
inline std::function<double(double)> averaged_mi_source(
    const Prior& prior, const GammaMixture& mixture,
    const QuadratureRule& hermite = default_hermite(),
    const QuadratureRule& laguerre = default_laguerre()) {
  const double base_mean = mixture.mean();
  return [&prior, mixture, &hermite, &laguerre, base_mean](double snr) {
    if (snr <= 0.0) return 0.0;
    GammaMixture scaled = mixture;
    for (auto& c : scaled.components) c.mean *= snr / base_mean;
    return averaged_mi(prior, scaled, hermite, laguerre);
  };
}

}  // namespace rocbound
