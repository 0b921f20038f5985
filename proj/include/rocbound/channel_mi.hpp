// Mutual-information computations for the sensing channel.
//
// Three views of the same quantity live here:
//   * bac_mutual_information  - the binary asymmetric channel formed by the
//     detector decision (false-alarm / missed-detection probabilities);
//   * biawgn_mi               - the binary-input Gaussian channel seen by the
//     sensor bank, for a known additive SNR, plus its small-alpha and
//     large-SNR expansions;
//   * averaged_mi             - the same quantity averaged over a random
//     additive SNR given as a signed mixture of exponentials.
//
// SNR convention. All public functions take the additive SNR
//   snr = sum_k |h_k|^2 ||s||^2 / sigma_k^2,
// the squared norm of the whitened mean offset of a complex-valued
// observation. The equivalent real binary-input channel with unit noise
// variance has gamma = snr / 2 (each complex dimension contributes two real
// dimensions of noise variance 1/2), which is why exp(Z - snr) with
// Z ~ N(0, 2*snr) appears below, and why the asymptotic series decays as
// exp(-snr/4).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocbound/quadrature.hpp"
#include "rocbound/special_functions.hpp"

namespace rocbound {

/// Prior on the binary input: alpha = P(signal absent).
struct Prior {
  double alpha;
  double alpha_bar;

  explicit Prior(double a) : alpha(a), alpha_bar(1.0 - a) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw std::domain_error("Prior: alpha must lie in [0,1], got " + std::to_string(a));
    }
  }
  bool degenerate() const { return alpha == 0.0 || alpha == 1.0; }
  double entropy() const { return binary_entropy(alpha); }
};

/// Mutual information in bits of the binary asymmetric channel with
/// crossover probabilities (pfa | input 0) and (pmd | input 1).
inline double bac_mutual_information(const Prior& prior, double pfa, double pmd) {
  const double out0 = prior.alpha * (1.0 - pfa) + prior.alpha_bar * pmd;
  return binary_entropy(out0) - prior.alpha * binary_entropy(pfa) -
         prior.alpha_bar * binary_entropy(pmd);
}

/// Additive SNR: sum of the per-sensor receive SNRs |h_k|^2 ||s||^2 / sigma_k^2.
inline double additive_snr(std::span<const std::complex<double>> gains, double signal_energy,
                           std::span<const double> noise_vars) {
  if (gains.size() != noise_vars.size()) {
    throw std::invalid_argument("additive_snr: gains and noise_vars must have equal length");
  }
  if (!(signal_energy >= 0.0)) throw std::domain_error("additive_snr: signal energy must be >= 0");
  double snr = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    if (!(noise_vars[k] > 0.0)) throw std::domain_error("additive_snr: noise variances must be > 0");
    snr += std::norm(gains[k]) * signal_energy / noise_vars[k];
  }
  return snr;
}

namespace detail {

// Deficit H_b(alpha) - I at a fixed additive SNR g, by Gauss-Hermite.
// Integrand of E_Z[ alpha log2(1+(ab/a) e^{Z-g}) + ab log2(1+(a/ab) e^{Z-g}) ]
// with Z ~ N(0, 2g); nodes map as Z = 2 sqrt(g) x against weight e^{-x^2}.
inline double biawgn_deficit(const Prior& prior, double g, const QuadratureRule& hermite) {
  const double lr = std::log(prior.alpha_bar) - std::log(prior.alpha);
  const double scale = 2.0 * std::sqrt(g);
  double acc = 0.0;
  for (int i = 0; i < hermite.order(); ++i) {
    const double t = scale * hermite.nodes[i] - g;
    acc += hermite.weights[i] *
           (prior.alpha * log2_1p_exp(lr + t) + prior.alpha_bar * log2_1p_exp(-lr + t));
  }
  return acc / std::sqrt(kPi);
}

inline void require_kind(const QuadratureRule& rule, QuadKind kind, const char* who) {
  if (rule.kind != kind) {
    throw std::invalid_argument(std::string(who) + ": quadrature rule of the wrong kind");
  }
}

}  // namespace detail

/// Exact mutual information in bits of the binary-input Gaussian channel at
/// the given additive SNR, by Gauss-Hermite quadrature. Clamped to
/// [0, H_b(alpha)]; a degenerate prior yields 0.
inline double biawgn_mi(const Prior& prior, double snr,
                        const QuadratureRule& hermite = default_hermite()) {
  detail::require_kind(hermite, QuadKind::hermite, "biawgn_mi");
  if (!(snr >= 0.0)) throw std::domain_error("biawgn_mi: snr must be nonnegative");
  if (prior.degenerate() || snr == 0.0) return 0.0;
  const double hb = prior.entropy();
  const double mi = hb - detail::biawgn_deficit(prior, snr, hermite);
  return std::min(std::max(mi, 0.0), hb);
}

/// Leading terms of the small-alpha expansion of biawgn_mi.
/// order 1:  snr * alpha * log2(e)                       (upper bound)
/// order 2:  adds -(e^{2 snr} - 1)/2 * alpha^2 * log2(e) (lower bound)
inline double biawgn_mi_small_alpha(double alpha, double snr, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("biawgn_mi_small_alpha: order must be 1 or 2");
  }
  double v = snr * alpha;
  if (order == 2) v -= 0.5 * std::expm1(2.0 * snr) * alpha * alpha;
  return v * kLog2E;
}

namespace detail {

inline long long binomial_ll(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// c_n(rho): the n-th moment coefficient of the tail integral
//   (1/2pi) Int ln(1+rho e^z) z^{2n}/n! e^{-z/2} dz,
// in the closed form built from Euler numbers and falling factorials.
inline double series_cn(int n, double rho) {
  if (n < 0 || n > 12) throw std::domain_error("series_cn: n out of range");
  if (!(rho > 0.0)) throw std::domain_error("series_cn: rho must be positive");
  const double lr = std::log(rho);
  double outer = 0.0;
  for (int k = 0; k <= n; ++k) {
    double inner = 0.0;
    for (int m = 0; m <= 2 * k; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      inner += sign * std::pow(2.0, m) * static_cast<double>(falling_factorial(2 * k, m)) *
               std::pow(lr, 2 * k - m);
    }
    outer += static_cast<double>(binomial_ll(2 * n, 2 * k)) * std::pow(kPi, 2 * (n - k)) *
             std::abs(euler_number_d(2 * (n - k))) * inner;
  }
  return std::sqrt(rho) * outer / std::tgamma(n + 1.0);
}

// k_n(alpha) from the symmetrized double sum (even falling factorials only,
// the odd orders cancel when the rho and 1/rho branches combine).
inline double series_kn_direct(const Prior& prior, int n) {
  const double l2 = std::pow(std::log(prior.alpha / prior.alpha_bar), 2.0);
  double outer = 0.0;
  for (int k = 0; k <= n; ++k) {
    double inner = 0.0;
    for (int m = 0; m <= k; ++m) {
      inner += std::pow(4.0, m) * static_cast<double>(falling_factorial(2 * k, 2 * m)) *
               std::pow(l2, k - m);
    }
    outer += static_cast<double>(binomial_ll(2 * n, 2 * k)) * std::pow(kPi, 2 * (n - k)) *
             std::abs(euler_number_d(2 * (n - k))) * inner;
  }
  return 2.0 * std::sqrt(kPi * prior.alpha * prior.alpha_bar) * outer /
         (std::pow(4.0, n) * std::tgamma(n + 1.0) * kLn2);
}

// The same coefficient assembled from c_n at rho and 1/rho. Serves as an
// independent transcription check of series_kn_direct.
inline double series_kn_from_cn(const Prior& prior, int n) {
  const double rho = prior.alpha_bar / prior.alpha;
  const double comb = prior.alpha * series_cn(n, rho) + prior.alpha_bar * series_cn(n, 1.0 / rho);
  return std::sqrt(kPi) * comb / (std::pow(4.0, n) * kLn2);
}

}  // namespace detail

/// Public access to c_n(rho) (used by consistency checks and tools).
inline double series_cn(int n, double rho) { return detail::series_cn(n, rho); }

/// Coefficients of the large-SNR expansion
///   I = H_b(alpha) - sum_n (-1)^n k_n(alpha) e^{-snr/4} / snr^{n+1/2}.
///
/// The power/exponential normalization above is the one validated against
/// the quadrature oracle; the equivalent statement in terms of the
/// unit-noise channel snr gamma = snr/2 carries a 2^{n+1/2} rescaling of
/// the coefficients.
struct SeriesExpansion {
  double h_b_alpha;
  std::vector<double> coefficients;  // k_0 .. k_depth
  double snr_to_gamma = 0.5;         // gamma = snr_to_gamma * snr
};

/// Computes k_0..k_depth twice (direct double sum, and via c_n at rho and
/// 1/rho) and fails loudly if the two routes disagree beyond 1e-9 relative.
inline SeriesExpansion series_coefficients(const Prior& prior, int depth) {
  if (depth < 0 || depth > 10) {
    throw std::domain_error("series_coefficients: depth must lie in [0,10]");
  }
  SeriesExpansion out{prior.entropy(), {}, 0.5};
  out.coefficients.reserve(depth + 1);
  const bool degenerate = prior.degenerate();
  for (int n = 0; n <= depth; ++n) {
    if (degenerate) {
      out.coefficients.push_back(0.0);
      continue;
    }
    const double ka = detail::series_kn_direct(prior, n);
    const double kb = detail::series_kn_from_cn(prior, n);
    if (std::abs(ka - kb) > 1e-9 * std::max({std::abs(ka), std::abs(kb), 1e-300})) {
      throw std::runtime_error("series_coefficients: coefficient routes disagree at n=" +
                               std::to_string(n));
    }
    out.coefficients.push_back(ka);
  }
  return out;
}

struct AsymptoticMi {
  double value;  // partial sum through `depth`
  double lower;  // of the two consecutive partial sums at depth, depth+1
  double upper;
};

/// Large-SNR expansion of biawgn_mi, truncated at `depth` (0..9).
///
/// The series is asymptotic, not convergent, but every partial sum is an
/// exact one-sided bound: even depths bound I from below, odd depths from
/// above, so (value at depth, value at depth+1) always bracket the true
/// mutual information.
inline AsymptoticMi biawgn_mi_asymptotic(const Prior& prior, double snr, int depth) {
  if (!(snr > 0.0)) throw std::domain_error("biawgn_mi_asymptotic: snr must be positive");
  if (depth < 0 || depth > 9) {
    throw std::domain_error("biawgn_mi_asymptotic: depth must lie in [0,9]");
  }
  const SeriesExpansion se = series_coefficients(prior, depth + 1);
  const double damp = std::exp(-0.25 * snr);
  double sum = 0.0;
  double at_depth = 0.0, at_next = 0.0;
  for (int n = 0; n <= depth + 1; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += sign * se.coefficients[n] * damp / std::pow(snr, n + 0.5);
    if (n == depth) at_depth = se.h_b_alpha - sum;
    if (n == depth + 1) at_next = se.h_b_alpha - sum;
  }
  return {at_depth, std::min(at_depth, at_next), std::max(at_depth, at_next)};
}

/// Distribution of a random additive SNR as a finite signed mixture of
/// exponential components: pdf(g) = sum_i w_i exp(-g/mu_i)/mu_i.
/// Weights may be negative (partial-fraction form) but must sum to one and
/// the pdf must be nonnegative.
struct GammaMixture {
  struct Component {
    double weight;
    double mean;
  };
  std::vector<Component> components;

  double mean() const {
    double m = 0.0;
    for (const auto& c : components) m += c.weight * c.mean;
    return m;
  }
  double pdf(double g) const {
    double p = 0.0;
    for (const auto& c : components) p += c.weight * std::exp(-g / c.mean) / c.mean;
    return p;
  }
  double cdf(double g) const {
    double p = 0.0;
    for (const auto& c : components) p += c.weight * (1.0 - std::exp(-g / c.mean));
    return p;
  }
  double max_mean() const {
    double m = 0.0;
    for (const auto& c : components) m = std::max(m, c.mean);
    return m;
  }

  /// Cheap structural checks: weights sum to one, means positive, pdf
  /// nonnegative on a grid spanning [0, 50 * max mean].
  void validate() const {
    if (components.empty()) throw std::runtime_error("GammaMixture: empty mixture");
    double wsum = 0.0, scale = 0.0;
    for (const auto& c : components) {
      if (!(c.mean > 0.0)) throw std::runtime_error("GammaMixture: component means must be > 0");
      wsum += c.weight;
      scale += std::abs(c.weight) / c.mean;
    }
    if (std::abs(wsum - 1.0) > 1e-10) {
      throw std::runtime_error("GammaMixture: weights sum to " + std::to_string(wsum));
    }
    const double hi = 50.0 * max_mean();
    for (int i = 0; i <= 512; ++i) {
      const double g = hi * i / 512.0;
      if (pdf(g) < -1e-10 * scale) {
        throw std::runtime_error("GammaMixture: pdf negative at g=" + std::to_string(g));
      }
    }
  }
};

/// Mixture pdf of Gamma = sum_k g_k S with g_k the per-sensor mean SNRs of
/// iid Rayleigh gains (so each contribution is exponential with mean
/// gamma_k S_m) and S drawn from a finite energy pmf. The hypoexponential
/// sum over sensors is expanded by partial fractions, which requires the
/// gamma_k to be pairwise distinct.
inline GammaMixture rayleigh_gamma_mixture(std::span<const double> mean_snrs,
                                           std::span<const std::pair<double, double>> signal_pmf) {
  const std::size_t kk = mean_snrs.size();
  if (kk == 0) throw std::invalid_argument("rayleigh_gamma_mixture: no sensors");
  if (signal_pmf.empty()) throw std::invalid_argument("rayleigh_gamma_mixture: empty signal pmf");
  for (double g : mean_snrs) {
    if (!(g > 0.0)) throw std::domain_error("rayleigh_gamma_mixture: mean snrs must be > 0");
  }
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = i + 1; j < kk; ++j) {
      if (std::abs(mean_snrs[i] - mean_snrs[j]) <=
          1e-9 * std::max(std::abs(mean_snrs[i]), std::abs(mean_snrs[j]))) {
        // Coincident rates make the partial-fraction form singular; the
        // caller may perturb the inputs.
        throw std::runtime_error("rayleigh_gamma_mixture: coincident per-sensor rates " +
                                 std::to_string(mean_snrs[i]));
      }
    }
  }
  double psum = 0.0, es = 0.0;
  for (const auto& [s_m, p_m] : signal_pmf) {
    if (!(s_m > 0.0)) throw std::domain_error("rayleigh_gamma_mixture: signal energies must be > 0");
    if (!(p_m >= 0.0)) throw std::domain_error("rayleigh_gamma_mixture: probabilities must be >= 0");
    psum += p_m;
    es += p_m * s_m;
  }
  if (std::abs(psum - 1.0) > 1e-10) {
    throw std::invalid_argument("rayleigh_gamma_mixture: signal pmf sums to " + std::to_string(psum));
  }

  std::vector<double> pf(kk, 1.0);
  for (std::size_t k = 0; k < kk; ++k) {
    for (std::size_t l = 0; l < kk; ++l) {
      if (l != k) pf[k] /= 1.0 - mean_snrs[l] / mean_snrs[k];
    }
  }

  GammaMixture mix;
  mix.components.reserve(kk * signal_pmf.size());
  for (const auto& [s_m, p_m] : signal_pmf) {
    for (std::size_t k = 0; k < kk; ++k) {
      mix.components.push_back({p_m * pf[k], mean_snrs[k] * s_m});
    }
  }
  mix.validate();

  double expected = 0.0;
  for (double g : mean_snrs) expected += g;
  expected *= es;
  if (std::abs(mix.mean() - expected) > 1e-8 * std::max(1.0, expected)) {
    throw std::runtime_error("rayleigh_gamma_mixture: mixture mean does not match the additive SNR");
  }
  return mix;
}

/// Mutual information averaged over a random additive SNR with the given
/// mixture distribution. The outer integral is taken component by component
/// with the substitution g = mean * t exposing the e^{-t} Laguerre weight;
/// the inner Gaussian integral uses Gauss-Hermite. Result in [0, H_b(alpha)].
///
/// With point_mass_override each component is treated as a point mass at its
/// mean (no outer integral); this collapse is how the conditional integrand
/// is cross-checked against biawgn_mi.
inline double averaged_mi(const Prior& prior, const GammaMixture& mixture,
                          const QuadratureRule& hermite = default_hermite(),
                          const QuadratureRule& laguerre = default_laguerre(),
                          bool point_mass_override = false) {
  detail::require_kind(hermite, QuadKind::hermite, "averaged_mi");
  detail::require_kind(laguerre, QuadKind::laguerre, "averaged_mi");
  mixture.validate();
  if (prior.degenerate()) return 0.0;
  const double hb = prior.entropy();
  double deficit = 0.0;
  for (const auto& comp : mixture.components) {
    double d = 0.0;
    if (point_mass_override) {
      d = detail::biawgn_deficit(prior, comp.mean, hermite);
    } else {
      for (int i = 0; i < laguerre.order(); ++i) {
        d += laguerre.weights[i] *
             detail::biawgn_deficit(prior, comp.mean * laguerre.nodes[i], hermite);
      }
    }
    deficit += comp.weight * d;
  }
  return std::min(std::max(hb - deficit, 0.0), hb);
}

}  // namespace rocbound
