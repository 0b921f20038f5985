// Gauss-Hermite (weight e^{-x^2}) and Gauss-Laguerre (weight e^{-x}) rules.
//
// Nodes are found by Newton iteration on the three-term recurrences with the
// classical initial guesses, refined to ~1e-14 relative. Rules are plain
// immutable value types.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocbound/special_functions.hpp"

namespace rocbound {

enum class QuadKind { hermite, laguerre };

struct QuadratureRule {
  QuadKind kind;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // all positive
  int order() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Orthonormal Hermite value p_n(x) and p_{n-1}(x) (weight e^{-x^2}), in
// extended precision so rules up to order 256 keep full double accuracy.
inline std::pair<long double, long double> hermite_pair(int n, long double x) {
  long double p1 = 0.7511255444649424828587L;  // pi^{-1/4}
  long double p2 = 0.0L;
  for (int j = 1; j <= n; ++j) {
    const long double p3 = p2;
    p2 = p1;
    p1 = x * std::sqrt(2.0L / j) * p2 - std::sqrt((j - 1.0L) / j) * p3;
  }
  return {p1, p2};
}

inline QuadratureRule gauss_hermite_rule(int n) {
  QuadratureRule rule{QuadKind::hermite, std::vector<double>(n), std::vector<double>(n)};
  // Bracket every positive root by a sign scan (grid finer than half the
  // minimal node spacing ~ pi/sqrt(2n)), then polish with safeguarded Newton.
  const long double xmax = std::sqrt(2.0L * n + 1.0L);
  const long double step = 1.35L / xmax;
  std::vector<std::pair<long double, long double>> brackets;
  long double xa = (n % 2 == 1) ? step * 0.5L : 1e-9L;  // skip the origin root of odd orders
  long double fa = hermite_pair(n, xa).first;
  for (long double xb = xa + step; xa < xmax + 1.0L; xb += step) {
    const long double fb = hermite_pair(n, xb).first;
    if ((fa < 0.0L) != (fb < 0.0L)) brackets.emplace_back(xa, xb);
    xa = xb;
    fa = fb;
  }
  if (static_cast<int>(brackets.size()) != n / 2) {
    throw std::runtime_error("gauss_hermite_rule: root bracketing failed");
  }

  const int m = (n + 1) / 2;
  if (n % 2 == 1) {
    // Central node of odd orders sits exactly at the origin.
    const long double pp = std::sqrt(2.0L * n) * hermite_pair(n, 0.0L).second;
    rule.nodes[m - 1] = 0.0;
    rule.weights[m - 1] = static_cast<double>(2.0L / (pp * pp));
  }
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    auto [lo, hi] = brackets[b];
    long double flo = hermite_pair(n, lo).first;
    long double z = 0.5L * (lo + hi);
    long double pp = 0.0L;
    for (int it = 0; it < 200; ++it) {
      const auto [p1, p2] = hermite_pair(n, z);
      pp = std::sqrt(2.0L * n) * p2;
      ((p1 < 0.0L) == (flo < 0.0L) ? lo : hi) = z;
      long double znew = z - p1 / pp;
      if (!(znew > lo && znew < hi)) znew = 0.5L * (lo + hi);  // Newton left the bracket
      const long double dz = std::abs(znew - z);
      z = znew;
      if (dz <= 1e-16L * std::max(1.0L, z)) break;
    }
    // Brackets ascend, so positive roots fill the top of the node array in
    // order; each gets a mirrored negative twin.
    const int pos = n - static_cast<int>(brackets.size()) + static_cast<int>(b);
    rule.nodes[pos] = static_cast<double>(z);
    rule.nodes[n - 1 - pos] = -rule.nodes[pos];
    rule.weights[pos] = static_cast<double>(2.0L / (pp * pp));
    rule.weights[n - 1 - pos] = rule.weights[pos];
  }
  return rule;
}

inline QuadratureRule gauss_laguerre_rule(int n) {
  QuadratureRule rule{QuadKind::laguerre, std::vector<double>(n), std::vector<double>(n)};
  long double z = 0.0L;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * n);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * n);
    } else {
      const long double ai = static_cast<long double>(i - 1);
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - rule.nodes[i - 2]);
    }
    bool converged = false;
    long double ratio = 0.0L;  // n * pp_s * p2_s, scaling e^{-z} factored out
    for (int it = 0; it < 200; ++it) {
      // Recurrence on q_j = L_j(z) e^{-z/2}; the scaling cancels in Newton
      // steps and keeps iterates finite for the largest roots.
      long double p1 = std::exp(-0.5L * z), p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j - 1.0L - z) * p2 - (j - 1.0L) * p3) / j;
      }
      const long double pp = n * (p1 - p2) / z;  // scaled derivative
      ratio = static_cast<long double>(n) * pp * p2;
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16L * std::max(1.0L, z)) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_laguerre_rule: Newton iteration failed");
    rule.nodes[i] = static_cast<double>(z);
    // w = -1/(pp * n * p2) with true (unscaled) values; unscaling multiplies
    // the denominator by e^{z}, evaluated in log space to reach the extreme
    // nodes of high-order rules.
    rule.weights[i] = static_cast<double>(
        (ratio < 0.0L ? 1.0L : -1.0L) * std::exp(-z - std::log(std::abs(ratio))));
  }
  return rule;
}

}  // namespace detail

/// Build a Gauss rule. Hermite supports orders 1..256. Laguerre supports
/// orders 1..160: beyond that the smallest true weights drop under the
/// double-precision floor and the all-positive-weights contract cannot hold.
inline QuadratureRule gauss_rule(QuadKind kind, int order) {
  const int max_order = kind == QuadKind::hermite ? 256 : 160;
  if (order < 1 || order > max_order) {
    throw std::domain_error("gauss_rule: unsupported order " + std::to_string(order));
  }
  return kind == QuadKind::hermite ? detail::gauss_hermite_rule(order)
                                   : detail::gauss_laguerre_rule(order);
}

inline QuadratureRule gauss_hermite(int order) { return gauss_rule(QuadKind::hermite, order); }
inline QuadratureRule gauss_laguerre(int order) { return gauss_rule(QuadKind::laguerre, order); }

/// Default rules shared by the mutual-information integrals.
inline const QuadratureRule& default_hermite() {
  static const QuadratureRule rule = gauss_hermite(96);
  return rule;
}

inline const QuadratureRule& default_laguerre() {
  static const QuadratureRule rule = gauss_laguerre(64);
  return rule;
}

}  // namespace rocbound
