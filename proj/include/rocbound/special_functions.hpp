// Scalar special functions used throughout the library: binary entropy and
// its inverse, regularized incomplete gamma functions for integer shape,
// the generalized Marcum Q function, Euler numbers, falling factorials and
// a numerically safe log2(1 + e^t).
//
// Everything here is a pure function of its arguments and safe to call
// concurrently.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rocbound {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kLog2E = std::numbers::log2e;
inline constexpr double kPi = std::numbers::pi;

/// Binary entropy in bits, with 0*log2(0) == 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary_entropy: p must lie in [0,1], got " + std::to_string(p));
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Inverse of binary_entropy on the increasing branch [0, 1/2].
/// Bisection; absolute tolerance well below 1e-12.
inline double binary_entropy_inverse(double h) {
  if (!(h >= 0.0 && h <= 1.0)) {
    throw std::domain_error("binary_entropy_inverse: h must lie in [0,1], got " + std::to_string(h));
  }
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// log2(1 + exp(t)) without overflow for large positive t and without
/// losing the tiny result for very negative t.
inline double log2_1p_exp(double t) {
  if (t > 0.0) return t / kLn2 + std::log1p(std::exp(-t)) / kLn2;
  return std::log1p(std::exp(t)) / kLn2;
}

namespace detail {

// Lower regularized gamma P(a,x) by power series (for x < a + 1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// Upper regularized gamma Q(a,x) by modified Lentz continued fraction
// (for x >= a + 1).
inline double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_q_contfrac: no convergence");
}

inline void check_gamma_args(int n, double x) {
  if (n < 1) throw std::domain_error("regularized gamma: shape must be a positive integer");
  if (!(x >= 0.0)) throw std::domain_error("regularized gamma: x must be nonnegative");
}

}  // namespace detail

/// Lower regularized incomplete gamma P(n,x) = gamma(n,x)/Gamma(n) for
/// integer shape n >= 1. This is the CDF of a sum of n unit-mean
/// exponentials at x.
inline double regularized_gamma_lower(int n, double x) {
  detail::check_gamma_args(n, x);
  if (x == 0.0) return 0.0;
  const double a = static_cast<double>(n);
  return x < a + 1.0 ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_contfrac(a, x);
}

/// Upper regularized incomplete gamma Q(n,x) = Gamma(n,x)/Gamma(n).
inline double regularized_gamma_upper(int n, double x) {
  detail::check_gamma_args(n, x);
  if (x == 0.0) return 1.0;
  const double a = static_cast<double>(n);
  return x < a + 1.0 ? 1.0 - detail::gamma_p_series(a, x) : detail::gamma_q_contfrac(a, x);
}

/// Generalized Marcum Q function Q_m(a,b) for integer order m >= 1.
///
/// Evaluated through the canonical expansion in the noncentrality,
///   Q_m(a,b) = sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(m+k, b^2/2),
/// summed outward from the mode of the Poisson weights so that large a^2/2
/// stays representable. Truncated once the unaccounted Poisson mass drops
/// below 1e-14, which bounds the tail since every gamma factor is <= 1.
inline double marcum_q(int m, double a, double b) {
  if (m < 1) throw std::domain_error("marcum_q: order must be a positive integer");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q: arguments must be nonnegative");
  if (b == 0.0) return 1.0;
  const double x = 0.5 * b * b;
  const double lam = 0.5 * a * a;
  if (lam == 0.0) return regularized_gamma_upper(m, x);

  const long long k0 = static_cast<long long>(lam);
  // Poisson(lam) pmf at the mode, in log space.
  const double lp0 = -lam + static_cast<double>(k0) * std::log(lam) - std::lgamma(static_cast<double>(k0) + 1.0);
  const double p0 = std::exp(lp0);
  const double q0 = regularized_gamma_upper(static_cast<int>(m + k0), x);
  // t_n = e^{-x} x^n / n! at n = m + k0 - 1 links Q(n,x) and Q(n+1,x).
  const double n0 = static_cast<double>(m + k0 - 1);
  double t_up = std::exp(-x + n0 * std::log(x) - std::lgamma(n0 + 1.0));

  double sum = p0 * q0;
  double mass = p0;

  // Upward sweep: k = k0+1, k0+2, ...
  {
    double p = p0, q = q0, t = t_up;
    for (long long k = k0 + 1; k < k0 + 2000000; ++k) {
      t *= x / static_cast<double>(m + k - 1);  // t at n = m+k-1
      q += t;                                   // Q(m+k, x)
      p *= lam / static_cast<double>(k);
      sum += p * q;
      mass += p;
      if (1.0 - mass < 1e-14 || (p < 1e-18 && k > k0 + 8)) break;
    }
  }
  // Downward sweep: k = k0-1, ..., 0.
  {
    double p = p0, q = q0, t = t_up;
    for (long long k = k0 - 1; k >= 0; --k) {
      p *= static_cast<double>(k + 1) / lam;
      q -= t;  // Q(m+k, x)
      t *= static_cast<double>(m + k) / x;
      if (q < 0.0) q = 0.0;  // guard against cancellation at the bottom
      sum += p * q;
      mass += p;
      if (1.0 - mass < 1e-14) break;
    }
  }
  return std::min(sum, 1.0);
}

using int128 = __int128;

namespace detail {

// Euler numbers E_0..E_30 from sum_{j<=n} C(2n,2j) E_{2j} = 0 (secant
// numbers, exact integer arithmetic; |E_30| ~ 4.4e26 needs 128 bits).
consteval std::array<int128, 16> make_euler_table() {
  std::array<int128, 16> e{};
  e[0] = 1;
  long long binom[32][32] = {};
  for (int i = 0; i <= 31; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j) {
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
    }
  }
  for (int n = 1; n <= 15; ++n) {
    int128 s = 0;
    for (int j = 0; j < n; ++j) s += static_cast<int128>(binom[2 * n][2 * j]) * e[j];
    e[n] = -s;
  }
  return e;
}

inline constexpr std::array<int128, 16> kEulerTable = make_euler_table();

}  // namespace detail

/// Exact Euler number E_n for even n in [0, 30].
inline int128 euler_number(int n) {
  if (n < 0 || n > 30 || n % 2 != 0) {
    throw std::domain_error("euler_number: n must be even and in [0,30], got " + std::to_string(n));
  }
  return detail::kEulerTable[static_cast<std::size_t>(n / 2)];
}

/// Euler number as double (exact up to E_20; ~1 ulp beyond).
inline double euler_number_d(int n) { return static_cast<double>(euler_number(n)); }

/// Falling factorial n!/(n-m)! as an exact 64-bit integer.
/// Exact for every value that fits (all uses here have n <= 20).
inline long long falling_factorial(long long n, long long m) {
  if (n < 0 || m < 0 || m > n) {
    throw std::domain_error("falling_factorial: need 0 <= m <= n");
  }
  long long r = 1;
  for (long long i = 0; i < m; ++i) r *= (n - i);
  return r;
}

}  // namespace rocbound
