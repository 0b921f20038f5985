#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rocbound/quadrature.hpp"

using namespace rocbound;

namespace {

double weighted_sum(const QuadratureRule& r, double (*f)(double)) {
  double s = 0.0;
  for (int i = 0; i < r.order(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

void check_structure(const QuadratureRule& r) {
  for (int i = 0; i < r.order(); ++i) {
    CHECK(r.weights[i] > 0.0);
    if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
}

// Exact Hermite moments: Int x^{2k} e^{-x^2} dx = sqrt(pi) (2k-1)!! / 2^k.
double hermite_moment(int m) {
  if (m % 2 == 1) return 0.0;
  double v = std::sqrt(kPi);
  for (int j = 1; j <= m / 2; ++j) v *= (2.0 * j - 1.0) / 2.0;
  return v;
}

double laguerre_moment(int m) {  // Int x^m e^{-x} dx = m!
  double v = 1.0;
  for (int j = 2; j <= m; ++j) v *= j;
  return v;
}

}  // namespace

TEST_CASE("hermite order 2 closed form", "[quadrature]") {
  const auto r = gauss_hermite(2);
  CHECK_THAT(r.nodes[0], Catch::Matchers::WithinAbs(-1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(r.nodes[1], Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(std::sqrt(kPi) / 2.0, 1e-14));
  CHECK_THAT(r.weights[1], Catch::Matchers::WithinAbs(std::sqrt(kPi) / 2.0, 1e-14));
}

TEST_CASE("hermite weight sums and structure", "[quadrature]") {
  for (int order : {1, 2, 8, 32, 64, 96, 192, 256}) {
    const auto r = gauss_hermite(order);
    REQUIRE(r.order() == order);
    check_structure(r);
    CHECK_THAT(weighted_sum(r, [](double) { return 1.0; }),
               Catch::Matchers::WithinAbs(std::sqrt(kPi), 1e-12));
  }
}

TEST_CASE("hermite second moment", "[quadrature]") {
  const auto r = gauss_hermite(32);
  CHECK_THAT(weighted_sum(r, [](double x) { return x * x; }),
             Catch::Matchers::WithinAbs(std::sqrt(kPi) / 2.0, 1e-12));
}

TEST_CASE("hermite is exact up to degree 2n-1", "[quadrature]") {
  const auto r = gauss_hermite(8);
  for (int m = 0; m <= 15; ++m) {
    double s = 0.0;
    for (int i = 0; i < r.order(); ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
    CHECK_THAT(s, Catch::Matchers::WithinAbs(hermite_moment(m),
                                             1e-10 * std::max(1.0, std::abs(hermite_moment(m)))));
  }
}

TEST_CASE("laguerre weight sums and structure", "[quadrature]") {
  for (int order : {1, 2, 16, 64, 128, 160}) {
    const auto r = gauss_laguerre(order);
    REQUIRE(r.order() == order);
    check_structure(r);
    CHECK_THAT(weighted_sum(r, [](double) { return 1.0; }), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("laguerre order 1 and 2 closed forms", "[quadrature]") {
  const auto r1 = gauss_laguerre(1);
  CHECK_THAT(r1.nodes[0], Catch::Matchers::WithinAbs(1.0, 1e-13));
  CHECK_THAT(r1.weights[0], Catch::Matchers::WithinAbs(1.0, 1e-13));
  const auto r2 = gauss_laguerre(2);
  CHECK_THAT(r2.nodes[0], Catch::Matchers::WithinAbs(2.0 - std::sqrt(2.0), 1e-12));
  CHECK_THAT(r2.nodes[1], Catch::Matchers::WithinAbs(2.0 + std::sqrt(2.0), 1e-12));
  CHECK_THAT(r2.weights[0], Catch::Matchers::WithinAbs((2.0 + std::sqrt(2.0)) / 4.0, 1e-12));
  CHECK_THAT(r2.weights[1], Catch::Matchers::WithinAbs((2.0 - std::sqrt(2.0)) / 4.0, 1e-12));
}

TEST_CASE("laguerre moments", "[quadrature]") {
  const auto r = gauss_laguerre(16);
  for (int m = 0; m <= 20; ++m) {
    double s = 0.0;
    for (int i = 0; i < r.order(); ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
    CHECK_THAT(s, Catch::Matchers::WithinRel(laguerre_moment(m), 1e-10));
  }
}

TEST_CASE("unsupported orders", "[quadrature]") {
  CHECK_THROWS_AS(gauss_hermite(0), std::domain_error);
  CHECK_THROWS_AS(gauss_hermite(257), std::domain_error);
  CHECK_THROWS_AS(gauss_laguerre(0), std::domain_error);
  CHECK_THROWS_AS(gauss_laguerre(161), std::domain_error);
  CHECK_THROWS_AS(gauss_rule(QuadKind::hermite, -3), std::domain_error);
}

TEST_CASE("default rules", "[quadrature]") {
  CHECK(default_hermite().order() == 96);
  CHECK(default_hermite().kind == QuadKind::hermite);
  CHECK(default_laguerre().order() == 64);
  CHECK(default_laguerre().kind == QuadKind::laguerre);
}
