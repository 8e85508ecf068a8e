#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lclt/gaussian.hpp"
#include "lclt/hermite.hpp"

using namespace lclt;

namespace {

// Simpson quadrature of f(x) p(x) over [a, b]
template <typename Fn>
double simpson_gauss(Fn&& f, double a, double b, int segments = 4000) {
  const double h = (b - a) / segments;
  auto g = [&](double x) { return f(x) * gauss_pdf(x); };
  double acc = g(a) + g(b);
  for (int i = 1; i < segments; ++i)
    acc += g(a + i * h) * ((i & 1) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("hermite values") {
  HermiteBasis basis(12);
  REQUIRE(basis.eval(0, 5.0) == 1.0);
  REQUIRE(basis.eval(2, 1.0) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(basis.eval(3, 2.0) ==
          Catch::Approx(2.0 / std::sqrt(6.0)).margin(1e-14));
  for (double x : {-2.5, -0.3, 0.9, 3.1})
    REQUIRE(basis.eval(2, x) ==
            Catch::Approx((x * x - 1.0) / std::numbers::sqrt2).margin(1e-13));
  REQUIRE_THROWS_AS(basis.eval(13, 0.0), std::invalid_argument);
}

TEST_CASE("orthonormality under 60-node quadrature") {
  HermiteBasis basis(12);
  const auto& q = basis.quadrature();
  for (int i = 0; i <= 12; ++i)
    for (int j = i; j <= 12; ++j) {
      const double ip = q.integrate(
          [&](double x) { return basis.eval(i, x) * basis.eval(j, x); });
      REQUIRE(ip == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-10));
    }
}

TEST_CASE("indicator coefficients") {
  HermiteBasis basis(12);
  REQUIRE(basis.indicator_coeff(0.0, 1) ==
          Catch::Approx(-1.0 / std::sqrt(2.0 * std::numbers::pi))
              .margin(1e-15));
  REQUIRE(basis.indicator_coeff(0.0, 2) == Catch::Approx(0.0).margin(1e-16));
  REQUIRE(basis.indicator_coeff(1.0, 2) ==
          Catch::Approx(-gauss_pdf(1.0) / std::numbers::sqrt2)
              .margin(1e-14));
  REQUIRE(basis.indicator_coeff(1.0, 2) ==
          Catch::Approx(-0.17110).margin(1e-5));
  REQUIRE(basis.indicator_coeff(0.4, 0) ==
          Catch::Approx(gauss_cdf(0.4)).margin(1e-15));

  SECTION("closed form against Simpson quadrature of 1_{x<=z} h_i(x) p(x)") {
    for (double z : {-1.0, 0.5, 2.0})
      for (int i = 1; i <= 8; ++i) {
        const double oracle =
            simpson_gauss([&](double x) { return basis.eval(i, x); }, -10.0,
                          z);
        REQUIRE(basis.indicator_coeff(z, i) ==
                Catch::Approx(oracle).margin(1e-8));
      }
  }
}

TEST_CASE("projection residuals reproduce the reduction terms") {
  HermiteBasis basis(12);
  const double z = 0.7;
  for (double x : {-1.2, 0.3, 0.69, 0.71, 2.4}) {
    const double ind = x <= z ? 1.0 : 0.0;
    // k=2: 1_{x<=z} - Phi(z) + p(z) x
    REQUIRE(basis.project_residual(2, z, x) ==
            Catch::Approx(ind - gauss_cdf(z) + gauss_pdf(z) * x)
                .margin(1e-13));
    // k=3 adds (1/2) z p(z) (x^2 - 1)
    REQUIRE(basis.project_residual(3, z, x) ==
            Catch::Approx(ind - gauss_cdf(z) + gauss_pdf(z) * x +
                          0.5 * z * gauss_pdf(z) * (x * x - 1.0))
                .margin(1e-13));
  }

  SECTION("residual is orthogonal to the removed polynomials") {
    for (int low : {0, 1, 2}) {
      // piecewise-smooth split at z keeps Simpson exact enough
      const double left = simpson_gauss(
          [&](double x) {
            return basis.project_residual(3, z, x) * basis.eval(low, x);
          },
          -10.0, z);
      const double right = simpson_gauss(
          [&](double x) {
            return basis.project_residual(3, z, x) * basis.eval(low, x);
          },
          std::nextafter(z, 10.0), 10.0);
      REQUIRE(left + right == Catch::Approx(0.0).margin(1e-10));
    }
  }
}

TEST_CASE("Parseval partial sums approach the indicator norm") {
  HermiteBasis basis(41);
  for (double z : {-1.0, 0.0, 1.0}) {
    auto partial = [&](int deg) {
      double s = 0.0;
      for (int i = 0; i <= deg; ++i) {
        const double c = basis.indicator_coeff(z, i);
        s += c * c;
      }
      return s;
    };
    const double norm_sq = gauss_cdf(z);  // ||1_{.<=z}||^2 = Phi(z)
    REQUIRE(partial(40) <= norm_sq + 1e-3);
    REQUIRE(norm_sq - partial(40) < norm_sq - partial(10));  // equality trend
    REQUIRE(partial(40) > partial(10));
  }
}

TEST_CASE("Gaussian cross moments are rho^i on the diagonal") {
  HermiteBasis basis(8);
  RngStream rng{314, 0, 0};
  const std::size_t samples = 400'000;
  for (double rho : {0.2, 0.5}) {
    for (int i : {1, 2, 3}) {
      const auto est = cross_moment(basis, rho, i, i, samples, rng);
      REQUIRE(std::abs(est.value - std::pow(rho, i)) < 4.0 * est.se);
    }
  }
  const auto off = cross_moment(basis, 0.7, 1, 3, samples, rng);
  REQUIRE(std::abs(off.value) < 4.0 * off.se);
  const auto unit = cross_moment(basis, 1.0, 3, 3, samples, rng);
  REQUIRE(std::abs(unit.value - 1.0) < 4.0 * std::max(unit.se, 1e-12));
}

TEST_CASE("projection bound |E[P_k f P_k g]| <= |rho|^k ||f|| ||g||") {
  HermiteBasis basis(8);
  RngStream rng{2718, 0, 0};
  const std::size_t samples = 300'000;

  const auto zero = projection_bound_check(basis, 0.0, 2, 0.0, 0.5, samples,
                                           rng);
  REQUIRE(zero.lhs.value < 4.0 * zero.lhs.se);

  for (auto [rho, k] : std::vector<std::pair<double, int>>{
           {0.5, 3}, {0.5, 1}, {0.9, 2}, {-0.6, 3}}) {
    const auto c = projection_bound_check(basis, rho, k, 0.0, 0.0, samples,
                                          rng);
    REQUIRE(c.lhs.value <= c.rhs + 4.0 * c.lhs.se);
  }

  // the quadrature norm agrees with sqrt(Phi(z))
  REQUIRE(indicator_norm_quadrature(0.0) ==
          Catch::Approx(std::sqrt(0.5)).margin(1e-9));
}
