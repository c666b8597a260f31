#include "doctest.h"

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "../support/oracle.hpp"
#include "wrp/errors.hpp"
#include "wrp/levy.hpp"

using namespace wrp;

namespace {

// int_{-inf}^0 (e^{l x} - 1 - l x) beta e^{-alpha |x|} / |x| dx for real l > -alpha.
double gamma_levy_integral(double l, double alpha, double beta) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double y) {  // y = -x > 0
    const double v = l * y;
    if (std::abs(v) < 1e-4) return (v * v / 2.0 - v * v * v / 6.0) * beta * std::exp(-alpha * y) / y;
    return (std::exp(-(l + alpha) * y) - std::exp(-alpha * y) + v * std::exp(-alpha * y)) * beta / y;
  };
  return es.integrate(f, 1e-14);
}

}  // namespace

TEST_CASE("Brownian exponent is sigma^2 l^2 / 2 + mu l") {
  const auto bm = LevyTriplet::brownian(1.3, 0.4, 0.5);
  for (Complex l : {Complex(0.5, 0.0), Complex(2.0, -1.0), Complex(-0.3, 4.0)}) {
    const Complex expected = 0.5 * 1.69 * l * l + 0.4 * l;
    CHECK(std::abs(psi(bm, l) - expected) < 1e-14);
  }
}

TEST_CASE("Gamma exponent matches the Levy-Khintchine integral") {
  const double alpha = 1.5, beta = 0.7, sigma = 0.8;
  const auto tri = LevyTriplet::bm_gamma(sigma, alpha, beta);
  for (double l : {-1.2, -0.5, 0.3, 1.0, 4.0}) {
    const double expected =
        0.5 * sigma * sigma * l * l + tri.mu() * l + gamma_levy_integral(l, alpha, beta);
    CHECK(psi(tri, Complex(l, 0.0)).real() == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("paper model exponent agrees with the independent oracle") {
  const auto tri = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
  oracle::Model m;
  for (Complex l : {Complex(4.0, 0.0), Complex(4.0, 7.0), Complex(-0.9, -3.0), Complex(0.2, 0.1)}) {
    CHECK(std::abs(psi(tri, l) - oracle::psi(m, l)) < 1e-13);
    CHECK(std::abs(psi_prime(tri, l) - oracle::dpsi(m, l)) < 1e-13);
  }
  CHECK(tri.mu() == doctest::Approx(-1.0));
}

TEST_CASE("derivatives agree with central differences") {
  const auto tri = LevyTriplet::bm_gamma(1.0, 2.0, 3.0);
  const Complex l(1.1, 0.7);
  const double h = 1e-5;
  const Complex d1 = (psi(tri, l + h) - psi(tri, l - h)) / (2 * h);
  const Complex d2 = (psi_prime(tri, l + h) - psi_prime(tri, l - h)) / (2 * h);
  CHECK(std::abs(psi_prime(tri, l) - d1) < 1e-8);
  CHECK(std::abs(psi_second(tri, l) - d2) < 1e-8);
}

TEST_CASE("tabulated Gamma density reproduces the closed form") {
  const double alpha = 1.0, beta = 1.0;
  TabulatedJumps tab;
  // geometric grid from -40 to -1e-8
  for (int i = 0; i <= 2000; ++i) {
    const double x = -40.0 * std::pow(1e-8 / 40.0, i / 2000.0);
    tab.x.push_back(x);
    tab.density.push_back(beta * std::exp(-alpha * std::abs(x)) / std::abs(x));
  }
  const LevyTriplet tabulated(-beta / alpha, 1.0, tab, 0.5);
  const auto closed = LevyTriplet::bm_gamma(1.0, alpha, beta, 0.5);
  for (Complex l : {Complex(0.5, 0.0), Complex(1.0, 2.0), Complex(-0.4, 1.0)}) {
    CHECK(std::abs(psi(tabulated, l) - psi(closed, l)) < 1e-3);
  }
}

TEST_CASE("domain checks") {
  const auto tri = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
  CHECK_THROWS_AS(psi(tri, Complex(-0.95, 0.0)), Error);
  try {
    psi(tri, Complex(-0.95, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AdmissibilityViolation);
  }
  const auto wide = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 2.0);
  try {
    psi(wide, Complex(-1.5, 0.0));
    FAIL("expected a branch cut error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchCutViolation);
  }
  CHECK_NOTHROW(psi(tri, Complex(-0.9, 5.0)));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(LevyTriplet::brownian(0.0), Error);
  CHECK_THROWS_AS(LevyTriplet::brownian(-1.0), Error);
  CHECK_THROWS_AS(LevyTriplet::bm_gamma(1.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(LevyTriplet(0.0, 1.0, TabulatedJumps{{-1.0, -2.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("admissibility report") {
  CHECK(validate_admissibility(LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9)).passed());
  CHECK_FALSE(validate_admissibility(LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 1.2)).passed());
  CHECK(validate_admissibility(LevyTriplet::brownian(1.0)).passed());
}

TEST_CASE("kernel denominator stays away from zero on the paper contour") {
  const auto tri = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
  CHECK(denominator_floor(tri, 4.0, {-60.0, 60.0}, {-60.0, 60.0}) > 1e-3);
}

TEST_CASE("fingerprints distinguish models") {
  const auto a = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
  const auto b = LevyTriplet::bm_gamma(1.0, 1.0, 1.0001, 0.9);
  CHECK(a.fingerprint() != b.fingerprint());
  CHECK(a.fingerprint() == LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9).fingerprint());
}
