#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wrp/errors.hpp"
#include "wrp/payoff.hpp"

using namespace wrp;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

namespace {

// (1/2pi) int_{-inf}^{0} e^{(zeta+iz) x} h(x) dx, integrated on [-60, 0] in
// unit panels (e^{60 zeta} kills the rest for the zetas used here).
Complex preimage_by_quadrature(const std::function<double(double)>& h, double zeta, double z) {
  auto re = [&](double x) { return std::exp(zeta * x) * std::cos(z * x) * h(x); };
  auto im = [&](double x) { return std::exp(zeta * x) * std::sin(z * x) * h(x); };
  double a = 0.0, b = 0.0;
  for (double lo = -60.0; lo < 0.0; lo += 0.1) {
    a += GK::integrate(re, lo, lo + 0.1, 0, 1e-15);
    b += GK::integrate(im, lo, lo + 0.1, 0, 1e-15);
  }
  return Complex(a, b) / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("put preimage matches the defining integral") {
  const double K = -0.2, zeta = 0.9;
  const auto put = make_put(K, zeta);
  auto h = [&](double x) { return std::max(K - x, 0.0); };
  for (double z : {0.0, 0.7, -3.0, 12.5}) {
    const Complex ref = preimage_by_quadrature(h, zeta, z);
    CHECK(std::abs(put.h_hat(z) - ref) < 1e-12);
  }
  CHECK(put.h(-1.0) == doctest::Approx(0.8));
  CHECK(put.h(-0.1) == 0.0);
  CHECK(put.integrability() == Integrability::L1);
}

TEST_CASE("indicator preimage matches the defining integral") {
  const double K = -0.5, zeta = 0.6;
  const auto ind = make_indicator(K, zeta);
  auto h = [&](double x) { return x <= K ? 1.0 : 0.0; };
  for (double z : {0.0, 1.3, -4.0}) {
    // the kink at K sits on a panel edge only by luck; integrate up to K directly
    auto re = [&](double x) { return std::exp(zeta * x) * std::cos(z * x); };
    auto im = [&](double x) { return std::exp(zeta * x) * std::sin(z * x); };
    double a = 0.0, b = 0.0;
    for (double lo = -80.0; lo < K - 1e-12; lo += 0.5) {
      const double hi = std::min(lo + 0.5, K);
      a += GK::integrate(re, lo, hi, 0, 1e-15);
      b += GK::integrate(im, lo, hi, 0, 1e-15);
    }
    const Complex ref = Complex(a, b) / (2.0 * std::numbers::pi);
    CHECK(std::abs(ind.h_hat(z) - ref) < 1e-12);
    (void)h;
  }
  CHECK(ind.integrability() == Integrability::L2Only);
  CHECK(std::isinf(ind.tail_mass(100.0)));
}

TEST_CASE("put norms agree with quadrature of |h_hat|") {
  const auto put = make_put(-0.2, 0.9);
  boost::math::quadrature::exp_sinh<double> es;
  const double l1 = 2.0 * es.integrate([&](double z) { return std::abs(put.h_hat(z)); }, 1e-13);
  CHECK(put.l1_norm() == doctest::Approx(l1).epsilon(1e-10));
  // Plancherel: int |h_hat|^2 = (1/2pi) int e^{2 zeta x} h(x)^2 dx
  const double rhs =
      es.integrate([&](double y) { return std::exp(-1.8 * (y + 0.2)) * y * y; }, 1e-14) /
      (2.0 * std::numbers::pi);
  CHECK(put.l2_norm() * put.l2_norm() == doctest::Approx(rhs).epsilon(1e-10));
  for (double r : {1.0, 10.0, 300.0}) {
    const double tail = 2.0 * es.integrate([&](double s) { return std::abs(put.h_hat(r + s)); }, 1e-13);
    CHECK(put.tail_mass(r) == doctest::Approx(tail).epsilon(1e-8));
  }
}

TEST_CASE("piecewise-linear payoff reproduces the put") {
  std::vector<double> x, h;
  for (int i = 0; i <= 400; ++i) {
    const double v = -50.0 + 50.0 * i / 400.0;
    x.push_back(v);
    h.push_back(std::max(-0.2 - v, 0.0));
  }
  // -0.2 is not a grid node; insert it so the kink is exact
  x.insert(std::upper_bound(x.begin(), x.end(), -0.2), -0.2);
  h.clear();
  for (double v : x) h.push_back(std::max(-0.2 - v, 0.0));
  // the payoff must drop to zero at the left end for integrability to be checked
  const double zeta = 0.9;
  const auto put = make_put(-0.2, zeta);
  const auto custom = make_custom(x, h, zeta);
  for (double z : {0.0, 2.0, -7.0, 40.0}) {
    // the custom payoff is truncated at -50, which shifts h_hat by O(50 e^{-45})
    CHECK(std::abs(custom.h_hat(z) - put.h_hat(z)) < 1e-12);
    CHECK(std::abs(custom.h_hat(z) - preimage_by_quadrature(
                                          [&](double v) { return v < -50.0 ? 0.0 : std::max(-0.2 - v, 0.0); },
                                          zeta, z)) < 1e-12);
  }
  CHECK(custom.h(-1.0) == doctest::Approx(0.8));
  CHECK(custom.integrability() == Integrability::L1);
  CHECK(custom.tail_exponent() < -1.5);
}

TEST_CASE("payoff validation") {
  CHECK_THROWS_AS(make_put(0.1, 0.9), Error);
  CHECK_THROWS_AS(make_put(-0.2, 0.0), Error);
  try {
    make_custom({-2.0, -1.0, 0.5}, {1.0, 1.0, 1.0}, 0.9);
    FAIL("expected NonIntegrable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrable);
  }
  try {
    // e^{zeta x} h(x) still large at the left end
    make_custom({-2.0, -1.0}, {5.0, 1.0}, 0.9);
    FAIL("expected NonIntegrable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrable);
  }
}

TEST_CASE("kinks and fingerprints") {
  const auto put = make_put(-0.2, 0.9);
  REQUIRE(put.kinks().size() == 1);
  CHECK(put.kinks()[0] == -0.2);
  CHECK(put.fingerprint() != make_put(-0.3, 0.9).fingerprint());
  CHECK(put.fingerprint() != make_indicator(-0.2, 0.9).fingerprint());
}
