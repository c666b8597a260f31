#include "doctest.h"

#include <cmath>
#include <functional>

#include "../support/oracle.hpp"
#include "wrp/density.hpp"
#include "wrp/errors.hpp"

using namespace wrp;

namespace {

const LevyTriplet kPaper = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
const oracle::Model kModel{};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no wrp::Error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("Brownian density is Gaussian") {
  const auto bm = LevyTriplet::brownian(1.0);
  const auto s = density(bm, 2.0, {-3.0, -1.0, 0.0, 0.5, 2.5});
  for (std::size_t i = 0; i < s.x_grid.size(); ++i) {
    const double x = s.x_grid[i];
    CHECK(s.p_values[i] == doctest::Approx(oracle::norm_pdf(x / std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-10));
  }
}

TEST_CASE("Gamma-Brownian density matches the Gaussian mixture") {
  for (double t : {0.25, 1.0, 4.0}) {
    const std::vector<double> xs{-6.0, -2.0, -0.5, 0.0, 0.7, 2.0};
    const auto s = density(kPaper, t, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(std::abs(s.p_values[i] - oracle::density(kModel, t, xs[i])) < 1e-9);
    }
  }
}

TEST_CASE("normalization on a wide grid") {
  std::vector<double> xs;
  for (int i = 0; i <= 4000; ++i) xs.push_back(-30.0 + 38.0 * i / 4000.0);
  const auto s = density(kPaper, 1.0, xs);
  CHECK(s.normalization_defect < 1e-5);
}

TEST_CASE("expectations of the put and the indicator") {
  for (double t : {0.25, 1.0, 4.0}) {
    CHECK(expectation(kPaper, make_put(-0.2, 0.9), t) ==
          doctest::Approx(oracle::put(kModel, t, -0.2)).epsilon(1e-10));
    CHECK(expectation(kPaper, make_indicator(-0.2, 0.9), t) ==
          doctest::Approx(oracle::cdf(kModel, t, -0.2)).epsilon(1e-10));
  }
}

TEST_CASE("grid-function expectation and its tail check") {
  GridFunction one{{-40.0, 25.0}, {1.0, 1.0}};
  CHECK(expectation(kPaper, one, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  GridFunction narrow{{-0.5, 0.5}, {1.0, 1.0}};
  CHECK(code_of([&] { expectation(kPaper, narrow, 1.0); }) == ErrorCode::TailUnbounded);
}

TEST_CASE("Brownian joint law by reflection") {
  // P(B_T <= K + x, sup B >= x) = P(B_T >= x - K)
  const auto bm = LevyTriplet::brownian(1.0);
  for (double x : {0.1, 0.5}) {
    for (double T : {0.5, 1.0}) {
      const double exact = oracle::norm_cdf((-0.2 - x) / std::sqrt(T));
      CHECK(joint_probability(bm, {-0.2, x, T}).prob == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("at x = 0 the joint law is the terminal distribution") {
  const double v = joint_probability(kPaper, {-0.2, 0.0, 1.0}).raw;
  CHECK(std::abs(v - oracle::cdf(kModel, 1.0, -0.2)) < 1e-5);
}

TEST_CASE("joint law lies between its trivial bounds") {
  const double p = joint_probability(kPaper, {-0.2, 0.1, 1.0}).prob;
  CHECK(p > 0.0);
  CHECK(p <= oracle::cdf(kModel, 1.0, -0.1));
}

TEST_CASE("surface with a shared cache equals independent evaluations") {
  const std::vector<double> xs{0.0, 0.1, 0.3};
  const std::vector<double> ts{0.5, 1.0};
  const auto s = joint_surface(kPaper, -0.2, xs, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double single = joint_probability(kPaper, {-0.2, xs[j], ts[i]}).prob;
      CHECK(s.prob[i * xs.size() + j] == doctest::Approx(single).epsilon(1e-9));
    }
  }
}

TEST_CASE("cache misuse is rejected") {
  const auto ind = make_indicator(-0.2, 0.9);
  CacheParams p;
  p.T_min = 0.5;
  p.T_max = 1.0;
  p.x_max = 0.2;
  const auto cache = build_cache(kPaper, ind, p);
  CHECK_NOTHROW(joint_probability(kPaper, ind, {-0.2, 0.1, 0.8}, cache));
  CHECK(code_of([&] { joint_probability(kPaper, ind, {-0.2, 0.5, 0.8}, cache); }) == ErrorCode::CacheMismatch);
  CHECK(code_of([&] { joint_probability(kPaper, ind, {-0.2, 0.1, 2.0}, cache); }) == ErrorCode::CacheMismatch);
  const auto other = make_indicator(-0.3, 0.9);
  CHECK(code_of([&] { joint_probability(kPaper, other, {-0.3, 0.1, 0.8}, cache); }) == ErrorCode::CacheMismatch);
  const auto other_model = LevyTriplet::bm_gamma(1.0, 1.0, 2.0, 0.9);
  CHECK(code_of([&] { joint_probability(other_model, ind, {-0.2, 0.1, 0.8}, cache); }) == ErrorCode::CacheMismatch);
}

TEST_CASE("sensitivities match central differences") {
  const double x = 0.1, T = 1.0, h = 1e-4;
  auto P = [&](double xv, double Tv) { return joint_probability(kPaper, {-0.2, xv, Tv}).raw; };
  const double fd_x = (P(x + h, T) - P(x - h, T)) / (2 * h);
  const double fd_T = (P(x, T + h) - P(x, T - h)) / (2 * h);
  CHECK(sensitivity(kPaper, -0.2, x, T, 1, 0) == doctest::Approx(fd_x).epsilon(1e-5));
  CHECK(sensitivity(kPaper, -0.2, x, T, 0, 1) == doctest::Approx(fd_T).epsilon(1e-5));
  CHECK(sensitivity(kPaper, -0.2, x, T, 0, 0) == doctest::Approx(P(x, T)).epsilon(1e-12));
}

TEST_CASE("pairing of g with the density reproduces E h") {
  const auto r = pair_g_with_density(kPaper, make_put(-0.2, 0.9), 1.0);
  CHECK(r.pairing == doctest::Approx(oracle::put(kModel, 1.0, -0.2)).epsilon(1e-8));
}
