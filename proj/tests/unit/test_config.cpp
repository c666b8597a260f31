#include "doctest.h"

#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <limits>

#include "wrp/config.hpp"
#include "wrp/errors.hpp"

using namespace wrp;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no wrp::Error thrown");
  return ErrorCode::InvalidArgument;
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "wrp_test_config";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("Gamma model file") {
  const auto m = parse_model(R"({"schema_version": 1, "sigma": 1, "zeta": 0.9,
                                 "jumps": {"kind": "gamma", "alpha": 1, "beta": 1}})");
  CHECK(m.mu() == doctest::Approx(-1.0));
  CHECK(m.zeta() == doctest::Approx(0.9));
  CHECK(m.fingerprint() == LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9).fingerprint());
}

TEST_CASE("Brownian and tabulated model files") {
  const auto bm = parse_model(R"({"schema_version": 1, "sigma": 0.5, "mu": 0.1})");
  CHECK(bm.sigma() == 0.5);
  CHECK_FALSE(bm.has_jumps());
  const auto tab = parse_model(R"({"schema_version": 1, "sigma": 1,
      "jumps": {"kind": "tabulated", "x": [-3, -2, -1], "density": [0.1, 0.2, 0.3]}})");
  CHECK(std::holds_alternative<TabulatedJumps>(tab.jumps()));
}

TEST_CASE("model schema errors") {
  CHECK(code_of([] { parse_model("{"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_model(R"({"sigma": 1})"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_model(R"({"schema_version": 2, "sigma": 1})"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_model(R"({"schema_version": 1, "sigma": "x"})"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_model(R"({"schema_version": 1, "sigma": -1})"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] {
          parse_model(R"({"schema_version": 1, "sigma": 1, "jumps": {"kind": "poisson"}})");
        }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_model("/nonexistent/model.json"); }) == ErrorCode::IoError);
}

TEST_CASE("payoff files") {
  const auto put = parse_payoff(R"({"schema_version": 1, "kind": "put", "K": -0.2})", 0.9);
  CHECK(put.zeta() == 0.9);
  CHECK(put.h(-1.0) == doctest::Approx(0.8));
  const auto ind = parse_payoff(R"({"schema_version": 1, "kind": "indicator", "K": -0.3, "zeta": 0.5})", 0.9);
  CHECK(ind.zeta() == 0.5);
  CHECK(code_of([] { parse_payoff(R"({"schema_version": 1, "kind": "put", "K": 0.3})", 0.9); }) ==
        ErrorCode::InvalidStrike);
  CHECK(code_of([] { parse_payoff(R"({"schema_version": 1, "kind": "call", "K": -1})", 0.9); }) ==
        ErrorCode::ConfigError);

  const auto dir = scratch_dir();
  {
    std::ofstream os(dir / "h.csv");
    os << "x,h\n-30,29.8\n-1.2,1\n-0.2,0\n0,0\n";
  }
  {
    std::ofstream os(dir / "custom.json");
    os << R"({"schema_version": 1, "kind": "custom", "grid": "h.csv"})";
  }
  const auto custom = load_payoff((dir / "custom.json").string(), 0.9);
  CHECK(custom.h(-1.0) == doctest::Approx(0.8));
  CHECK(std::abs(custom.h_hat(1.0) - put.h_hat(1.0)) < 1e-9);
}

TEST_CASE("grid specifications") {
  const auto g = parse_grid("0:0.2:5");
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 0.0);
  CHECK(g[2] == doctest::Approx(0.1));
  CHECK(g[4] == 0.2);
  CHECK(parse_grid("-5:5:1000").size() == 1000);
  CHECK(parse_grid("1.5") == std::vector<double>{1.5});
  CHECK(parse_grid("2:2:1") == std::vector<double>{2.0});
  CHECK(code_of([] { parse_grid("0:1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_grid("0:1:2.5"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_grid("a:1:3"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_grid("0:1:0"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("numbers round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0).size() <= 19);
}

TEST_CASE("CSV writing and reading") {
  const auto path = (scratch_dir() / "out.csv").string();
  write_csv(path, {"x", "y"}, {{1.0, 2.0}, {0.1, 1.0 / 3.0}});
  std::vector<double> a, b;
  read_csv_columns(path, a, b);
  CHECK(a == std::vector<double>{1.0, 2.0});
  CHECK(b == std::vector<double>{0.1, 1.0 / 3.0});
  CHECK_THROWS_AS(write_csv(path, {"x"}, {{1.0}, {2.0}}), Error);
  CHECK(code_of([] { write_csv("/nonexistent/dir/out.csv", {"x"}, {{1.0}}); }) == ErrorCode::IoError);
}
