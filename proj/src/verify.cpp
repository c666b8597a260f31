#include "wrp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "json.hpp"

#include "wrp/density.hpp"
#include "wrp/errors.hpp"
#include "wrp/symmetry.hpp"

namespace wrp {

namespace {

constexpr double kStrike = -0.2;
constexpr double kZeta = 0.9;
constexpr double kHedgeStart = -0.1;

CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult c;
  c.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const Error& e) {
    c.passed = false;
    c.value = std::nan("");
    c.detail = std::string(to_string(e.code())) + ": " + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json o;
    o["name"] = c.name;
    o["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nlohmann::ordered_json();
    o["tolerance"] = c.tolerance;
    o["passed"] = c.passed;
    o["runtime_seconds"] = c.seconds;
    o["detail"] = c.detail;
    j["checks"].push_back(o);
  }
  return j.dump(2);
}

LevyTriplet reference_model() { return LevyTriplet::bm_gamma(1.0, 1.0, 1.0, kZeta); }

CheckResult check_pure_bm_reflection(double r) {
  return timed("pure_bm_reflection", [&](CheckResult& c) {
    const auto bm = LevyTriplet::brownian(1.0);
    const auto put = make_put(kStrike, kZeta);
    std::vector<double> xs;
    for (int i = 1; i <= 20; ++i) xs.push_back(0.1 * i);
    ContourParams p;
    p.r = r;
    p.R = r;
    const auto img = compute_g_curve(bm, put, xs, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::max(worst, std::abs(img.g_values[i] - put.h(-xs[i])));
    }
    c.value = worst;
    c.tolerance = 1e-4;
    c.passed = worst < c.tolerance;
    c.detail = "r = R = " + num(r);
  });
}

CheckResult check_laplace_identity(double r) {
  return timed("laplace_identity", [&](CheckResult& c) {
    const auto tri = reference_model();
    const auto put = make_put(kStrike, kZeta);
    std::vector<double> xs;
    for (int i = 0; i <= 500; ++i) xs.push_back(0.02 + 0.02 * i);
    ContourParams p;
    p.r = r;
    p.R = r;
    const auto img = compute_g_curve(tri, put, xs, p);
    const auto res = verify_laplace_identity(img, {4.5, 5.0, 6.0});
    double worst = 0.0;
    for (const auto& v : res) {
      worst = std::max(worst, std::abs(v.residual) / std::max(std::abs(v.rhs), 1e-300));
      c.detail += "w=" + num(v.w) + ": lhs " + num(v.lhs) + " rhs " + num(v.rhs) + "; ";
    }
    c.value = worst;
    c.tolerance = 1e-3;
    c.passed = worst < c.tolerance;
  });
}

CheckResult check_pairing_identity(const std::vector<double>& t_list) {
  return timed("pairing_identity", [&](CheckResult& c) {
    const auto tri = reference_model();
    double worst = 0.0;
    for (const auto& payoff : {make_put(kStrike, kZeta), make_indicator(kStrike, kZeta)}) {
      for (double t : t_list) {
        const auto r = pair_g_with_density(tri, payoff, t);
        worst = std::max(worst, std::abs(r.difference) / (1.0 + std::abs(r.expectation)));
      }
    }
    c.value = worst;
    c.tolerance = 1e-4;
    c.passed = worst < c.tolerance;
  });
}

CheckResult check_x0_collapse() {
  return timed("x0_collapse", [&](CheckResult& c) {
    const auto tri = reference_model();
    const double joint = joint_probability(tri, {kStrike, 0.0, 1.0}).raw;
    const double direct = expectation(tri, make_indicator(kStrike, kZeta), 1.0);
    c.value = std::abs(joint - direct);
    c.tolerance = 1e-5;
    c.passed = c.value < c.tolerance;
    c.detail = "joint " + num(joint) + " vs P(X_1 <= K) " + num(direct);
  });
}

CheckResult check_convergence_slope(const std::vector<double>& r_list, double r_ref) {
  return timed("convergence_slope", [&](CheckResult& c) {
    const auto tri = reference_model();
    const auto put = make_put(kStrike, kZeta);
    ContourParams p;
    p.r = r_ref;
    p.R = r_ref;
    const double ref = compute_g_point(tri, put, 1.0, p).g;
    std::vector<double> lx, ly;
    for (double r : r_list) {
      p.r = r;
      p.R = r;
      const double d = std::abs(compute_g_point(tri, put, 1.0, p).g - ref);
      lx.push_back(std::log(r));
      ly.push_back(std::log(std::max(d, 1e-300)));
      c.detail += "r=" + num(r) + ": " + num(d) + "; ";
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    c.value = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.tolerance = -0.8;
    c.passed = c.value <= c.tolerance;
  });
}

McBatches simulate_reference(std::size_t n_paths, std::size_t n_steps, std::uint64_t seed) {
  const auto tri = reference_model();
  SimConfig cfg;
  cfg.n_paths = n_paths;
  cfg.n_steps = n_steps;
  cfg.T = 1.0;
  cfg.seed = seed;
  cfg.bridge_correction = true;
  McBatches b;
  b.fine = simulate(tri, cfg);
  cfg.n_steps = n_steps / 10;
  b.coarse = simulate(tri, cfg);
  return b;
}

CheckResult check_mc_joint(const McBatches& batches) {
  return timed("mc_joint", [&](CheckResult& c) {
    const auto tri = reference_model();
    const double x = 0.1;
    const double analytic = joint_probability(tri, {kStrike, x, 1.0}).prob;
    const auto fine = estimate_joint(batches.fine, kStrike, x);
    const auto coarse = estimate_joint(batches.coarse, kStrike, x);
    const double allowance = std::abs(fine.value - coarse.value);
    c.value = std::abs(analytic - fine.value);
    c.tolerance = 3.0 * fine.se + allowance;
    c.passed = c.value <= c.tolerance;
    c.detail = "analytic " + num(analytic) + ", MC " + num(fine.value) + " +- " + num(fine.se) +
               ", allowance " + num(allowance);
  });
}

CheckResult check_mc_hedge(const McBatches& batches) {
  return timed("mc_hedge", [&](CheckResult& c) {
    const auto tri = reference_model();
    const auto put = make_put(kStrike, kZeta);
    double s_max = 0.0;
    for (double t : batches.fine.terminal) s_max = std::max(s_max, kHedgeStart + t);
    for (double t : batches.coarse.terminal) s_max = std::max(s_max, kHedgeStart + t);

    // g on (0, s_max] with g(0) = 0. The contour sits just right of the
    // kernel's singularities so that e^{gamma x} stays moderate at large x.
    const double dx = 0.005;
    std::vector<double> xs;
    for (double x = dx; x < s_max + dx; x += dx) xs.push_back(x);
    ContourParams p;
    p.gamma = 3.1;
    p.r = 1600.0;
    p.R = 1600.0;
    std::vector<double> grid{0.0}, g{0.0};
    if (!xs.empty()) {
      const auto img = compute_g_curve(tri, put, xs, p);
      grid.insert(grid.end(), xs.begin(), xs.end());
      g.insert(g.end(), img.g_values.begin(), img.g_values.end());
    }
    const GridFunction g_interp{grid, g};
    const auto f = [&](double s) { return s < 0.0 ? put.h(s) : -g_interp(s); };

    const auto price_f = estimate_barrier_price(batches.fine, put, kHedgeStart);
    const auto price_c = estimate_barrier_price(batches.coarse, put, kHedgeStart);
    const auto euro = estimate_european(batches.fine, f, kHedgeStart);
    const double allowance = std::abs(price_f.value - price_c.value);
    const double se = std::hypot(price_f.se, euro.se);
    c.value = std::abs(price_f.value - euro.value);
    c.tolerance = 3.0 * se + allowance;
    c.passed = c.value <= c.tolerance;
    c.detail = "barrier " + num(price_f.value) + " +- " + num(price_f.se) + ", european " +
               num(euro.value) + " +- " + num(euro.se) + ", allowance " + num(allowance);
  });
}

VerifyReport run_verify(const VerifyOptions& o) {
  const bool full = o.suite == Suite::Full;
  VerifyReport rep;
  rep.suite = full ? "full" : "quick";
  const auto wanted = [&](const char* name) {
    return o.only.empty() || std::find(o.only.begin(), o.only.end(), name) != o.only.end();
  };
  if (wanted("laplace_identity")) rep.checks.push_back(check_laplace_identity(200.0));
  if (wanted("pure_bm_reflection")) rep.checks.push_back(check_pure_bm_reflection(5120.0));
  if (wanted("pairing_identity")) {
    rep.checks.push_back(check_pairing_identity(full ? std::vector<double>{0.25, 1.0, 4.0}
                                                     : std::vector<double>{0.25, 1.0}));
  }
  if (wanted("x0_collapse")) rep.checks.push_back(check_x0_collapse());
  if (wanted("mc_joint") || wanted("mc_hedge")) {
    const auto batches = full ? simulate_reference(1000000, 10000, o.seed)
                              : simulate_reference(100000, 1000, o.seed);
    if (wanted("mc_joint")) rep.checks.push_back(check_mc_joint(batches));
    if (wanted("mc_hedge")) rep.checks.push_back(check_mc_hedge(batches));
  }
  if (wanted("convergence_slope")) {
    rep.checks.push_back(check_convergence_slope({15.0, 30.0, 60.0, 120.0}, 240.0));
  }
  return rep;
}

}  // namespace wrp
