// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../support/oracle.hpp"
#include "wrp/density.hpp"
#include "wrp/errors.hpp"
#include "wrp/mc.hpp"
#include "wrp/symmetry.hpp"
#include "wrp/verify.hpp"

using namespace wrp;
using Clock = std::chrono::steady_clock;

namespace {

const LevyTriplet kPaper = LevyTriplet::bm_gamma(1.0, 1.0, 1.0, 0.9);
const oracle::Model kModel{};
constexpr double kK = -0.2;
constexpr double kZeta = 0.9;

int g_failures = 0;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(const char* id, const char* what, bool ok, const std::string& detail, double seconds) {
  if (!ok) ++g_failures;
  std::printf("%s %s %s: %s (%.2f s)\n", id, ok ? "PASS" : "FAIL", what, detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void guarded(const char* id, const char* what, const std::function<void()>& body) {
  const auto t0 = Clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    report(id, what, false, std::string("error: ") + e.what(), since(t0));
  }
}

void ac1() {
  guarded("AC1", "pure-BM reflection", [] {
    const auto t0 = Clock::now();
    const auto bm = LevyTriplet::brownian(1.0);
    const auto put = make_put(kK, kZeta);
    std::vector<double> xs;
    for (int i = 1; i <= 20; ++i) xs.push_back(0.1 * i);
    ContourParams p;
    p.r = 5120;
    p.R = 5120;
    const auto img = compute_g_curve(bm, put, xs, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::max(worst, std::abs(img.g_values[i] - std::max(xs[i] + kK, 0.0)));
    }
    const double t = since(t0);
    report("AC1", "pure-BM reflection", worst < 1e-4 && t < 10.0,
           fmt("max |g(x) - h(-x)| = %.3e (tol 1e-4), runtime limit %.0f s", worst, 10.0), t);
  });
}

void ac2() {
  guarded("AC2", "Laplace identity", [] {
    const auto t0 = Clock::now();
    const auto put = make_put(kK, kZeta);
    const double dx = 0.02;
    std::vector<double> xs;
    for (int i = 0; i <= 500; ++i) xs.push_back(dx * (i + 1));
    ContourParams p;
    p.r = 200;
    p.R = 200;
    const auto img = compute_g_curve(kPaper, put, xs, p);
    double worst = 0.0;
    std::string detail;
    for (double w : {4.5, 5.0, 6.0}) {
      // Simpson on [x_0, x_500] plus a trapezoid from 0, where g vanishes
      double s = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = (i == 0 || i + 1 == xs.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += c * std::exp(-w * xs[i]) * img.g_values[i];
      }
      s *= dx / 3.0;
      s += 0.5 * dx * std::exp(-w * xs[0]) * img.g_values[0];
      const double rhs = oracle::inner_transform_put(kModel, kK, kZeta, w);
      const double rel = std::abs(s - rhs) / std::abs(rhs);
      worst = std::max(worst, rel);
    }
    const double t = since(t0);
    report("AC2", "Laplace identity", worst < 1e-3 && t < 30.0,
           fmt("max relative residual over w = 4.5, 5, 6: %.3e (tol %.0e)", worst, 1e-3), t);
  });
}

void ac3() {
  guarded("AC3", "pairing identity", [] {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int kind = 0; kind < 2; ++kind) {
      const auto payoff = kind == 0 ? make_put(kK, kZeta) : make_indicator(kK, kZeta);
      for (double t : {0.25, 1.0, 4.0}) {
        const double eh = kind == 0 ? oracle::put(kModel, t, kK) : oracle::cdf(kModel, t, kK);
        const double pairing = pair_g_with_density(kPaper, payoff, t).pairing;
        worst = std::max(worst, std::abs(pairing - eh) / (1.0 + std::abs(eh)));
      }
    }
    const double t = since(t0);
    report("AC3", "pairing identity", worst < 1e-4 && t < 60.0,
           fmt("max |<g,p_t> - E h| / (1 + |E h|) = %.3e (tol %.0e)", worst, 1e-4), t);
  });
}

void ac4() {
  guarded("AC4", "x = 0 collapse", [] {
    const auto t0 = Clock::now();
    const double joint = joint_probability(kPaper, {kK, 0.0, 1.0}).raw;
    const double cdf = oracle::cdf(kModel, 1.0, kK);
    const double d = std::abs(joint - cdf);
    report("AC4", "x = 0 collapse", d < 1e-5,
           fmt("|joint - P(X_1 <= K)| = %.3e (tol %.0e)", d, 1e-5), since(t0));
  });
}

void ac5_ac6() {
  const auto t0 = Clock::now();
  McBatches batches;
  try {
    batches = simulate_reference(1000000, 10000, 20240601);
  } catch (const std::exception& e) {
    report("AC5", "Monte Carlo joint law", false, std::string("error: ") + e.what(), since(t0));
    report("AC6", "static hedge", false, "no path batch", 0.0);
    return;
  }
  const double sim = since(t0);
  const double fine_sim = batches.fine.seconds;
  {
    const auto c = check_mc_joint(batches);
    const bool ok = c.passed && fine_sim + c.seconds < 300.0;
    report("AC5", "Monte Carlo joint law", ok,
           c.detail + fmt("; |diff| %.3e vs tol %.3e", c.value, c.tolerance), fine_sim + c.seconds);
  }
  {
    const auto c = check_mc_hedge(batches);
    const bool ok = c.passed && fine_sim + c.seconds < 300.0;
    report("AC6", "static hedge", ok,
           c.detail + fmt("; |diff| %.3e vs tol %.3e", c.value, c.tolerance) +
               fmt("; paths shared with AC5, refinement run %.1f s of %.1f s", sim - fine_sim, sim),
           fine_sim + c.seconds);
  }
}

void ac7() {
  guarded("AC7", "convergence slope", [] {
    const auto t0 = Clock::now();
    const auto put = make_put(kK, kZeta);
    ContourParams p;
    p.r = p.R = 240;
    const double ref = compute_g_point(kPaper, put, 1.0, p).g;
    std::vector<double> lx, ly;
    for (double r : {15.0, 30.0, 60.0, 120.0}) {
      p.r = p.R = r;
      lx.push_back(std::log(r));
      ly.push_back(std::log(std::abs(compute_g_point(kPaper, put, 1.0, p).g - ref)));
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report("AC7", "convergence slope", slope <= -0.8,
           fmt("log-log slope %.3f (need <= %.1f)", slope, -0.8), since(t0));
  });
}

void ac8() {
  guarded("AC8", "performance", [] {
    const auto t_all = Clock::now();
    const auto put = make_put(kK, kZeta);

    auto t0 = Clock::now();
    compute_g_point(kPaper, put, 1.0, ContourParams{});
    const double t_g = since(t0);

    t0 = Clock::now();
    joint_probability(kPaper, {kK, 0.1, 1.0});
    const double t_joint = since(t0);

    std::vector<double> xs, ts;
    for (int i = 0; i < 100; ++i) {
      xs.push_back(0.2 * i / 99.0);
      ts.push_back(0.1 + 0.9 * i / 99.0);
    }
    t0 = Clock::now();
    const auto surf = joint_surface(kPaper, kK, xs, ts);
    const double t_surface = since(t0);

    // 10,000 independent evaluations, extrapolated from a timed subsample
    // spread over the same grid
    const int sample = 40;
    t0 = Clock::now();
    for (int k = 0; k < sample; ++k) {
      const int i = (k * 37) % 100, j = (k * 53) % 100;
      joint_probability(kPaper, {kK, xs[j], ts[i]});
    }
    const double t_independent = since(t0) * (10000.0 / sample);
    const double speedup = t_independent / t_surface;

    const bool ok = t_g < 15.0 && t_joint < 20.0 && t_surface < 200.0 && speedup >= 20.0;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "g(1) at r=R=60 %.3f s (<15), single joint %.3f s (<20), 100x100 surface %.2f s "
                  "(<200; build %.2f, eval %.2f), 10,000 independent ~%.1f s, speedup %.0fx (>=20)",
                  t_g, t_joint, t_surface, surf.build_seconds, surf.eval_seconds, t_independent, speedup);
    report("AC8", "performance", ok, buf, since(t_all));
  });
}

void ac9() {
  guarded("AC9", "sensitivity cross-check", [] {
    const auto t0 = Clock::now();
    const double x = 0.1, T = 1.0, h = 1e-4;
    auto P = [&](double xv, double Tv) { return joint_probability(kPaper, {kK, xv, Tv}).raw; };
    const double fd_x = (P(x + h, T) - P(x - h, T)) / (2 * h);
    const double fd_T = (P(x, T + h) - P(x, T - h)) / (2 * h);
    const double dx = sensitivity(kPaper, kK, x, T, 1, 0);
    const double dT = sensitivity(kPaper, kK, x, T, 0, 1);
    const double rx = std::abs(dx - fd_x) / std::abs(fd_x);
    const double rT = std::abs(dT - fd_T) / std::abs(fd_T);
    report("AC9", "sensitivity cross-check", rx < 1e-3 && rT < 1e-3,
           fmt("relative differences d/dx %.2e, d/dT %.2e (tol 1e-3)", rx, rT), since(t0));
  });
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5_ac6();
  ac7();
  ac8();
  ac9();
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
