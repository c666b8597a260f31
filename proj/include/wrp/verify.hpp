#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/mc.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string to_json() const;
};

enum class Suite { Quick, Full };

struct VerifyOptions {
  Suite suite = Suite::Quick;
  std::uint64_t seed = 42;
  /// Subset of check names to run; empty runs all.
  std::vector<std::string> only;
};

/// Model and payoffs shared by the checks: sigma = alpha = beta = 1,
/// zeta = 0.9, strike -0.2.
LevyTriplet reference_model();

/// max_x |g(x) - h(-x)| for pure Brownian motion and the put, x = 0.1..2.0.
CheckResult check_pure_bm_reflection(double r);

/// Max relative residual of int e^{-wx} g = F(w), w in {4.5, 5, 6}.
CheckResult check_laplace_identity(double r);

/// Max of |<g, p_t> - E h(X_t)| / (1 + |E h(X_t)|) over put and indicator.
CheckResult check_pairing_identity(const std::vector<double>& t_list);

/// |P(X_T <= K, sup X >= 0) - P(X_T <= K)| at T = 1.
CheckResult check_x0_collapse();

/// Slope of log |g_r(1) - g_ref(1)| against log r.
CheckResult check_convergence_slope(const std::vector<double>& r_list, double r_ref);

/// Monte Carlo comparisons. Value is |difference|; the tolerance is
/// 3 * SE + |estimate(fine) - estimate(coarse)|, the second run using
/// n_steps / 10 steps on the same seed.
struct McBatches {
  PathBatch fine;
  PathBatch coarse;
};
McBatches simulate_reference(std::size_t n_paths, std::size_t n_steps, std::uint64_t seed);

CheckResult check_mc_joint(const McBatches& batches);

/// Barrier price E (K - S_T)^+ 1{sup S < 0} against E (h - g)(S_T), S = -0.1 + X,
/// on common paths.
CheckResult check_mc_hedge(const McBatches& batches);

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace wrp
