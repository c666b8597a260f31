#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

struct SimConfig {
  std::size_t n_paths = 1000;
  std::size_t n_steps = 100;
  double T = 1.0;
  std::uint64_t seed = 42;
  bool bridge_correction = true;
};

/// Terminal values and running maxima of X on [0, T] (X_0 = 0 included).
/// Without the bridge the maxima are taken at grid nodes and are biased low.
struct PathBatch {
  std::vector<double> terminal;
  std::vector<double> running_max;
  std::size_t n_steps = 0;
  double T = 0.0;
  bool bridge_correction = false;
  double seconds = 0.0;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// xoshiro256++ seeded through SplitMix64. One stream per path.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;
  explicit Xoshiro256pp(std::uint64_t seed);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  /// Uniform on (0, 1).
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Seed of the stream for one path; independent of thread count.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index);

/// Exact Normal + Gamma increments on a uniform grid. With bridge_correction
/// the maximum of the diffusive part inside each step is drawn from the
/// Brownian-bridge law; jumps are placed at step ends.
/// UnsupportedJumpKind for tabulated measures.
PathBatch simulate(const LevyTriplet& triplet, const SimConfig& config);

/// Frequency of {X_T <= K + x, max >= x} with binomial standard error.
Estimate estimate_joint(const PathBatch& batch, double K, double x);

/// E h(x0 + X_T) 1{x0 + max < 0}: the up-and-out option with barrier at 0
/// for S = x0 + X.
Estimate estimate_barrier_price(const PathBatch& batch, const FourierPayoff& h, double x0);

/// E f(x0 + X_T) with f linear between grid nodes. GridExtrapolation if a
/// terminal value falls outside the grid.
Estimate estimate_european(const PathBatch& batch, const std::vector<double>& x_grid,
                           const std::vector<double>& f_values, double x0);

/// E f(x0 + X_T) for an arbitrary function.
Estimate estimate_european(const PathBatch& batch, const std::function<double(double)>& f,
                           double x0);

/// Columnar binary file: "WRPB", u32 version, u64 n_paths, then n_paths
/// doubles of terminal values and n_paths doubles of maxima (little endian).
void write_batch(const PathBatch& batch, const std::string& path);
PathBatch read_batch(const std::string& path);

}  // namespace wrp
