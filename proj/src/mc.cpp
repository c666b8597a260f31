#include "wrp/mc.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "wrp/errors.hpp"
#include "wrp/parallel.hpp"

namespace wrp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gamma(a) = Gamma(1 + a) U^{1/a}. For small a the factor U^{1/a} is almost
// always below e^{-46}; those draws are returned as 0 without the second
// variate.
constexpr double kFlushLog = -46.0;

// Bridge maxima are not drawn when P(bridge max > current max) < e^{-40}.
constexpr double kBridgeSkipLog = -40.0;

constexpr char kMagic[4] = {'W', 'R', 'P', 'B'};
constexpr std::uint32_t kBatchVersion = 1;

void check_batch(const PathBatch& batch) {
  if (batch.terminal.empty()) throw Error(ErrorCode::InvalidArgument, "empty path batch");
}

Estimate mean_se(double sum, double sum_sq, std::size_t n) {
  const double m = sum / static_cast<double>(n);
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * m * m) / static_cast<double>(n - 1)) : 0.0;
  return {m, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

Xoshiro256pp::result_type Xoshiro256pp::operator()() {
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (path_index * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

PathBatch simulate(const LevyTriplet& triplet, const SimConfig& config) {
  if (std::holds_alternative<TabulatedJumps>(triplet.jumps())) {
    throw Error(ErrorCode::UnsupportedJumpKind,
                "Monte Carlo supports Brownian motion with Gamma jumps only");
  }
  if (config.n_paths < 1000) throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1000");
  if (config.n_steps < 100) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 100");
  if (!(config.T > 0.0) || !std::isfinite(config.T)) {
    throw Error(ErrorCode::InvalidArgument, "T must be positive");
  }

  const auto start = std::chrono::steady_clock::now();
  const double dt = config.T / static_cast<double>(config.n_steps);
  const double sigma = triplet.sigma();
  const double s2 = sigma * sigma * dt;
  const double sd = std::sqrt(s2);

  double drift = triplet.mu();
  double alpha = 0.0;
  double shape = 0.0;
  if (const auto* g = std::get_if<GammaJumps>(&triplet.jumps())) {
    drift += g->beta / g->alpha;
    alpha = g->alpha;
    shape = g->beta * dt;
  }
  const double mean_inc = drift * dt;
  const double flush_u = std::exp(kFlushLog * shape);
  const bool bridge = config.bridge_correction && sigma > 0.0;

  PathBatch out;
  out.terminal.resize(config.n_paths);
  out.running_max.resize(config.n_paths);
  out.n_steps = config.n_steps;
  out.T = config.T;
  out.bridge_correction = config.bridge_correction;

  parallel_for(config.n_paths, [&](std::size_t begin, std::size_t end) {
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    boost::random::gamma_distribution<double> gamma1(1.0 + shape, 1.0);
    for (std::size_t p = begin; p < end; ++p) {
      Xoshiro256pp rng(path_seed(config.seed, p));
      double x = 0.0;
      double m = 0.0;
      for (std::size_t k = 0; k < config.n_steps; ++k) {
        const double y = x + mean_inc + sd * normal(rng);
        if (bridge) {
          // P(bridge max from x to y exceeds m) = exp(-2 (m - x)(m - y) / s2).
          const double e = -2.0 * (m - x) * (m - y) / s2;
          if (e > kBridgeSkipLog) {
            const double d = y - x;
            const double top = 0.5 * (x + y + std::sqrt(d * d - 2.0 * s2 * std::log(rng.uniform())));
            m = std::max(m, top);
          }
        }
        m = std::max(m, y);
        double jump = 0.0;
        if (shape > 0.0) {
          const double u = rng.uniform();
          if (u > flush_u) jump = gamma1(rng) * std::pow(u, 1.0 / shape) / alpha;
        }
        x = y - jump;
      }
      out.terminal[p] = x;
      out.running_max[p] = m;
    }
  });
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Estimate estimate_joint(const PathBatch& batch, double K, double x) {
  check_batch(batch);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < batch.terminal.size(); ++i) {
    if (batch.terminal[i] <= K + x && batch.running_max[i] >= x) ++hits;
  }
  const double n = static_cast<double>(batch.terminal.size());
  const double p = hits / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

Estimate estimate_barrier_price(const PathBatch& batch, const FourierPayoff& h, double x0) {
  check_batch(batch);
  if (x0 > 0.0) throw Error(ErrorCode::InvalidArgument, "start level x0 must be <= 0");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < batch.terminal.size(); ++i) {
    if (x0 + batch.running_max[i] >= 0.0) continue;
    const double v = h.h(x0 + batch.terminal[i]);
    sum += v;
    sum_sq += v * v;
  }
  return mean_se(sum, sum_sq, batch.terminal.size());
}

Estimate estimate_european(const PathBatch& batch, const std::vector<double>& x_grid,
                           const std::vector<double>& f_values, double x0) {
  check_batch(batch);
  if (x_grid.size() < 2 || x_grid.size() != f_values.size()) {
    throw Error(ErrorCode::InvalidArgument, "grid and values must have equal size >= 2");
  }
  if (!std::is_sorted(x_grid.begin(), x_grid.end())) {
    throw Error(ErrorCode::InvalidArgument, "grid must be increasing");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double t : batch.terminal) {
    const double s = x0 + t;
    if (s < x_grid.front() || s > x_grid.back()) {
      throw Error(ErrorCode::GridExtrapolation,
                  "terminal value " + std::to_string(s) + " outside the grid [" +
                      std::to_string(x_grid.front()) + ", " + std::to_string(x_grid.back()) + "]");
    }
    auto it = std::upper_bound(x_grid.begin(), x_grid.end(), s);
    std::size_t j = std::min<std::size_t>(it - x_grid.begin(), x_grid.size() - 1);
    const double x1 = x_grid[j - 1], x2 = x_grid[j];
    const double w = x2 > x1 ? (s - x1) / (x2 - x1) : 0.0;
    const double v = f_values[j - 1] + w * (f_values[j] - f_values[j - 1]);
    sum += v;
    sum_sq += v * v;
  }
  return mean_se(sum, sum_sq, batch.terminal.size());
}

Estimate estimate_european(const PathBatch& batch, const std::function<double(double)>& f,
                           double x0) {
  check_batch(batch);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double t : batch.terminal) {
    const double v = f(x0 + t);
    sum += v;
    sum_sq += v * v;
  }
  return mean_se(sum, sum_sq, batch.terminal.size());
}

void write_batch(const PathBatch& batch, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "batch files are little endian");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  const std::uint64_t n = batch.terminal.size();
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&kBatchVersion), sizeof kBatchVersion);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(batch.terminal.data()), n * sizeof(double));
  os.write(reinterpret_cast<const char*>(batch.running_max.data()), n * sizeof(double));
  if (!os) throw Error(ErrorCode::IoError, "write failed: " + path);
}

PathBatch read_batch(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::IoError, path + " is not a path batch file");
  }
  if (version != kBatchVersion) {
    throw Error(ErrorCode::IoError, "unsupported batch version " + std::to_string(version));
  }
  if (n > (std::numeric_limits<std::uint64_t>::max() / 16)) {
    throw Error(ErrorCode::IoError, "corrupt batch header");
  }
  PathBatch b;
  b.terminal.resize(n);
  b.running_max.resize(n);
  is.read(reinterpret_cast<char*>(b.terminal.data()), n * sizeof(double));
  is.read(reinterpret_cast<char*>(b.running_max.data()), n * sizeof(double));
  if (!is) throw Error(ErrorCode::IoError, "truncated batch file " + path);
  return b;
}

}  // namespace wrp
