#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

struct DensityOptions {
  double cutoff = 1e-16;  // U with |exp(t psi(-iU))| < cutoff
  double clip_tolerance = 1e-8;
};

/// p_t(x) = (1/pi) int_0^U Re(e^{iux} exp(t psi(-iu))) du on a grid.
struct DensitySlice {
  double t = 0.0;
  std::vector<double> x_grid;
  std::vector<double> p_values;      // clipped at 0
  double normalization_defect = 0.0;  // |1 - int p| over the grid
  double min_raw = 0.0;               // most negative pre-clip value (0 if none)
  double u_cutoff = 0.0;
  double u_panel_width = 0.0;
};

/// Throws InsufficientGrid if a pre-clip value is below -clip_tolerance.
DensitySlice density(const LevyTriplet& triplet, double t, const std::vector<double>& x_grid,
                     const DensityOptions& opts = {});

/// E h(X_t) = int h p_t. The lower limit L is where
/// sup_{x<L} |h(x)| e^{theta x} exp(t psi(-theta)) <= tail_tol, theta being the
/// process's zeta (any theta > 0 works without jumps; 1 is used).
/// TailUnbounded when no such L exists (theta = 0 with unbounded h).
double expectation(const LevyTriplet& triplet, const FourierPayoff& payoff, double t,
                   double tail_tol = 1e-12);

/// Piecewise-linear function on a grid, zero outside it.
struct GridFunction {
  std::vector<double> x;
  std::vector<double> f;
  double operator()(double v) const;
};

/// E f(X_t) over the grid span. TailUnbounded if the Chernoff bounds on the
/// mass outside the grid, times |f| at the ends, exceed tail_tol.
double expectation(const LevyTriplet& triplet, const GridFunction& f, double t,
                   double tail_tol = 1e-8);

/// E f(X_t) for f integrated on [lo, hi] with panel breakpoints; f is taken
/// as zero outside. Same tail check as the grid version.
double expectation(const LevyTriplet& triplet, const std::function<double(double)>& f, double t,
                   double lo, double hi, const std::vector<double>& breakpoints,
                   double tail_tol = 1e-8);

struct CacheParams {
  double gamma = 4.0;
  double R = 1e5;     // inner truncation of the fixed z-rule
  double step = 0.6;  // default Bromwich step; reduced when aliasing demands
  double T_min = 1.0;
  double T_max = 1.0;
  double x_max = 0.0;
  double cutoff = 1e-16;      // |exp(T psi(gamma + iu))| below this ends the sum
  double alias_log = 30.0;    // aliasing terms kept below e^{-alias_log}
  double floor_threshold = 1e-6;
};

/// F(gamma + iu_j) on the uniform Bromwich nodes u_j = j * step, j >= 0,
/// for one (triplet, payoff) pair. Valid for queries with T in [T_min, T_max]
/// and 0 <= x <= x_max.
struct InnerIntegralCache {
  std::vector<double> u;
  std::vector<double> weights;  // step, halved at u = 0
  std::vector<Complex> psi_values;  // psi(gamma + iu_j)
  std::vector<Complex> F_values;
  double gamma = 0.0;
  double zeta = 0.0;
  double R = 0.0;
  double step = 0.0;
  double T_min = 0.0;
  double T_max = 0.0;
  double x_max = 0.0;
  std::string fingerprint;
  std::uint64_t fingerprint_hash = 0;
  double build_seconds = 0.0;
};

std::string cache_fingerprint(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              double gamma, double R);

/// Largest step <= requested whose aliasing image e^{gamma s - (s+x)^2/(2a)}
/// (s = 2pi/step, a = sigma^2 T) stays below e^{-alias_log} for all queries.
double bromwich_step(double sigma, const CacheParams& params);

InnerIntegralCache build_cache(const LevyTriplet& triplet, const FourierPayoff& payoff,
                               const CacheParams& params);

struct JointLawQuery {
  double K = -0.2;
  double x = 0.0;
  double T = 1.0;
};

struct JointValue {
  double prob = 0.0;       // clipped to [0, 1]
  double raw = 0.0;        // before clipping
  double excursion = 0.0;  // distance clipped away
};

/// P(X_T <= K + x, sup_{[0,T]} X >= x) = E g(X_T - x), g = W+ 1{. <= K},
///   = (1/pi) Re sum_j w_j exp(-l_j x + T psi(l_j)) F(l_j),  l_j = gamma + iu_j.
/// CacheMismatch unless the cache was built for (triplet, indicator(K)) and
/// the query lies inside its (x, T) range.
JointValue joint_probability(const LevyTriplet& triplet, const FourierPayoff& indicator,
                             const JointLawQuery& q, const InnerIntegralCache& cache);

/// Builds a one-off cache for the query (the "independent evaluation" path).
JointValue joint_probability(const LevyTriplet& triplet, const JointLawQuery& q,
                             const CacheParams& base = {});

struct JointSurface {
  double K = 0.0;
  std::vector<double> x_grid;
  std::vector<double> T_grid;
  std::vector<double> prob;  // prob[iT * x_grid.size() + ix]
  double build_seconds = 0.0;
  double eval_seconds = 0.0;
};

JointSurface joint_surface(const LevyTriplet& triplet, double K, const std::vector<double>& x_grid,
                           const std::vector<double>& T_grid, const CacheParams& base = {});

/// d^{order_x}/dx^{order_x} d^{order_T}/dT^{order_T} of the joint probability,
/// from the factors (-l)^{order_x} psi(l)^{order_T} inside the sum.
double sensitivity(const LevyTriplet& triplet, double K, double x, double T, int order_x,
                   int order_T, const CacheParams& base = {});

struct PairingResult {
  double pairing = 0.0;      // <g, p_t> through the cached Bromwich sum
  double expectation = 0.0;  // int h p_t through density inversion
  double difference = 0.0;
};

PairingResult pair_g_with_density(const LevyTriplet& triplet, const FourierPayoff& payoff,
                                  double t, const CacheParams& base = {});

}  // namespace wrp
