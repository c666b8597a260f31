#pragma once

#include <memory>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

/// Calibrated on the pure Brownian put, see calibrate_bound_constant().
inline constexpr double kDefaultBoundConstant = 0.06;

/// Truncation and quadrature settings for the double contour integral
///   g_{r,R}(x) = (1/2pi) int_{-r}^{r} e^{(gamma+iu) x} F_R(gamma+iu) du,
///   F_R(l)     = int_{-R}^{R} k(l, z) h_hat(z) dz.
struct ContourParams {
  double gamma = 4.0;
  double r = 60.0;
  double R = 60.0;
  double quad_tol = 1e-13;  // absolute tolerance of each inner z-integral
  double floor_threshold = 1e-6;
  double bound_constant = kDefaultBoundConstant;
};

struct GPoint {
  double g = 0.0;
  double err_bound = 0.0;    // heuristic certificate, see error_bound()
  double im_residual = 0.0;  // estimate of |Im| of the untaken imaginary part
};

/// Values of g = W+ h on a grid of x > 0.
struct SymmetryImage {
  std::vector<double> x_grid;
  std::vector<double> g_values;
  std::vector<double> error_bounds;
  std::vector<double> im_residuals;
  std::vector<double> r_used;
  std::vector<double> R_used;
  ContourParams params;
  std::shared_ptr<const LevyTriplet> triplet;
  std::shared_ptr<const FourierPayoff> payoff;
};

/// Kernel psi'(l) / (psi(l) - psi(-zeta - iz)) - 1 / (l + zeta + iz), where
/// zeta is the payoff's preimage abscissa. Throws DenominatorUnderflow when
/// the denominator falls below floor_threshold.
Complex kernel(const LevyTriplet& triplet, double zeta, Complex lambda, double z,
               double floor_threshold = 1e-6);

/// kernel(...) * h_hat(z).
Complex integrand(const LevyTriplet& triplet, const FourierPayoff& payoff, Complex lambda,
                  double z, double floor_threshold = 1e-6);

/// F_R(lambda) by adaptive Gauss-Kronrod; R = +inf integrates the whole line.
Complex inner_integral(const LevyTriplet& triplet, const FourierPayoff& payoff, Complex lambda,
                       double R, double abs_tol = 1e-13, double floor_threshold = 1e-6);

/// C (e^{gamma x} / x) (|h_hat|_1 / r + tail_mass(min(r/2, R))).
double error_bound(const FourierPayoff& payoff, double x, double gamma, double r, double R,
                   double bound_constant);

/// Pointwise g_{r,R}(x). Requires an L1 preimage (RequiresL1) and x > 0;
/// OverflowGuard when gamma x > 700.
GPoint compute_g_point(const LevyTriplet& triplet, const FourierPayoff& payoff, double x,
                       const ContourParams& params = {});

/// g on a grid with fixed (r, R) taken from params. Inner integrals are
/// computed once per u-node and shared by every x.
SymmetryImage compute_g_curve(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              const std::vector<double>& x_grid, const ContourParams& params);

/// g on a grid with (r, R) = (r, r) chosen per point: r doubles from 20 until
/// error_bound() <= target_err, up to r_cap (TruncationCapExceeded beyond).
/// gamma, quad_tol, floor_threshold and bound_constant come from base.
SymmetryImage compute_g_curve(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              const std::vector<double>& x_grid, double target_err,
                              const ContourParams& base = {}, double r_cap = 1e4);

struct HedgePoint {
  double x = 0.0;
  double value = 0.0;      // h(x) for x < 0, -g(x) for x > 0, h(0-) at 0
  double err_bound = 0.0;  // 0 below the barrier
};

/// European payoff h - g replicating the up-and-out option with payoff h.
std::vector<HedgePoint> static_hedge_payoff(const LevyTriplet& triplet,
                                            const FourierPayoff& payoff,
                                            const std::vector<double>& x_grid,
                                            double target_err,
                                            const ContourParams& base = {});

struct LaplaceResidual {
  double w = 0.0;
  double lhs = 0.0;  // int_0^inf e^{-wx} g(x) dx from the image grid
  double rhs = 0.0;  // F(w) by direct quadrature in z
  double residual = 0.0;
  double relative = 0.0;  // residual / (1 + |rhs|)
  double tail = 0.0;      // bound on the part of the lhs beyond the grid
};

/// Checks int_0^inf e^{-wx} g(x) dx = F(w) for each w >= gamma + 0.5.
/// Uses composite Simpson on uniform grids (trapezoid otherwise), a linear
/// extrapolation of g to 0 below the first node, and a tail bound
/// e^{-w x_n} |g(x_n)| / (w - gamma). InsufficientGrid when that bound
/// exceeds tail_tol * |lhs|, or when w is too close to gamma.
std::vector<LaplaceResidual> verify_laplace_identity(const SymmetryImage& image,
                                                     const std::vector<double>& w_list,
                                                     double tail_tol = 1e-6);

/// 2 * max |g - h(-x)| / raw_bound over x in x_grid and r in r_list, for a
/// pure Brownian triplet where g(x) = h(-x) exactly.
double calibrate_bound_constant(const FourierPayoff& payoff, double sigma,
                                const std::vector<double>& x_grid,
                                const std::vector<double>& r_list, double gamma = 4.0);

}  // namespace wrp
