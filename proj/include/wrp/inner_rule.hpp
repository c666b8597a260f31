#pragma once

#include <cstddef>
#include <vector>

#include "wrp/levy.hpp"
#include "wrp/payoff.hpp"

namespace wrp {

/// The kernel evaluates psi at -zeta - iz with the payoff's zeta, so the
/// triplet is re-declared with that abscissa. AdmissibilityViolation if the
/// process has no exponential moment of that order.
LevyTriplet kernel_triplet(const LevyTriplet& triplet, double zeta);

/// Fixed composite Gauss-Legendre rule for
///   F_R(l) = int_{-R}^{R} k(l, z) h_hat(z) dz
/// shared by every l. h_hat(z_j) w_j and psi(-zeta - i z_j) are tabulated once,
/// so each F(l) costs two reciprocals per node, and F computed this way is an
/// analytic function of l (no l-dependent panel choice).
///
/// Panels grow from 0.25 near z = 0 to max_width, capped so that the
/// oscillation e^{i z x_k} of h_hat stays resolved for every kink x_k of h.
/// Nodes are grouped by level: cumulative sums up to level k integrate over
/// [-R_k, R_k]. The triplet must outlive the rule.
class InnerRule {
 public:
  InnerRule(const LevyTriplet& triplet, const FourierPayoff& payoff, std::vector<double> R_levels,
            double floor_threshold = 1e-6, double max_width = 4.0, int order = 8);

  /// out[k] = F_{R_k}(lambda) for every level k.
  void evaluate(Complex lambda, Complex* out) const;

  /// F at the outermost level.
  Complex evaluate(Complex lambda) const;

  const std::vector<double>& levels() const { return levels_; }
  std::size_t nodes() const { return z_.size(); }

 private:
  const LevyTriplet* triplet_;
  double zeta_;
  double floor_sq_;
  std::vector<double> levels_;
  std::vector<std::size_t> level_end_;
  std::vector<double> z_;
  std::vector<Complex> hw_;     // h_hat(z_j) * w_j
  std::vector<Complex> psi_z_;  // psi(-zeta - i z_j)
};

}  // namespace wrp
