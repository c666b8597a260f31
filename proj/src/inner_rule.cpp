#include "wrp/inner_rule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "wrp/errors.hpp"
#include "wrp/quadrature.hpp"

namespace wrp {

namespace {

inline Complex reciprocal(Complex c) {
  const double n = c.real() * c.real() + c.imag() * c.imag();
  return {c.real() / n, -c.imag() / n};
}

// Edges of [a, b] (0 <= a < b) with widths growing like 0.25 + |z| / 8, and
// at most half the distance to the nearest singularity at +-i d.
std::vector<double> graded_edges(double a, double b, double max_width, double d) {
  std::vector<double> e{a};
  double z = a;
  while (z < b) {
    const double w = std::min({max_width, 0.25 + z / 8.0, 0.5 * std::hypot(z, d)});
    z = (b - z <= 1.05 * w) ? b : z + w;
    e.push_back(z);
  }
  return e;
}

}  // namespace

LevyTriplet kernel_triplet(const LevyTriplet& triplet, double zeta) {
  LevyTriplet eff(triplet.mu(), triplet.sigma(), triplet.jumps(), zeta);
  if (!validate_admissibility(eff).passed()) {
    throw Error(ErrorCode::AdmissibilityViolation,
                "payoff zeta = " + std::to_string(zeta) + " is not admissible for this process");
  }
  return eff;
}

InnerRule::InnerRule(const LevyTriplet& triplet, const FourierPayoff& payoff,
                     std::vector<double> R_levels, double floor_threshold, double max_width,
                     int order)
    : triplet_(&triplet), zeta_(payoff.zeta()), floor_sq_(floor_threshold * floor_threshold) {
  if (R_levels.empty()) throw Error(ErrorCode::InvalidArgument, "InnerRule needs >= 1 level");
  std::sort(R_levels.begin(), R_levels.end());
  R_levels.erase(std::unique(R_levels.begin(), R_levels.end()), R_levels.end());
  if (!(R_levels.front() > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be > 0");
  levels_ = std::move(R_levels);

  double span = 0.0;
  for (double k : payoff.kinks()) span = std::max(span, std::abs(k));
  if (span > 0.0) max_width = std::min(max_width, std::numbers::pi / span);

  // Singularities off the real z-axis: the pole of h_hat at z = i zeta and the
  // branch point of psi(-zeta - iz) at z = -i (alpha - zeta) for Gamma jumps.
  double d = zeta_;
  if (const auto* g = std::get_if<GammaJumps>(&triplet.jumps())) d = std::min(d, g->alpha - zeta_);
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "payoff zeta must be > 0");

  const auto& rule = quad::gauss_legendre(order);
  double prev = 0.0;
  for (double R : levels_) {
    const auto edges = graded_edges(prev, R, max_width, d);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double c = 0.5 * (edges[i] + edges[i + 1]);
      const double h = 0.5 * (edges[i + 1] - edges[i]);
      for (int k = 0; k < order; ++k) {
        const double z = c + h * rule.nodes[k];
        const double w = h * rule.weights[k];
        for (double s : {z, -z}) {
          z_.push_back(s);
          hw_.push_back(payoff.h_hat(s) * w);
          psi_z_.push_back(triplet.psi_unchecked(Complex(-zeta_, -s)));
        }
      }
    }
    level_end_.push_back(z_.size());
    prev = R;
  }
}

void InnerRule::evaluate(Complex lambda, Complex* out) const {
  const Complex psi_l = triplet_->psi_unchecked(lambda);
  const Complex dpsi_l = triplet_->psi_prime_unchecked(lambda);
  const Complex shift = lambda + zeta_;
  double re = 0.0;
  double im = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    for (; j < level_end_[k]; ++j) {
      const Complex den = psi_l - psi_z_[j];
      const double n = den.real() * den.real() + den.imag() * den.imag();
      if (n < floor_sq_) {
        throw Error(ErrorCode::DenominatorUnderflow,
                    "|psi(lambda) - psi(-zeta - iz)| below floor at Im(lambda) = " +
                        std::to_string(lambda.imag()) + ", z = " + std::to_string(z_[j]) +
                        "; increase gamma");
      }
      const Complex kern = dpsi_l * Complex(den.real() / n, -den.imag() / n) -
                           reciprocal(Complex(shift.real(), shift.imag() + z_[j]));
      const Complex t = kern * hw_[j];
      re += t.real();
      im += t.imag();
    }
    out[k] = Complex(re, im);
  }
}

Complex InnerRule::evaluate(Complex lambda) const {
  std::vector<Complex> out(levels_.size());
  evaluate(lambda, out.data());
  return out.back();
}

}  // namespace wrp
