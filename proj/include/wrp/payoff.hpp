#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wrp/levy.hpp"

namespace wrp {

enum class Integrability { L1, L2Only };

struct PutPayoff {
  double K = -0.2;  // h(x) = (K - x)^+
};

struct IndicatorPayoff {
  double K = -0.2;  // h(x) = 1{x <= K}
};

/// Piecewise-linear payoff through (x_i, h_i), zero outside the grid.
struct CustomPayoff {
  std::vector<double> x;
  std::vector<double> h;
};

using PayoffKind = std::variant<PutPayoff, IndicatorPayoff, CustomPayoff>;

/// A payoff h supported on (-inf, 0) with Fourier preimage h_hat, so that
///   e^{zeta x} h(x) = int e^{-i x z} h_hat(z) dz,
/// i.e. h_hat(z) = (1 / 2pi) int e^{(zeta + iz) x} h(x) dx.
/// Immutable; every accessor is a pure function.
class FourierPayoff {
 public:
  double h(double x) const;
  Complex h_hat(double z) const;

  /// int_{|z| > r} |h_hat(z)| dz; +inf for L2-only payoffs.
  double tail_mass(double r) const;
  double l1_norm() const { return l1_norm_; }
  double l2_norm() const { return l2_norm_; }
  Integrability integrability() const { return integrability_; }
  double zeta() const { return zeta_; }
  const PayoffKind& kind() const { return kind_; }

  /// Points where h is not smooth; quadrature panels should break there.
  std::vector<double> kinks() const;

  /// Fitted log-log slope of |h_hat| on [1e2, 1e4] (envelope of local maxima).
  double tail_exponent() const { return tail_exponent_; }

  std::string fingerprint() const;

 private:
  friend FourierPayoff make_put(double K, double zeta);
  friend FourierPayoff make_indicator(double K, double zeta);
  friend FourierPayoff make_custom(std::vector<double> x, std::vector<double> h, double zeta);

  FourierPayoff() = default;

  PayoffKind kind_;
  double zeta_ = 0.0;
  Integrability integrability_ = Integrability::L1;
  double l1_norm_ = 0.0;
  double l2_norm_ = 0.0;
  double tail_exponent_ = 0.0;

  // Custom payoffs: h_hat(z) = (1/2pi) [ sum_k c_k e^{w x_k} / w
  //                                      + sum_k d_k e^{w x_k} / w^2 ], w = zeta + iz.
  std::vector<double> atoms_x_;
  std::vector<double> atoms_c_;  // boundary values (jumps of h)
  std::vector<double> atoms_d_;  // slope changes
  // Tail table for custom L1 payoffs: cumulative int_0^{z_j} |h_hat| and a
  // fitted power-law envelope beyond the table.
  std::vector<double> table_z_;
  std::vector<double> table_cum_;
  double envelope_scale_ = 0.0;  // |h_hat(z)| <= scale * z^exponent beyond the table
};

/// Put (K - x)^+ with h_hat(z) = e^{K(zeta+iz)} / (2pi (zeta+iz)^2). Needs K < 0, zeta > 0.
FourierPayoff make_put(double K, double zeta);

/// Indicator 1{x <= K} with h_hat(z) = e^{K(zeta+iz)} / (2pi (zeta+iz)); L2 only.
FourierPayoff make_indicator(double K, double zeta);

/// Piecewise-linear payoff on a grid. The preimage is integrated exactly per
/// segment. Throws NonIntegrable if h is nonzero on [0, inf) or if
/// e^{zeta x} h(x) has not decayed at the left end of the grid.
FourierPayoff make_custom(std::vector<double> x, std::vector<double> h, double zeta);

}  // namespace wrp
