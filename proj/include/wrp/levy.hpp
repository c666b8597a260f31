#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wrp {

using Complex = std::complex<double>;

/// Brownian motion with drift; no jump component.
struct NoJumps {};

/// Negative Gamma process: Levy density beta * exp(-alpha |x|) / |x| on (-inf, 0).
struct GammaJumps {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Levy density given on a grid of strictly increasing negative abscissae and
/// interpolated linearly between nodes. The measure is zero outside the grid.
struct TabulatedJumps {
  std::vector<double> x;
  std::vector<double> density;
};

using JumpMeasure = std::variant<NoJumps, GammaJumps, TabulatedJumps>;

/// Spectrally negative Levy process X with X_0 = 0, described by its triplet
/// (mu, sigma, Pi) and an exponential-moment abscissa zeta >= 0 such that
/// E exp(-zeta X_t) is finite. Immutable after construction.
///
/// The Laplace exponent is
///   psi(l) = mu l + sigma^2 l^2 / 2 + int (e^{l x} - 1 - l x) Pi(dx).
/// For GammaJumps the integral has the closed form
///   -beta log(1 + l / alpha) + l beta / alpha,
/// evaluated on the principal branch. Admissible arguments satisfy
/// Re(l) >= -zeta > -alpha, which keeps 1 + l / alpha off the cut.
///
/// For TabulatedJumps the integral is computed by composite Gauss-Legendre on
/// the declared grid. Near x = 0 the integrand e^{l x} - 1 - l x is O(x^2),
/// which absorbs the 1/|x| growth of densities such as the Gamma one, so no
/// endpoint treatment is needed.
class LevyTriplet {
 public:
  /// zeta defaults to 0.9 * alpha for Gamma jumps and to 0 otherwise.
  LevyTriplet(double mu, double sigma, JumpMeasure jumps,
              std::optional<double> zeta = std::nullopt);

  static LevyTriplet brownian(double sigma, double mu = 0.0, double zeta = 0.0);

  /// X_t = sigma B_t - Gamma_t; the drift mu = -beta / alpha cancels the
  /// compensator so that psi(l) = sigma^2 l^2 / 2 - beta log(1 + l / alpha).
  static LevyTriplet bm_gamma(double sigma, double alpha, double beta,
                              std::optional<double> zeta = std::nullopt);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double zeta() const noexcept { return zeta_; }
  const JumpMeasure& jumps() const noexcept { return jumps_; }

  bool has_jumps() const noexcept { return !std::holds_alternative<NoJumps>(jumps_); }

  /// Stable textual identity used in cache fingerprints.
  std::string fingerprint() const;

  // Unchecked evaluation; callers inside hot loops validate the domain once.
  Complex psi_unchecked(Complex lambda) const;
  Complex psi_prime_unchecked(Complex lambda) const;
  Complex psi_second_unchecked(Complex lambda) const;

 private:
  double mu_;
  double sigma_;
  double zeta_;
  JumpMeasure jumps_;
  // Quadrature nodes x_k and weights w_k * pi(x_k) for tabulated measures.
  std::vector<double> tab_nodes_;
  std::vector<double> tab_weights_;
};

/// Throws AdmissibilityViolation if Re(lambda) < -zeta and BranchCutViolation
/// if lambda sits on the logarithm's cut (-inf, -alpha].
void check_domain(const LevyTriplet& triplet, Complex lambda);

Complex psi(const LevyTriplet& triplet, Complex lambda);
Complex psi_prime(const LevyTriplet& triplet, Complex lambda);
Complex psi_second(const LevyTriplet& triplet, Complex lambda);

struct AdmissibilityCheck {
  std::string name;
  double value = 0.0;  // computed integral or parameter; +inf when divergent
  bool passed = false;
  std::string note;  // "closed form", "quadrature", ...
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  bool passed() const;
};

AdmissibilityReport validate_admissibility(const LevyTriplet& triplet);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Minimum of |psi(gamma + iu) - psi(-zeta - iz)| over a uniform samples x
/// samples grid on u_range x z_range. A sampled diagnostic, not a proof that
/// the kernel denominator never vanishes.
double denominator_floor(const LevyTriplet& triplet, double gamma, Range u_range,
                         Range z_range, int samples = 401);

}  // namespace wrp
