#include "wrp/levy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "wrp/errors.hpp"
#include "wrp/quadrature.hpp"

namespace wrp {

namespace {

constexpr int kTabulatedOrder = 8;

// e^z - 1 - z without cancellation for small |z|.
Complex exp_m1_m_lin(Complex z) {
  if (std::abs(z) < 0.05) {
    Complex term = z * z / 2.0;
    Complex sum = term;
    for (int k = 3; k < 12; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return std::exp(z) - 1.0 - z;
}

// e^z - 1 without cancellation for small |z|.
Complex exp_m1(Complex z) {
  if (std::abs(z) < 0.05) {
    Complex term = z;
    Complex sum = term;
    for (int k = 2; k < 12; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return std::exp(z) - 1.0;
}

void validate_tabulated(const TabulatedJumps& t) {
  if (t.x.size() < 2 || t.x.size() != t.density.size()) {
    throw Error(ErrorCode::InvalidArgument, "tabulated jump density needs >= 2 matching nodes");
  }
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (!(t.x[i] < 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "tabulated jump density must be supported on (-inf, 0)");
    }
    if (!(t.density[i] >= 0.0) || !std::isfinite(t.density[i])) {
      throw Error(ErrorCode::InvalidArgument, "tabulated jump density must be finite and >= 0");
    }
    if (i > 0 && !(t.x[i] > t.x[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "tabulated jump grid must be strictly increasing");
    }
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

LevyTriplet::LevyTriplet(double mu, double sigma, JumpMeasure jumps, std::optional<double> zeta)
    : mu_(mu), sigma_(sigma), zeta_(0.0), jumps_(std::move(jumps)) {
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  }
  if (const auto* g = std::get_if<GammaJumps>(&jumps_)) {
    if (!(g->alpha > 0.0) || !(g->beta > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "Gamma jumps need alpha > 0 and beta > 0");
    }
    zeta_ = zeta.value_or(0.9 * g->alpha);
  } else if (const auto* t = std::get_if<TabulatedJumps>(&jumps_)) {
    validate_tabulated(*t);
    std::vector<double> xs;
    std::vector<double> ws;
    quad::append_composite(t->x, kTabulatedOrder, xs, ws);
    tab_nodes_.reserve(xs.size());
    tab_weights_.reserve(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const std::size_t panel = k / kTabulatedOrder;
      const double x0 = t->x[panel];
      const double x1 = t->x[panel + 1];
      const double s = (xs[k] - x0) / (x1 - x0);
      const double dens = (1.0 - s) * t->density[panel] + s * t->density[panel + 1];
      tab_nodes_.push_back(xs[k]);
      tab_weights_.push_back(ws[k] * dens);
    }
    zeta_ = zeta.value_or(0.0);
  } else {
    zeta_ = zeta.value_or(0.0);
  }
  if (!(zeta_ >= 0.0) || !std::isfinite(zeta_)) {
    throw Error(ErrorCode::InvalidArgument, "zeta must be finite and >= 0");
  }
}

LevyTriplet LevyTriplet::brownian(double sigma, double mu, double zeta) {
  return LevyTriplet(mu, sigma, NoJumps{}, zeta);
}

LevyTriplet LevyTriplet::bm_gamma(double sigma, double alpha, double beta,
                                  std::optional<double> zeta) {
  return LevyTriplet(-beta / alpha, sigma, GammaJumps{alpha, beta}, zeta);
}

std::string LevyTriplet::fingerprint() const {
  std::ostringstream os;
  os << "mu=" << fmt(mu_) << ";sigma=" << fmt(sigma_) << ";zeta=" << fmt(zeta_) << ";";
  std::visit(
      [&](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          os << "none";
        } else if constexpr (std::is_same_v<J, GammaJumps>) {
          os << "gamma:" << fmt(j.alpha) << "," << fmt(j.beta);
        } else {
          os << "tabulated:" << j.x.size();
          for (std::size_t i = 0; i < j.x.size(); ++i) os << "," << fmt(j.x[i]) << "," << fmt(j.density[i]);
        }
      },
      jumps_);
  return os.str();
}

Complex LevyTriplet::psi_unchecked(Complex l) const {
  Complex out = mu_ * l + 0.5 * sigma_ * sigma_ * l * l;
  if (const auto* g = std::get_if<GammaJumps>(&jumps_)) {
    out += -g->beta * std::log(1.0 + l / g->alpha) + l * (g->beta / g->alpha);
  } else if (!tab_nodes_.empty()) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < tab_nodes_.size(); ++k) {
      acc += tab_weights_[k] * exp_m1_m_lin(l * tab_nodes_[k]);
    }
    out += acc;
  }
  return out;
}

Complex LevyTriplet::psi_prime_unchecked(Complex l) const {
  Complex out = mu_ + sigma_ * sigma_ * l;
  if (const auto* g = std::get_if<GammaJumps>(&jumps_)) {
    out += -g->beta / (l + g->alpha) + g->beta / g->alpha;
  } else if (!tab_nodes_.empty()) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < tab_nodes_.size(); ++k) {
      acc += tab_weights_[k] * tab_nodes_[k] * exp_m1(l * tab_nodes_[k]);
    }
    out += acc;
  }
  return out;
}

Complex LevyTriplet::psi_second_unchecked(Complex l) const {
  Complex out = sigma_ * sigma_;
  if (const auto* g = std::get_if<GammaJumps>(&jumps_)) {
    const Complex d = l + g->alpha;
    out += g->beta / (d * d);
  } else if (!tab_nodes_.empty()) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < tab_nodes_.size(); ++k) {
      const double x = tab_nodes_[k];
      acc += tab_weights_[k] * x * x * std::exp(l * x);
    }
    out += acc;
  }
  return out;
}

void check_domain(const LevyTriplet& triplet, Complex lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
  }
  if (lambda.real() < -triplet.zeta()) {
    throw Error(ErrorCode::AdmissibilityViolation,
                "Re(lambda) = " + fmt(lambda.real()) + " is below -zeta = " + fmt(-triplet.zeta()));
  }
  if (const auto* g = std::get_if<GammaJumps>(&triplet.jumps())) {
    if (lambda.imag() == 0.0 && lambda.real() <= -g->alpha) {
      throw Error(ErrorCode::BranchCutViolation,
                  "lambda lies on the log branch cut (-inf, -alpha]");
    }
  }
}

Complex psi(const LevyTriplet& triplet, Complex lambda) {
  check_domain(triplet, lambda);
  return triplet.psi_unchecked(lambda);
}

Complex psi_prime(const LevyTriplet& triplet, Complex lambda) {
  check_domain(triplet, lambda);
  return triplet.psi_prime_unchecked(lambda);
}

Complex psi_second(const LevyTriplet& triplet, Complex lambda) {
  check_domain(triplet, lambda);
  return triplet.psi_second_unchecked(lambda);
}

bool AdmissibilityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

AdmissibilityReport validate_admissibility(const LevyTriplet& triplet) {
  AdmissibilityReport report;
  const double inf = std::numeric_limits<double>::infinity();
  report.checks.push_back({"sigma_positive", triplet.sigma(), triplet.sigma() > 0.0, "parameter"});
  report.checks.push_back({"zeta_nonnegative", triplet.zeta(), triplet.zeta() >= 0.0, "parameter"});
  const double zeta = triplet.zeta();

  std::visit(
      [&](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          report.checks.push_back({"second_moment", 0.0, true, "zero measure"});
          report.checks.push_back({"exponential_moment", 0.0, true, "zero measure"});
        } else if constexpr (std::is_same_v<J, GammaJumps>) {
          // int x^2 Pi(dx) = beta / alpha^2
          report.checks.push_back(
              {"second_moment", j.beta / (j.alpha * j.alpha), true, "closed form"});
          // int_{-inf}^{-1} |x| e^{-zeta x} Pi(dx) = beta e^{-(alpha - zeta)} / (alpha - zeta)
          const bool ok = zeta < j.alpha;
          const double v = ok ? j.beta * std::exp(-(j.alpha - zeta)) / (j.alpha - zeta) : inf;
          report.checks.push_back({"exponential_moment", v, ok, "closed form"});
          report.checks.push_back({"zeta_below_alpha", zeta, ok,
                                   ok ? "zeta < alpha" : "exponential moment diverges for zeta >= alpha"});
        } else {
          double second = 0.0;
          double expo = 0.0;
          std::vector<double> xs;
          std::vector<double> ws;
          quad::append_composite(j.x, kTabulatedOrder, xs, ws);
          for (std::size_t k = 0; k < xs.size(); ++k) {
            const std::size_t panel = k / kTabulatedOrder;
            const double s = (xs[k] - j.x[panel]) / (j.x[panel + 1] - j.x[panel]);
            const double dens = (1.0 - s) * j.density[panel] + s * j.density[panel + 1];
            second += ws[k] * dens * xs[k] * xs[k];
            if (xs[k] <= -1.0) expo += ws[k] * dens * std::abs(xs[k]) * std::exp(-zeta * xs[k]);
          }
          report.checks.push_back({"second_moment", second, std::isfinite(second), "quadrature"});
          report.checks.push_back({"exponential_moment", expo, std::isfinite(expo), "quadrature"});
        }
      },
      triplet.jumps());
  return report;
}

double denominator_floor(const LevyTriplet& triplet, double gamma, Range u_range, Range z_range,
                         int samples) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "denominator_floor needs gamma > 0");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "denominator_floor needs >= 2 samples");
  const double zeta = triplet.zeta();
  std::vector<Complex> right(samples);
  for (int j = 0; j < samples; ++j) {
    const double z = z_range.lo + (z_range.hi - z_range.lo) * j / (samples - 1);
    right[j] = psi(triplet, Complex(-zeta, -z));
  }
  double floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double u = u_range.lo + (u_range.hi - u_range.lo) * i / (samples - 1);
    const Complex left = psi(triplet, Complex(gamma, u));
    for (int j = 0; j < samples; ++j) floor = std::min(floor, std::abs(left - right[j]));
  }
  return floor;
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BranchCutViolation: return "BranchCutViolation";
    case ErrorCode::AdmissibilityViolation: return "AdmissibilityViolation";
    case ErrorCode::InvalidStrike: return "InvalidStrike";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::RequiresL1: return "RequiresL1";
    case ErrorCode::DenominatorUnderflow: return "DenominatorUnderflow";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::TruncationCapExceeded: return "TruncationCapExceeded";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::TailUnbounded: return "TailUnbounded";
    case ErrorCode::CacheMismatch: return "CacheMismatch";
    case ErrorCode::UnsupportedJumpKind: return "UnsupportedJumpKind";
    case ErrorCode::GridExtrapolation: return "GridExtrapolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace wrp
