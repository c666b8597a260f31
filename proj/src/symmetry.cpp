#include "wrp/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wrp/errors.hpp"
#include "wrp/inner_rule.hpp"
#include "wrp/parallel.hpp"
#include "wrp/quadrature.hpp"

namespace wrp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOverflowExponent = 700.0;
constexpr double kWholeLineR = 1e5;

// Seed width for z-panels: resolves the oscillation e^{i z x_k} of h_hat for
// every kink x_k of h.
double seed_width(const FourierPayoff& payoff) {
  double span = 0.0;
  for (double k : payoff.kinks()) span = std::max(span, std::abs(k));
  return span > 0.0 ? std::min(16.0, 2.0 * kPi / span) : 16.0;
}

struct InnerEvaluator {
  const LevyTriplet& tri;
  const FourierPayoff& payoff;
  double zeta;
  double floor_threshold;
  double width;

  Complex operator()(Complex lambda, Complex psi_l, Complex dpsi_l, double z) const {
    const Complex w(zeta, z);
    const Complex den = psi_l - tri.psi_unchecked(-w);
    if (std::abs(den) < floor_threshold) {
      throw Error(ErrorCode::DenominatorUnderflow,
                  "|psi(lambda) - psi(-zeta - iz)| below floor at lambda = (" +
                      std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                      "), z = " + std::to_string(z) + "; increase gamma");
    }
    return (dpsi_l / den - 1.0 / (lambda + w)) * payoff.h_hat(z);
  }

  // Integral over {a <= |z| <= b}, or over [-b, b] when a == 0.
  Complex annulus(Complex lambda, Complex psi_l, Complex dpsi_l, double a, double b,
                  double abs_tol) const {
    const double u = lambda.imag();
    const std::vector<double> bps{0.0, u, -u};
    auto f = [&](double z) { return (*this)(lambda, psi_l, dpsi_l, z); };
    quad::AdaptiveOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-12;
    Complex total = 0.0;
    auto run = [&](double lo, double hi) {
      const auto edges = quad::panel_edges(lo, hi, width, bps);
      opt.max_panels = static_cast<int>(edges.size()) + 4000;
      total += quad::integrate_adaptive(f, edges, opt).value;
    };
    if (a <= 0.0) {
      run(-b, b);
    } else {
      run(a, b);
      run(-b, -a);
    }
    return total;
  }

  // Cumulative F_{R_k}(lambda) for every level R_0 < R_1 < ...
  void levels(Complex lambda, const std::vector<double>& R, double abs_tol, Complex* out) const {
    const Complex psi_l = tri.psi_unchecked(lambda);
    const Complex dpsi_l = tri.psi_prime_unchecked(lambda);
    const double tol = abs_tol / static_cast<double>(R.size());
    Complex acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < R.size(); ++k) {
      acc += annulus(lambda, psi_l, dpsi_l, prev, R[k], tol);
      prev = R[k];
      out[k] = acc;
    }
  }
};

void check_params(const FourierPayoff& payoff, const ContourParams& p) {
  if (payoff.integrability() != Integrability::L1) {
    throw Error(ErrorCode::RequiresL1,
                "pointwise g needs an integrable preimage; use the density pairing for this payoff");
  }
  if (!(p.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  if (!(p.r > 0.0) || !(p.R > 0.0)) throw Error(ErrorCode::InvalidArgument, "r and R must be > 0");
  if (!(p.quad_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "quad_tol must be > 0");
}

void check_floor(const LevyTriplet& eff, const ContourParams& p, double r, double R) {
  // The sampled floor is a diagnostic; a 401 x 401 grid on the full box.
  const double fl = denominator_floor(eff, p.gamma, {-r, r}, {-R, R});
  if (!(fl > p.floor_threshold)) {
    throw Error(ErrorCode::DenominatorUnderflow,
                "kernel denominator floor " + std::to_string(fl) + " <= threshold at gamma = " +
                    std::to_string(p.gamma) + "; increase gamma");
  }
}

void check_x(double x, double gamma) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "g is evaluated only at x > 0");
  }
  if (gamma * x > kOverflowExponent) {
    throw Error(ErrorCode::OverflowGuard,
                "gamma * x = " + std::to_string(gamma * x) + " exceeds the double range guard");
  }
}

struct CurveRequest {
  std::vector<double> x;
  std::vector<double> r;  // outer truncation per point
  std::vector<double> R;  // inner truncation per point
};

struct CurveResult {
  std::vector<double> g;
  std::vector<double> im;
};

// One pass over the u-nodes serves every (x, r, R) in the request.
CurveResult evaluate_curve(const LevyTriplet& eff, const FourierPayoff& payoff,
                           const CurveRequest& req, const ContourParams& p) {
  CurveResult out;
  const std::size_t n = req.x.size();
  out.g.assign(n, 0.0);
  out.im.assign(n, 0.0);
  if (n == 0) return out;

  std::vector<double> r_levels = req.r;
  std::vector<double> R_levels = req.R;
  std::sort(r_levels.begin(), r_levels.end());
  r_levels.erase(std::unique(r_levels.begin(), r_levels.end()), r_levels.end());
  std::sort(R_levels.begin(), R_levels.end());
  R_levels.erase(std::unique(R_levels.begin(), R_levels.end()), R_levels.end());
  const double x_max = *std::max_element(req.x.begin(), req.x.end());
  const double u_width = std::min(4.0, 8.0 / x_max);
  const auto edges = quad::panel_edges(0.0, r_levels.back(), u_width, r_levels);
  const std::size_t panels = edges.size() - 1;
  const std::size_t levels = R_levels.size();

  std::vector<double> u(panels * 15);
  std::vector<double> wu(panels * 15);
  for (std::size_t i = 0; i < panels; ++i) {
    const auto nodes = quad::kronrod_nodes(edges[i], edges[i + 1]);
    const auto weights = quad::kronrod_weights(edges[i], edges[i + 1]);
    for (int k = 0; k < 15; ++k) {
      u[i * 15 + k] = nodes[k];
      wu[i * 15 + k] = weights[k];
    }
  }

  const InnerRule inner(eff, payoff, R_levels, p.floor_threshold);
  std::vector<Complex> F(u.size() * levels);
  std::vector<Complex> mirror(panels * levels);
  parallel_for(u.size() + panels, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      if (j < u.size()) {
        inner.evaluate(Complex(p.gamma, u[j]), &F[j * levels]);
      } else {
        const std::size_t i = j - u.size();
        inner.evaluate(Complex(p.gamma, -u[i * 15 + 14]), &mirror[i * levels]);
      }
    }
  });

  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = req.x[i];
      const std::size_t lev = static_cast<std::size_t>(
          std::lower_bound(R_levels.begin(), R_levels.end(), req.R[i]) - R_levels.begin());
      Complex sum = 0.0;
      double defect = 0.0;
      for (std::size_t pi = 0; pi < panels && edges[pi + 1] <= req.r[i] * (1.0 + 1e-15); ++pi) {
        for (int k = 0; k < 15; ++k) {
          const std::size_t j = pi * 15 + k;
          sum += wu[j] * std::polar(1.0, u[j] * x) * F[j * levels + lev];
        }
        const std::size_t c = pi * 15 + 14;
        defect += (edges[pi + 1] - edges[pi]) *
                  std::abs(mirror[pi * levels + lev] - std::conj(F[c * levels + lev]));
      }
      const double scale = std::exp(p.gamma * x);
      out.g[i] = scale * sum.real() / kPi;
      out.im[i] = scale * defect / (2.0 * kPi);
    }
  });
  return out;
}

SymmetryImage make_image(const LevyTriplet& triplet, const FourierPayoff& payoff,
                         const ContourParams& p) {
  SymmetryImage img;
  img.params = p;
  img.triplet = std::make_shared<const LevyTriplet>(triplet);
  img.payoff = std::make_shared<const FourierPayoff>(payoff);
  return img;
}

}  // namespace

Complex kernel(const LevyTriplet& triplet, double zeta, Complex lambda, double z,
               double floor_threshold) {
  check_domain(triplet, lambda);
  const Complex w(zeta, z);
  const Complex other = triplet.has_jumps() ? psi(triplet, -w) : triplet.psi_unchecked(-w);
  const Complex den = psi(triplet, lambda) - other;
  if (std::abs(den) < floor_threshold) {
    throw Error(ErrorCode::DenominatorUnderflow, "kernel denominator below floor");
  }
  return psi_prime(triplet, lambda) / den - 1.0 / (lambda + w);
}

Complex integrand(const LevyTriplet& triplet, const FourierPayoff& payoff, Complex lambda,
                  double z, double floor_threshold) {
  const Complex hh = payoff.h_hat(z);
  if (hh == Complex(0.0)) return 0.0;
  return kernel(triplet, payoff.zeta(), lambda, z, floor_threshold) * hh;
}

Complex inner_integral(const LevyTriplet& triplet, const FourierPayoff& payoff, Complex lambda,
                       double R, double abs_tol, double floor_threshold) {
  const LevyTriplet eff = kernel_triplet(triplet, payoff.zeta());
  check_domain(eff, lambda);
  if (!std::isfinite(R)) R = kWholeLineR;
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be > 0");
  const InnerEvaluator inner{eff, payoff, payoff.zeta(), floor_threshold, seed_width(payoff)};
  Complex out;
  inner.levels(lambda, {R}, abs_tol, &out);
  return out;
}

double error_bound(const FourierPayoff& payoff, double x, double gamma, double r, double R,
                   double bound_constant) {
  if (payoff.integrability() != Integrability::L1) return std::numeric_limits<double>::infinity();
  const double raw = payoff.l1_norm() / r + payoff.tail_mass(std::min(0.5 * r, R));
  return bound_constant * std::exp(gamma * x) / x * raw;
}

GPoint compute_g_point(const LevyTriplet& triplet, const FourierPayoff& payoff, double x,
                       const ContourParams& params) {
  check_params(payoff, params);
  check_x(x, params.gamma);
  const LevyTriplet eff = kernel_triplet(triplet, payoff.zeta());
  check_floor(eff, params, params.r, params.R);
  const auto res = evaluate_curve(eff, payoff, {{x}, {params.r}, {params.R}}, params);
  return {res.g[0],
          error_bound(payoff, x, params.gamma, params.r, params.R, params.bound_constant),
          res.im[0]};
}

SymmetryImage compute_g_curve(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              const std::vector<double>& x_grid, const ContourParams& params) {
  check_params(payoff, params);
  SymmetryImage img = make_image(triplet, payoff, params);
  if (x_grid.empty()) return img;
  for (double x : x_grid) check_x(x, params.gamma);
  const LevyTriplet eff = kernel_triplet(triplet, payoff.zeta());
  check_floor(eff, params, params.r, params.R);
  CurveRequest req{x_grid, std::vector<double>(x_grid.size(), params.r),
                   std::vector<double>(x_grid.size(), params.R)};
  const auto res = evaluate_curve(eff, payoff, req, params);
  img.x_grid = x_grid;
  img.g_values = res.g;
  img.im_residuals = res.im;
  img.r_used = req.r;
  img.R_used = req.R;
  for (double x : x_grid) {
    img.error_bounds.push_back(
        error_bound(payoff, x, params.gamma, params.r, params.R, params.bound_constant));
  }
  return img;
}

SymmetryImage compute_g_curve(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              const std::vector<double>& x_grid, double target_err,
                              const ContourParams& base, double r_cap) {
  check_params(payoff, base);
  if (!(target_err > 0.0)) throw Error(ErrorCode::InvalidArgument, "target_err must be > 0");
  SymmetryImage img = make_image(triplet, payoff, base);
  if (x_grid.empty()) return img;
  for (double x : x_grid) check_x(x, base.gamma);

  std::vector<double> ladder;
  for (double r = 20.0; r < r_cap; r *= 2.0) ladder.push_back(r);
  ladder.push_back(r_cap);

  CurveRequest req;
  req.x = x_grid;
  for (double x : x_grid) {
    double chosen = -1.0;
    for (double r : ladder) {
      if (error_bound(payoff, x, base.gamma, r, r, base.bound_constant) <= target_err) {
        chosen = r;
        break;
      }
    }
    if (chosen < 0.0) {
      throw Error(ErrorCode::TruncationCapExceeded,
                  "error bound at x = " + std::to_string(x) + " stays above " +
                      std::to_string(target_err) + " up to r = R = " + std::to_string(r_cap));
    }
    req.r.push_back(chosen);
    req.R.push_back(chosen);
  }
  const LevyTriplet eff = kernel_triplet(triplet, payoff.zeta());
  const double r_max = *std::max_element(req.r.begin(), req.r.end());
  check_floor(eff, base, r_max, r_max);
  const auto res = evaluate_curve(eff, payoff, req, base);
  img.x_grid = x_grid;
  img.g_values = res.g;
  img.im_residuals = res.im;
  img.r_used = req.r;
  img.R_used = req.R;
  img.params.r = r_max;
  img.params.R = r_max;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    img.error_bounds.push_back(
        error_bound(payoff, x_grid[i], base.gamma, req.r[i], req.R[i], base.bound_constant));
  }
  return img;
}

std::vector<HedgePoint> static_hedge_payoff(const LevyTriplet& triplet,
                                            const FourierPayoff& payoff,
                                            const std::vector<double>& x_grid,
                                            double target_err, const ContourParams& base) {
  std::vector<double> positive;
  for (double x : x_grid) {
    if (x > 0.0) positive.push_back(x);
  }
  const SymmetryImage img = compute_g_curve(triplet, payoff, positive, target_err, base);
  std::vector<HedgePoint> out;
  out.reserve(x_grid.size());
  std::size_t k = 0;
  for (double x : x_grid) {
    if (x < 0.0) {
      out.push_back({x, payoff.h(x), 0.0});
    } else if (x == 0.0) {
      out.push_back({x, payoff.h(-std::numeric_limits<double>::min()), 0.0});
    } else {
      out.push_back({x, -img.g_values[k], img.error_bounds[k]});
      ++k;
    }
  }
  return out;
}

std::vector<LaplaceResidual> verify_laplace_identity(const SymmetryImage& image,
                                                     const std::vector<double>& w_list,
                                                     double tail_tol) {
  if (!image.triplet || !image.payoff) {
    throw Error(ErrorCode::InvalidArgument, "image carries no model or payoff");
  }
  const auto& x = image.x_grid;
  const auto& g = image.g_values;
  const double gamma = image.params.gamma;
  if (x.size() < 3) throw Error(ErrorCode::InsufficientGrid, "image grid needs >= 3 points");

  // Uniform grids with an even number of intervals get Simpson weights.
  const std::size_t n = x.size();
  const double h0 = x[1] - x[0];
  bool uniform = (n - 1) % 2 == 0;
  for (std::size_t i = 1; uniform && i < n; ++i) {
    uniform = std::abs((x[i] - x[i - 1]) - h0) <= 1e-9 * h0;
  }
  std::vector<double> wq(n, 0.0);
  if (uniform) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      wq[i] = c * h0 / 3.0;
    }
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double d = 0.5 * (x[i + 1] - x[i]);
      wq[i] += d;
      wq[i + 1] += d;
    }
  }
  const double g_at_0 = g[0] - x[0] * (g[1] - g[0]) / (x[1] - x[0]);

  std::vector<LaplaceResidual> out;
  for (double w : w_list) {
    if (!(w >= gamma + 0.5)) {
      throw Error(ErrorCode::InsufficientGrid,
                  "w = " + std::to_string(w) + " must be >= gamma + 0.5 for the tail to vanish");
    }
    LaplaceResidual res;
    res.w = w;
    double lhs = 0.5 * x[0] * (g_at_0 + std::exp(-w * x[0]) * g[0]);
    for (std::size_t i = 0; i < n; ++i) lhs += wq[i] * std::exp(-w * x[i]) * g[i];
    res.tail = std::exp(-w * x.back()) * std::abs(g.back()) / (w - gamma);
    if (res.tail > tail_tol * std::max(std::abs(lhs), 1e-300)) {
      throw Error(ErrorCode::InsufficientGrid,
                  "tail beyond x = " + std::to_string(x.back()) + " is " +
                      std::to_string(res.tail) + "; extend the grid");
    }
    res.lhs = lhs;
    res.rhs = inner_integral(*image.triplet, *image.payoff, Complex(w, 0.0),
                             std::numeric_limits<double>::infinity(), 1e-13,
                             image.params.floor_threshold)
                  .real();
    res.residual = std::abs(res.lhs - res.rhs);
    res.relative = res.residual / (1.0 + std::abs(res.rhs));
    out.push_back(res);
  }
  return out;
}

double calibrate_bound_constant(const FourierPayoff& payoff, double sigma,
                                const std::vector<double>& x_grid,
                                const std::vector<double>& r_list, double gamma) {
  const LevyTriplet bm = LevyTriplet::brownian(sigma, 0.0, payoff.zeta());
  double worst = 0.0;
  for (double r : r_list) {
    ContourParams p;
    p.gamma = gamma;
    p.r = r;
    p.R = r;
    const SymmetryImage img = compute_g_curve(bm, payoff, x_grid, p);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const double x = x_grid[i];
      const double err = std::abs(img.g_values[i] - payoff.h(-x));
      const double raw = error_bound(payoff, x, gamma, r, r, 1.0);
      worst = std::max(worst, err / raw);
    }
  }
  return 2.0 * worst;
}

}  // namespace wrp
