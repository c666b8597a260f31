#include "wrp/density.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "wrp/errors.hpp"
#include "wrp/inner_rule.hpp"
#include "wrp/parallel.hpp"
#include "wrp/quadrature.hpp"

namespace wrp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOrder = 16;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Smallest U on a doubling ladder, refined by bisection, with log_mag(U) < target.
double cutoff_frequency(const std::function<double(double)>& log_mag, double target) {
  double hi = 1.0;
  while (log_mag(hi) >= target) {
    hi *= 2.0;
    if (hi > 1e8) throw Error(ErrorCode::InvalidArgument, "characteristic function does not decay");
  }
  double lo = hi / 2.0;
  if (log_mag(lo) < target) return hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_mag(mid) >= target ? lo : hi) = mid;
  }
  return hi;
}

// Quadrature of the inversion integral in u, shared by every x.
struct CharFun {
  std::vector<double> u;
  std::vector<double> w;
  std::vector<Complex> phi;
  double U = 0.0;
  double width = 0.0;

  CharFun(const LevyTriplet& tri, double t, double x_abs_max, double cutoff) {
    const double target = std::log(cutoff);
    U = cutoff_frequency(
        [&](double v) { return t * tri.psi_unchecked(Complex(0.0, -v)).real(); }, target);
    width = std::min(1.0, 4.0 / (x_abs_max + 1.0));
    const auto edges = quad::panel_edges(0.0, U, width);
    quad::append_composite(edges, kOrder, u, w);
    phi.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      phi[k] = std::exp(t * tri.psi_unchecked(Complex(0.0, -u[k])));
    }
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double c = std::cos(u[k] * x);
      const double s = std::sin(u[k] * x);
      acc += w[k] * (c * phi[k].real() - s * phi[k].imag());
    }
    return acc / kPi;
  }
};

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be > 0");
}

// Exponential tilt used for the left-tail Chernoff bound.
double tilt(const LevyTriplet& tri) { return tri.has_jumps() ? tri.zeta() : 1.0; }

// P(X_t < a) <= e^{theta a + t psi(-theta)};  P(X_t > b) <= e^{-b + t psi(1)}.
double left_mass_bound(const LevyTriplet& tri, double t, double a) {
  const double th = tilt(tri);
  if (!(th > 0.0)) return 1.0;
  return std::min(1.0, std::exp(th * a + t * tri.psi_unchecked(Complex(-th, 0.0)).real()));
}

double right_mass_bound(const LevyTriplet& tri, double t, double b) {
  return std::min(1.0, std::exp(-b + t * tri.psi_unchecked(Complex(1.0, 0.0)).real()));
}

// Integral of f * p_t over [lo, hi] on GL panels honouring the breakpoints.
double integrate_against_density(const LevyTriplet& tri, double t,
                                 const std::function<double(double)>& f, double lo, double hi,
                                 const std::vector<double>& breakpoints, double width) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> x;
  std::vector<double> w;
  quad::append_composite(quad::panel_edges(lo, hi, width, breakpoints), kOrder, x, w);
  const CharFun cf(tri, t, std::max(std::abs(lo), std::abs(hi)), 1e-16);
  std::vector<double> terms(x.size());
  parallel_for(x.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double fx = f(x[i]);
      terms[i] = fx == 0.0 ? 0.0 : w[i] * fx * cf(x[i]);
    }
  });
  double acc = 0.0;
  for (double v : terms) acc += v;
  return acc;
}

double payoff_tail_sup(const FourierPayoff& payoff, double theta, double L) {
  return std::visit(
      [&](const auto& k) -> double {
        using P = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<P, PutPayoff>) {
          const double peak = k.K - 1.0 / theta;
          return L <= peak ? (k.K - L) * std::exp(theta * L) : std::exp(theta * k.K - 1.0) / theta;
        } else if constexpr (std::is_same_v<P, IndicatorPayoff>) {
          return std::exp(theta * std::min(L, k.K));
        } else {
          double m = 0.0;
          for (std::size_t i = 0; i < k.x.size() && k.x[i] <= L; ++i) {
            m = std::max(m, std::abs(k.h[i]) * std::exp(theta * k.x[i]));
          }
          return m;
        }
      },
      payoff.kind());
}

double payoff_support_start(const FourierPayoff& payoff) {
  if (const auto* c = std::get_if<CustomPayoff>(&payoff.kind())) return c->x.front();
  return -std::numeric_limits<double>::infinity();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double default_payoff_zeta(const LevyTriplet& tri) { return tri.zeta() > 0.0 ? tri.zeta() : 0.9; }

// (1/pi) Re sum_j w_j (-l)^ox psi^oT exp(-l x + T psi(l)) F(l).
double bromwich_sum(const InnerIntegralCache& c, double x, double T, int ox, int oT) {
  Complex acc = 0.0;
  for (std::size_t j = 0; j < c.u.size(); ++j) {
    const Complex l(c.gamma, c.u[j]);
    Complex term = c.weights[j] * std::exp(-l * x + T * c.psi_values[j]) * c.F_values[j];
    for (int k = 0; k < ox; ++k) term *= -l;
    for (int k = 0; k < oT; ++k) term *= c.psi_values[j];
    acc += term;
  }
  return acc.real() / kPi;
}

void check_query_range(const InnerIntegralCache& c, double x, double T) {
  const double slack = 1e-12;
  if (T < c.T_min * (1.0 - slack) || T > c.T_max * (1.0 + slack) || x < 0.0 ||
      x > c.x_max * (1.0 + slack) + slack) {
    throw Error(ErrorCode::CacheMismatch,
                "query (x = " + fmt(x) + ", T = " + fmt(T) + ") outside the cache range x <= " +
                    fmt(c.x_max) + ", T in [" + fmt(c.T_min) + ", " + fmt(c.T_max) + "]");
  }
}

CacheParams params_for(const CacheParams& base, double T_min, double T_max, double x_max) {
  CacheParams p = base;
  p.T_min = T_min;
  p.T_max = T_max;
  p.x_max = x_max;
  return p;
}

}  // namespace

DensitySlice density(const LevyTriplet& triplet, double t, const std::vector<double>& x_grid,
                     const DensityOptions& opts) {
  check_t(t);
  DensitySlice s;
  s.t = t;
  s.x_grid = x_grid;
  if (x_grid.empty()) return s;
  double x_abs = 0.0;
  for (double x : x_grid) x_abs = std::max(x_abs, std::abs(x));
  const CharFun cf(triplet, t, x_abs, opts.cutoff);
  s.u_cutoff = cf.U;
  s.u_panel_width = cf.width;
  s.p_values.resize(x_grid.size());
  parallel_for(x_grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) s.p_values[i] = cf(x_grid[i]);
  });
  for (double& p : s.p_values) {
    if (p < 0.0) {
      s.min_raw = std::min(s.min_raw, p);
      p = 0.0;
    }
  }
  if (s.min_raw < -opts.clip_tolerance) {
    throw Error(ErrorCode::InsufficientGrid,
                "density inversion rings below zero (" + fmt(s.min_raw) + ")");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
    mass += 0.5 * (x_grid[i + 1] - x_grid[i]) * (s.p_values[i] + s.p_values[i + 1]);
  }
  s.normalization_defect = std::abs(1.0 - mass);
  return s;
}

double expectation(const LevyTriplet& triplet, const FourierPayoff& payoff, double t,
                   double tail_tol) {
  check_t(t);
  const double theta = tilt(triplet);
  const auto kinks = payoff.kinks();
  const double top = *std::max_element(kinks.begin(), kinks.end());
  double L = payoff_support_start(payoff);
  if (!std::isfinite(L)) {
    if (!(theta > 0.0)) {
      throw Error(ErrorCode::TailUnbounded, "no exponential moment to bound the left tail");
    }
    const double mgf = std::exp(t * triplet.psi_unchecked(Complex(-theta, 0.0)).real());
    const double start = *std::min_element(kinks.begin(), kinks.end());
    double d = 1.0;
    while (payoff_tail_sup(payoff, theta, start - d) * mgf > tail_tol) {
      d *= 2.0;
      if (d > 1e5) throw Error(ErrorCode::TailUnbounded, "payoff outgrows the exponential moment");
    }
    // refine to the nearest unit
    double lo = start - d;
    double hi = start - d / 2.0;
    while (hi - lo > 1.0) {
      const double mid = 0.5 * (lo + hi);
      (payoff_tail_sup(payoff, theta, mid) * mgf > tail_tol ? hi : lo) = mid;
    }
    L = lo;
  }
  const double hi = std::min(0.0, top);
  auto f = [&payoff](double x) { return payoff.h(x); };
  return integrate_against_density(triplet, t, f, L, hi, kinks, 0.5);
}

double GridFunction::operator()(double v) const {
  if (x.empty() || v < x.front() || v > x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  if (it == x.end()) return f.back();
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double s = (v - x[i]) / (x[i + 1] - x[i]);
  return (1.0 - s) * f[i] + s * f[i + 1];
}

double expectation(const LevyTriplet& triplet, const std::function<double(double)>& f, double t,
                   double lo, double hi, const std::vector<double>& breakpoints, double tail_tol) {
  check_t(t);
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "expectation needs lo < hi");
  const double left = std::abs(f(lo)) * left_mass_bound(triplet, t, lo);
  const double right = std::abs(f(hi)) * right_mass_bound(triplet, t, hi);
  if (left > tail_tol || right > tail_tol) {
    throw Error(ErrorCode::TailUnbounded,
                "mass outside [" + fmt(lo) + ", " + fmt(hi) + "] times |f| is " +
                    fmt(std::max(left, right)) + "; widen the grid");
  }
  return integrate_against_density(triplet, t, f, lo, hi, breakpoints, 0.25);
}

double expectation(const LevyTriplet& triplet, const GridFunction& f, double t, double tail_tol) {
  if (f.x.size() < 2 || f.x.size() != f.f.size()) {
    throw Error(ErrorCode::InvalidArgument, "grid function needs >= 2 matching points");
  }
  return expectation(
      triplet, [&f](double v) { return f(v); }, t, f.x.front(), f.x.back(), f.x, tail_tol);
}

std::string cache_fingerprint(const LevyTriplet& triplet, const FourierPayoff& payoff,
                              double gamma, double R) {
  std::ostringstream os;
  os << "model{" << triplet.fingerprint() << "};payoff{" << payoff.fingerprint()
     << "};gamma=" << fmt(gamma) << ";zeta=" << fmt(payoff.zeta()) << ";R=" << fmt(R)
     << ";rule=graded-gl8";
  return os.str();
}

double bromwich_step(double sigma, const CacheParams& p) {
  const double a = sigma * sigma * p.T_max;
  const double s = a * p.gamma + std::sqrt(a * a * p.gamma * p.gamma + 2.0 * a * p.alias_log);
  return std::min(p.step, 2.0 * kPi / s);
}

InnerIntegralCache build_cache(const LevyTriplet& triplet, const FourierPayoff& payoff,
                               const CacheParams& params) {
  const auto t0 = Clock::now();
  if (!(params.T_min > 0.0) || params.T_max < params.T_min || params.x_max < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "cache needs 0 < T_min <= T_max and x_max >= 0");
  }
  if (!(params.gamma > 0.0) || !(params.R > 0.0) || !(params.step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cache needs gamma, R, step > 0");
  }
  const LevyTriplet eff = kernel_triplet(triplet, payoff.zeta());
  const double psi_gamma = eff.psi_unchecked(Complex(params.gamma, 0.0)).real();
  if (params.T_max * psi_gamma > 700.0) {
    throw Error(ErrorCode::OverflowGuard,
                "T psi(gamma) = " + fmt(params.T_max * psi_gamma) + " overflows the Bromwich sum");
  }

  InnerIntegralCache c;
  c.gamma = params.gamma;
  c.zeta = payoff.zeta();
  c.R = params.R;
  c.T_min = params.T_min;
  c.T_max = params.T_max;
  c.x_max = params.x_max;
  c.step = bromwich_step(eff.sigma(), params);
  const double U = cutoff_frequency(
      [&](double v) { return params.T_min * eff.psi_unchecked(Complex(params.gamma, v)).real(); },
      std::log(params.cutoff));
  const auto n = static_cast<std::size_t>(std::ceil(U / c.step)) + 1;
  for (std::size_t j = 0; j < n; ++j) {
    c.u.push_back(c.step * static_cast<double>(j));
    c.weights.push_back(j == 0 ? 0.5 * c.step : c.step);
    c.psi_values.push_back(eff.psi_unchecked(Complex(params.gamma, c.u.back())));
  }
  const InnerRule rule(eff, payoff, {params.R}, params.floor_threshold);
  c.F_values.resize(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) c.F_values[j] = rule.evaluate(Complex(c.gamma, c.u[j]));
  });
  c.fingerprint = cache_fingerprint(triplet, payoff, params.gamma, params.R);
  c.fingerprint_hash = std::hash<std::string>{}(c.fingerprint);
  c.build_seconds = seconds_since(t0);
  return c;
}

JointValue joint_probability(const LevyTriplet& triplet, const FourierPayoff& indicator,
                             const JointLawQuery& q, const InnerIntegralCache& cache) {
  const auto* ind = std::get_if<IndicatorPayoff>(&indicator.kind());
  if (ind == nullptr || ind->K != q.K) {
    throw Error(ErrorCode::CacheMismatch, "joint law needs the indicator payoff with the query's K");
  }
  if (cache_fingerprint(triplet, indicator, cache.gamma, cache.R) != cache.fingerprint) {
    throw Error(ErrorCode::CacheMismatch, "cache was built for a different model or payoff");
  }
  check_query_range(cache, q.x, q.T);
  JointValue v;
  v.raw = bromwich_sum(cache, q.x, q.T, 0, 0);
  v.prob = std::clamp(v.raw, 0.0, 1.0);
  v.excursion = std::abs(v.raw - v.prob);
  return v;
}

JointValue joint_probability(const LevyTriplet& triplet, const JointLawQuery& q,
                             const CacheParams& base) {
  if (!(q.K < 0.0)) throw Error(ErrorCode::InvalidStrike, "K must be < 0");
  const auto ind = make_indicator(q.K, default_payoff_zeta(triplet));
  const auto cache = build_cache(triplet, ind, params_for(base, q.T, q.T, q.x));
  return joint_probability(triplet, ind, q, cache);
}

JointSurface joint_surface(const LevyTriplet& triplet, double K, const std::vector<double>& x_grid,
                           const std::vector<double>& T_grid, const CacheParams& base) {
  JointSurface s;
  s.K = K;
  s.x_grid = x_grid;
  s.T_grid = T_grid;
  if (x_grid.empty() || T_grid.empty()) return s;
  const auto t0 = Clock::now();
  const auto ind = make_indicator(K, default_payoff_zeta(triplet));
  const auto [tmin, tmax] = std::minmax_element(T_grid.begin(), T_grid.end());
  const double xmax = *std::max_element(x_grid.begin(), x_grid.end());
  const auto cache = build_cache(triplet, ind, params_for(base, *tmin, *tmax, std::max(0.0, xmax)));
  s.build_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const std::size_t nx = x_grid.size();
  s.prob.resize(nx * T_grid.size());
  parallel_for(s.prob.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      s.prob[i] = joint_probability(triplet, ind, {K, x_grid[i % nx], T_grid[i / nx]}, cache).prob;
    }
  });
  s.eval_seconds = seconds_since(t1);
  return s;
}

double sensitivity(const LevyTriplet& triplet, double K, double x, double T, int order_x,
                   int order_T, const CacheParams& base) {
  if (order_x < 0 || order_T < 0 || order_x + order_T > 4) {
    throw Error(ErrorCode::InvalidArgument, "derivative orders must be >= 0 with sum <= 4");
  }
  if (!(K < 0.0)) throw Error(ErrorCode::InvalidStrike, "K must be < 0");
  const auto ind = make_indicator(K, default_payoff_zeta(triplet));
  const auto cache = build_cache(triplet, ind, params_for(base, T, T, x));
  check_query_range(cache, x, T);
  return bromwich_sum(cache, x, T, order_x, order_T);
}

PairingResult pair_g_with_density(const LevyTriplet& triplet, const FourierPayoff& payoff,
                                  double t, const CacheParams& base) {
  check_t(t);
  PairingResult r;
  const auto cache = build_cache(triplet, payoff, params_for(base, t, t, 0.0));
  r.pairing = bromwich_sum(cache, 0.0, t, 0, 0);
  r.expectation = expectation(triplet, payoff, t);
  r.difference = r.pairing - r.expectation;
  return r;
}

}  // namespace wrp
