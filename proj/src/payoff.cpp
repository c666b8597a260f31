#include "wrp/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "wrp/errors.hpp"
#include "wrp/quadrature.hpp"

namespace wrp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTableEnd = 200.0;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void check_strike(double K, double zeta) {
  if (!(K < 0.0) || !std::isfinite(K)) {
    throw Error(ErrorCode::InvalidStrike, "strike K must be < 0 (support below the barrier at 0)");
  }
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw Error(ErrorCode::InvalidArgument, "payoff preimage needs zeta > 0");
  }
}

// Least-squares slope of log(max |f| over window) against log(window centre),
// with windows spaced logarithmically on [lo, hi].
template <class F>
double fitted_tail_slope(F&& abs_f, double lo, double hi) {
  constexpr int windows = 24;
  constexpr int per_window = 96;
  std::vector<double> lx;
  std::vector<double> ly;
  const double step = std::log(hi / lo) / windows;
  for (int w = 0; w < windows; ++w) {
    const double a = lo * std::exp(step * w);
    const double b = lo * std::exp(step * (w + 1));
    double m = 0.0;
    for (int k = 0; k <= per_window; ++k) m = std::max(m, abs_f(a + (b - a) * k / per_window));
    if (m > 0.0) {
      lx.push_back(std::log(std::sqrt(a * b)));
      ly.push_back(std::log(m));
    }
  }
  if (lx.size() < 2) return -std::numeric_limits<double>::infinity();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

double FourierPayoff::h(double x) const {
  return std::visit(
      [x](const auto& k) -> double {
        using P = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<P, PutPayoff>) {
          return x < k.K ? k.K - x : 0.0;
        } else if constexpr (std::is_same_v<P, IndicatorPayoff>) {
          return x <= k.K ? 1.0 : 0.0;
        } else {
          if (x < k.x.front() || x > k.x.back()) return 0.0;
          const auto it = std::upper_bound(k.x.begin(), k.x.end(), x);
          if (it == k.x.end()) return k.h.back();
          const std::size_t i = static_cast<std::size_t>(it - k.x.begin()) - 1;
          const double s = (x - k.x[i]) / (k.x[i + 1] - k.x[i]);
          return (1.0 - s) * k.h[i] + s * k.h[i + 1];
        }
      },
      kind_);
}

Complex FourierPayoff::h_hat(double z) const {
  const Complex w(zeta_, z);
  if (const auto* p = std::get_if<PutPayoff>(&kind_)) {
    return std::exp(p->K * w) / (kTwoPi * w * w);
  }
  if (const auto* p = std::get_if<IndicatorPayoff>(&kind_)) {
    return std::exp(p->K * w) / (kTwoPi * w);
  }
  Complex c_sum = 0.0;
  Complex d_sum = 0.0;
  for (std::size_t k = 0; k < atoms_x_.size(); ++k) {
    const Complex e = std::exp(w * atoms_x_[k]);
    if (atoms_c_[k] != 0.0) c_sum += atoms_c_[k] * e;
    if (atoms_d_[k] != 0.0) d_sum += atoms_d_[k] * e;
  }
  return (c_sum / w + d_sum / (w * w)) / kTwoPi;
}

double FourierPayoff::tail_mass(double r) const {
  if (integrability_ == Integrability::L2Only) return std::numeric_limits<double>::infinity();
  r = std::max(r, 0.0);
  const double zeta = zeta_;
  if (const auto* p = std::get_if<PutPayoff>(&kind_)) {
    // 2 int_r^inf e^{K zeta} / (2pi (zeta^2 + z^2)) dz
    return std::exp(p->K * zeta) * (0.5 * std::numbers::pi - std::atan(r / zeta)) /
           (std::numbers::pi * zeta);
  }
  const double p = tail_exponent_;
  auto beyond = [&](double from) {
    return 2.0 * envelope_scale_ * std::pow(from, p + 1.0) / (-p - 1.0);
  };
  if (r >= kTableEnd) return beyond(r);
  const auto it = std::upper_bound(table_z_.begin(), table_z_.end(), r);
  const std::size_t j = std::max<std::size_t>(1, static_cast<std::size_t>(it - table_z_.begin()));
  const double s = (r - table_z_[j - 1]) / (table_z_[j] - table_z_[j - 1]);
  const double cum_r = (1.0 - s) * table_cum_[j - 1] + s * table_cum_[j];
  return 2.0 * (table_cum_.back() - cum_r) + beyond(kTableEnd);
}

std::vector<double> FourierPayoff::kinks() const {
  return std::visit(
      [](const auto& k) -> std::vector<double> {
        using P = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<P, CustomPayoff>) {
          return k.x;
        } else {
          return {k.K};
        }
      },
      kind_);
}

std::string FourierPayoff::fingerprint() const {
  std::ostringstream os;
  os << "zeta=" << fmt(zeta_) << ";";
  std::visit(
      [&](const auto& k) {
        using P = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<P, PutPayoff>) {
          os << "put:" << fmt(k.K);
        } else if constexpr (std::is_same_v<P, IndicatorPayoff>) {
          os << "indicator:" << fmt(k.K);
        } else {
          os << "custom:" << k.x.size();
          for (std::size_t i = 0; i < k.x.size(); ++i) os << "," << fmt(k.x[i]) << "," << fmt(k.h[i]);
        }
      },
      kind_);
  return os.str();
}

FourierPayoff make_put(double K, double zeta) {
  check_strike(K, zeta);
  FourierPayoff p;
  p.kind_ = PutPayoff{K};
  p.zeta_ = zeta;
  p.integrability_ = Integrability::L1;
  // |h_hat| = e^{K zeta} / (2pi (zeta^2 + z^2))
  p.l1_norm_ = std::exp(K * zeta) / (2.0 * zeta);
  p.l2_norm_ = std::sqrt(std::exp(2.0 * K * zeta) / (8.0 * std::numbers::pi * zeta * zeta * zeta));
  p.tail_exponent_ = -2.0;
  return p;
}

FourierPayoff make_indicator(double K, double zeta) {
  check_strike(K, zeta);
  FourierPayoff p;
  p.kind_ = IndicatorPayoff{K};
  p.zeta_ = zeta;
  p.integrability_ = Integrability::L2Only;
  p.l1_norm_ = std::numeric_limits<double>::infinity();
  p.l2_norm_ = std::sqrt(std::exp(2.0 * K * zeta) / (4.0 * std::numbers::pi * zeta));
  p.tail_exponent_ = -1.0;
  return p;
}

FourierPayoff make_custom(std::vector<double> x, std::vector<double> h, double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw Error(ErrorCode::InvalidArgument, "payoff preimage needs zeta > 0");
  }
  if (x.size() < 2 || x.size() != h.size()) {
    throw Error(ErrorCode::InvalidArgument, "custom payoff needs >= 2 matching (x, h) points");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(h[i])) {
      throw Error(ErrorCode::InvalidArgument, "custom payoff values must be finite");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "custom payoff grid must be strictly increasing");
    }
    if (x[i] >= 0.0 && h[i] != 0.0) {
      throw Error(ErrorCode::NonIntegrable,
                  "custom payoff must vanish on [0, inf); h(" + fmt(x[i]) + ") = " + fmt(h[i]));
    }
  }
  // Drop the part of the grid at or above 0; h is identically zero there.
  while (x.size() > 2 && x[x.size() - 2] >= 0.0) {
    x.pop_back();
    h.pop_back();
  }
  if (x.back() > 0.0 && h[h.size() - 2] != 0.0) {
    // the last segment crosses 0 while h is nonzero on its left end
    throw Error(ErrorCode::NonIntegrable, "custom payoff must vanish at 0 (support touches 0+)");
  }

  double weighted_max = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    weighted_max = std::max(weighted_max, std::abs(std::exp(zeta * x[i]) * h[i]));
  }
  const double left = std::abs(std::exp(zeta * x.front()) * h.front());
  if (weighted_max > 0.0 && left > 1e-8 * weighted_max) {
    throw Error(ErrorCode::NonIntegrable,
                "e^{zeta x} h(x) has not decayed at the left end of the grid");
  }

  FourierPayoff p;
  p.zeta_ = zeta;
  p.kind_ = CustomPayoff{x, h};

  // 2pi h_hat = [e^{wx} f / w]_{x_0}^{x_n} - (1/w^2) sum_k e^{w x_k} (s_{k-1} - s_k)
  const std::size_t n = x.size();
  std::vector<double> slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (h[i + 1] - h[i]) / (x[i + 1] - x[i]);
  for (std::size_t k = 0; k < n; ++k) {
    const double s_prev = k == 0 ? 0.0 : slope[k - 1];
    const double s_next = k + 1 == n ? 0.0 : slope[k];
    double c = 0.0;
    if (k == 0) c -= h[0];
    if (k + 1 == n) c += h[n - 1];
    const double d = s_next - s_prev;
    if (c != 0.0 || d != 0.0) {
      p.atoms_x_.push_back(x[k]);
      p.atoms_c_.push_back(c);
      p.atoms_d_.push_back(d);
    }
  }

  // l2 norm via Plancherel: int |h_hat|^2 = (1/2pi) int e^{2 zeta x} h(x)^2 dx
  {
    std::vector<double> qx;
    std::vector<double> qw;
    quad::append_composite(x, 8, qx, qw);
    double acc = 0.0;
    for (std::size_t k = 0; k < qx.size(); ++k) {
      const double v = p.h(qx[k]);
      acc += qw[k] * std::exp(2.0 * zeta * qx[k]) * v * v;
    }
    p.l2_norm_ = std::sqrt(acc / kTwoPi);
  }

  if (p.atoms_x_.empty()) {
    // h == 0
    p.integrability_ = Integrability::L1;
    p.tail_exponent_ = -std::numeric_limits<double>::infinity();
    p.l1_norm_ = 0.0;
    p.table_z_ = {0.0, kTableEnd};
    p.table_cum_ = {0.0, 0.0};
    p.envelope_scale_ = 0.0;
    p.tail_exponent_ = -2.0;
    return p;
  }

  auto abs_hat = [&p](double z) { return std::abs(p.h_hat(z)); };
  p.tail_exponent_ = fitted_tail_slope(abs_hat, 1e2, 1e4);
  p.integrability_ = p.tail_exponent_ <= -1.1 ? Integrability::L1 : Integrability::L2Only;
  if (p.integrability_ == Integrability::L2Only) {
    p.l1_norm_ = std::numeric_limits<double>::infinity();
    return p;
  }

  // Cumulative int_0^z |h_hat| on [0, kTableEnd]; panels resolve the
  // oscillation frequencies present in h_hat (differences of atom positions).
  const double span = std::max(1.0, p.atoms_x_.back() - p.atoms_x_.front());
  const double width = std::min(1.0, 3.0 / span);
  const auto edges = quad::panel_edges(0.0, kTableEnd, width);
  const auto& rule = quad::gauss_legendre(8);
  p.table_z_.push_back(0.0);
  p.table_cum_.push_back(0.0);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    const double hw = 0.5 * (edges[i + 1] - edges[i]);
    for (int k = 0; k < 8; ++k) cum += hw * rule.weights[k] * abs_hat(c + hw * rule.nodes[k]);
    p.table_z_.push_back(edges[i + 1]);
    p.table_cum_.push_back(cum);
  }
  // Envelope A z^p dominating every sample of |h_hat| on [kTableEnd, 1e4].
  double scale = 0.0;
  const double pexp = p.tail_exponent_;
  const int samples = 20000;
  for (int k = 0; k <= samples; ++k) {
    const double z = kTableEnd * std::pow(1e4 / kTableEnd, static_cast<double>(k) / samples);
    scale = std::max(scale, abs_hat(z) * std::pow(z, -pexp));
  }
  p.envelope_scale_ = scale;
  p.l1_norm_ = p.tail_mass(0.0);
  return p;
}

}  // namespace wrp
