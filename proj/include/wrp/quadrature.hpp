#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

namespace wrp::quad {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (Newton iteration on P_n).
const Rule& gauss_legendre(int n);

/// Appends the n-point rule mapped onto each [edges[i], edges[i+1]].
void append_composite(std::span<const double> edges, int n, std::vector<double>& x,
                      std::vector<double>& w);

/// Edges of a partition of [a, b] into panels no wider than max_width, with
/// every breakpoint inside (a, b) honoured.
std::vector<double> panel_edges(double a, double b, double max_width,
                                std::span<const double> breakpoints = {});

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// Nodes of the 15-point Kronrod rule mapped onto [a, b], in the order the
/// weights below expect: x_c - h*xgk[0], x_c + h*xgk[0], ..., x_c.
inline std::array<double, 15> kronrod_nodes(double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> out{};
  for (int j = 0; j < 7; ++j) {
    out[2 * j] = c - h * kXgk[j];
    out[2 * j + 1] = c + h * kXgk[j];
  }
  out[14] = c;
  return out;
}

/// Kronrod and Gauss weights aligned with kronrod_nodes (scaled by h).
inline std::array<double, 15> kronrod_weights(double a, double b) {
  const double h = 0.5 * (b - a);
  std::array<double, 15> out{};
  for (int j = 0; j < 7; ++j) out[2 * j] = out[2 * j + 1] = h * kWgk[j];
  out[14] = h * kWgk[7];
  return out;
}

inline std::array<double, 15> gauss7_weights(double a, double b) {
  const double h = 0.5 * (b - a);
  std::array<double, 15> out{};
  // Gauss nodes are the odd-indexed Kronrod abscissae xgk[1], xgk[3], xgk[5], 0.
  out[2] = out[3] = h * kWg[0];
  out[6] = out[7] = h * kWg[1];
  out[10] = out[11] = h * kWg[2];
  out[14] = h * kWg[3];
  return out;
}

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
struct PanelResult {
  T value{};
  double error = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// One G7K15 panel with the QUADPACK error heuristic.
template <class F>
auto gk15(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const auto x = kronrod_nodes(a, b);
  const auto wk = kronrod_weights(a, b);
  const auto wg = gauss7_weights(a, b);
  std::array<T, 15> fx{};
  T k{};
  T g{};
  double resabs = 0.0;
  for (int i = 0; i < 15; ++i) {
    fx[i] = f(x[i]);
    k += wk[i] * fx[i];
    g += wg[i] * fx[i];
    resabs += wk[i] * magnitude(fx[i]);
  }
  const T mean = k / (b - a);
  double resasc = 0.0;
  for (int i = 0; i < 15; ++i) resasc += wk[i] * magnitude(fx[i] - mean);
  double err = magnitude(k - g);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return PanelResult<T>{k, err, a, b};
}

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

template <class T>
struct AdaptiveResult {
  T value{};
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive G7K15 integration over the partition given by `edges`
/// (at least two increasing points). The worst panel is bisected until the
/// summed error estimate meets max(abs_tol, rel_tol * |I|).
template <class F>
auto integrate_adaptive(F&& f, std::span<const double> edges, const AdaptiveOptions& opt = {}) {
  using T = std::decay_t<decltype(f(edges[0]))>;
  using Panel = PanelResult<T>;
  auto cmp = [](const Panel& l, const Panel& r) { return l.error < r.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    Panel p = gk15(f, edges[i], edges[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  AdaptiveResult<T> out;
  int panels = static_cast<int>(heap.size());
  while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * magnitude(total)) &&
         panels < opt.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum from the panels so cancellation in the running total does not leak.
  T resum{};
  double err_sum = 0.0;
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const auto& p : all) {
    resum += p.value;
    err_sum += p.error;
  }
  out.value = resum;
  out.error = err_sum;
  out.panels = panels;
  out.converged = err_sum <= std::max(opt.abs_tol, opt.rel_tol * magnitude(resum));
  return out;
}

}  // namespace wrp::quad
