#include "wrp/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "wrp/errors.hpp"

namespace wrp::quad {

namespace {

Rule build_rule(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1 || n > 256) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

void append_composite(std::span<const double> edges, int n, std::vector<double>& x,
                      std::vector<double>& w) {
  const Rule& rule = gauss_legendre(n);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    const double h = 0.5 * (edges[i + 1] - edges[i]);
    if (!(h > 0.0)) continue;
    for (int k = 0; k < n; ++k) {
      x.push_back(c + h * rule.nodes[k]);
      w.push_back(h * rule.weights[k]);
    }
  }
}

std::vector<double> panel_edges(double a, double b, double max_width,
                                std::span<const double> breakpoints) {
  if (!(b > a) || !(max_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "panel_edges: empty interval or width");
  }
  std::vector<double> cuts{a, b};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> edges;
  edges.push_back(cuts.front());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int m = std::max(1, static_cast<int>(std::ceil(len / max_width - 1e-12)));
    for (int k = 1; k < m; ++k) edges.push_back(cuts[i] + len * k / m);
    edges.push_back(cuts[i + 1]);
  }
  return edges;
}

}  // namespace wrp::quad
