#pragma once

// Reference values computed without the library: the law of
// X_t = sigma B_t - Gamma_t is written as a Gaussian mixed over the Gamma
// variable, and transforms are integrated with Boost quadrature.

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using cplx = std::complex<double>;

struct Model {
  double sigma = 1.0;
  double alpha = 1.0;
  double beta = 1.0;  // beta = 0: Brownian motion only
};

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// E G(Gamma_t), Gamma_t ~ Gamma(shape beta t, rate alpha), as an integral over
/// the quantile q in (0, 1).
template <class G>
double gamma_mixture(const Model& m, double t, G&& g) {
  if (m.beta == 0.0) return g(0.0);
  const double a = m.beta * t;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double q) {
    const double y = boost::math::gamma_p_inv(a, q) / m.alpha;
    return g(y);
  };
  return ts.integrate(f, 0.0, 1.0, 1e-13);
}

/// Transition density of X_t at x.
inline double density(const Model& m, double t, double x) {
  const double s = m.sigma * std::sqrt(t);
  return gamma_mixture(m, t, [&](double y) { return norm_pdf((x + y) / s) / s; });
}

/// P(X_t <= K).
inline double cdf(const Model& m, double t, double K) {
  const double s = m.sigma * std::sqrt(t);
  return gamma_mixture(m, t, [&](double y) { return norm_cdf((K + y) / s); });
}

/// E (K - X_t)^+.
inline double put(const Model& m, double t, double K) {
  const double s = m.sigma * std::sqrt(t);
  return gamma_mixture(m, t, [&](double y) {
    const double c = K + y;
    return c * norm_cdf(c / s) + s * norm_pdf(c / s);
  });
}

inline cplx psi(const Model& m, cplx l) {
  cplx v = 0.5 * m.sigma * m.sigma * l * l;
  if (m.beta != 0.0) v -= m.beta * std::log(1.0 + l / m.alpha);
  return v;
}

inline cplx dpsi(const Model& m, cplx l) {
  cplx v = m.sigma * m.sigma * l;
  if (m.beta != 0.0) v -= m.beta / (m.alpha + l);
  return v;
}

/// F(w) = int k(w, z) h_hat(z) dz for the put (K - x)^+ and real w, with
/// h_hat(z) = e^{K(zeta+iz)} / (2 pi (zeta+iz)^2).
inline double inner_transform_put(const Model& m, double K, double zeta, double w) {
  const cplx pw = psi(m, w);
  const cplx dw = dpsi(m, w);
  auto f = [&](double z) {
    const cplx s(zeta, z);
    const cplx k = dw / (pw - psi(m, -s)) - 1.0 / (w + s);
    const cplx h = std::exp(K * s) / (2.0 * std::numbers::pi * s * s);
    return 2.0 * (k * h).real();  // the integrand at -z is the conjugate
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  const double edges[] = {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0};
  for (std::size_t i = 0; i + 1 < std::size(edges); ++i) {
    total += GK::integrate(f, edges[i], edges[i + 1], 15, 1e-14);
  }
  return total;
}

}  // namespace oracle
