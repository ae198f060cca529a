#pragma once

// Closed-form references used by the tests. Nothing here calls the library.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline double vq(double vm, double ds, double s) {
  if (s <= ds) return 0.0;
  const double u = s - ds;
  return vm * u * u / (1.0 + u * u);
}

inline double vq_prime(double vm, double ds, double s) {
  if (s <= ds) return 0.0;
  const double u = s - ds;
  return 2.0 * vm * u / ((1.0 + u * u) * (1.0 + u * u));
}

// Roots of h vm c^2/(1+c^2) = c with c > 0, d_s = 0: c^2 - h vm c + 1 = 0.
inline double quad_small(double h, double vm) {
  const double a = h * vm / 2.0;
  return 1.0 / (a + std::sqrt(a * a - 1.0));
}

inline double quad_large(double h, double vm) {
  const double a = h * vm / 2.0;
  return a + std::sqrt(a * a - 1.0);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::complex<double> chi(double alpha, double beta, std::complex<double> l) {
  return l * l + alpha * l + beta * (1.0 - std::exp(-l));
}

inline double c1_alpha(double nu) { return -nu / std::tan(nu / 2.0); }

inline double c1_beta(double nu) {
  const double s = std::sin(nu / 2.0);
  return nu * nu / (2.0 * s * s);
}

// nu in (0, pi) with c1_alpha(nu) = alpha, for -2 < alpha < 0.
inline double c1_nu(double alpha) {
  return bisect([&](double nu) { return c1_alpha(nu) - alpha; }, 1e-12,
                std::numbers::pi - 1e-15);
}

// First-branch beta along h for V_q with d_s = 0.
inline double branch1_beta(double h, double vm) {
  const double c = quad_small(h, vm);
  return h * h * vq_prime(vm, 0.0, c);
}

}  // namespace oracle
