#pragma once

// Thin wrappers over Boost's adaptive Gauss-Kronrod rule.

#include <cmath>
#include <type_traits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rank1ks::quad {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr unsigned kMaxDepth = 20;

/// Adaptive G7K15 on [a, b] with relative tolerance tol.
template <class F>
double integrate(F&& f, double a, double b, double tol = kDefaultTol) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kMaxDepth, tol);
}

/// Integrates f over [a, b] after the change of variables
/// x = a + (b - a)(3y^2 - 2y^3), whose Jacobian vanishes linearly at both
/// ends. Integrable endpoint singularities of order (x - a)^(-1/2) become
/// bounded, and square-root kinks become smooth.
///
/// f is called either as f(x) or, when it accepts three arguments, as
/// f(x, x - a, b - x) with both offsets computed without cancellation.
template <class F>
double integrate_smoothed(F&& f, double a, double b, double tol = kDefaultTol) {
  if (!(b > a)) return 0.0;
  const double w = b - a;
  auto g = [&](double y) {
    const double jac = 6.0 * w * y * (1.0 - y);
    if (jac == 0.0) return 0.0;
    const double xa = w * y * y * (3.0 - 2.0 * y);
    const double xb = w * (1.0 - y) * (1.0 - y) * (1.0 + 2.0 * y);
    if constexpr (std::is_invocable_v<F, double, double, double>) {
      return f(a + xa, xa, xb) * jac;
    } else {
      return f(a + xa) * jac;
    }
  };
  return integrate(g, 0.0, 1.0, tol);
}

}  // namespace rank1ks::quad
