#pragma once

// Rank-one symmetric space X = G/K in horospherical (N̄A) coordinates.
//
// A point n̄(v, w)a(s)·o is stored as (v, w, s) with v ∈ R^m1, w ∈ R^m2.
// Its Cartan radius t = d(o, point) satisfies
//     cosh²t = (cosh s + e^s |v|²)² + e^{2s} |w|²,
// and conjugation by a(s0) dilates v by e^{-s0} and w by e^{-2 s0}.
// All Haar normalisation constants are 1; the Killing form is scaled so that
// Cartan radius equals geodesic distance.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rank1ks/errors.hpp"
#include "rank1ks/quadrature.hpp"

namespace rank1ks {

/// Root multiplicities of the space and the half-sum |ρ| = (m1 + 2 m2) / 2.
struct SpaceParams {
  int m1 = 1;
  int m2 = 0;
  double rho = 0.5;

  int dim() const { return m1 + m2 + 1; }
  bool operator==(const SpaceParams&) const = default;
};

inline SpaceParams make_space(int m1, int m2) {
  if (m1 < 1) throw InvalidArgument("m1 must be >= 1, got " + std::to_string(m1));
  if (m2 < 0) throw InvalidArgument("m2 must be >= 0, got " + std::to_string(m2));
  return SpaceParams{m1, m2, 0.5 * (m1 + 2 * m2)};
}

/// A point n̄(v, w)a(s)·o.
struct IwasawaPoint {
  std::vector<double> v;
  std::vector<double> w;
  double s = 0.0;
};

inline IwasawaPoint origin_point(const SpaceParams& sp) {
  return IwasawaPoint{std::vector<double>(sp.m1, 0.0), std::vector<double>(sp.m2, 0.0), 0.0};
}

namespace detail {

inline double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double xi : x) acc += xi * xi;
  return acc;
}

inline void check_shape(const SpaceParams& sp, const IwasawaPoint& p) {
  if (static_cast<int>(p.v.size()) != sp.m1 || static_cast<int>(p.w.size()) != sp.m2) {
    throw InvalidArgument("point coordinates do not match (m1, m2) = (" +
                          std::to_string(sp.m1) + ", " + std::to_string(sp.m2) + ")");
  }
}

}  // namespace detail

/// arccosh(1 + y) for y >= 0 without cancellation near y = 0.
inline double acosh1p(double y) {
  if (y <= 0.0) return 0.0;
  return std::log1p(y + std::sqrt(y * (2.0 + y)));
}

/// cosh(a) - cosh(b), evaluated as a product of sinh factors.
inline double cosh_diff(double a, double b) {
  return 2.0 * std::sinh(0.5 * (a + b)) * std::sinh(0.5 * (a - b));
}

/// Cartan radius from the squared norms |v|², |w|² and the A-coordinate.
inline double cartan_radius_sq(double v2, double w2, double s) {
  const double es = std::exp(s);
  // bracket - 1 = (cosh s - 1) + e^s |v|^2
  const double half = std::sinh(0.5 * s);
  const double bracket_m1 = 2.0 * half * half + es * v2;
  double x_m1 = bracket_m1;
  if (w2 > 0.0) {
    const double bracket = 1.0 + bracket_m1;
    const double extra = es * es * w2;
    // sqrt(B² + E) - B = E / (sqrt(B² + E) + B)
    x_m1 += extra / (std::sqrt(bracket * bracket + extra) + bracket);
  }
  const double t = acosh1p(x_m1);
  // Analytically t >= |s|; clamp away rounding.
  return std::max(t, std::fabs(s));
}

inline double cartan_radius(const SpaceParams& sp, const IwasawaPoint& p) {
  detail::check_shape(sp, p);
  return cartan_radius_sq(detail::norm2(p.v), detail::norm2(p.w), p.s);
}

/// a(s0) n̄(v, w) a(-s0) = n̄(e^{-s0} v, e^{-2 s0} w); the A-coordinate is kept.
inline IwasawaPoint conjugate_by_a(const IwasawaPoint& p, double s0) {
  IwasawaPoint q = p;
  const double ev = std::exp(-s0);
  const double ew = std::exp(-2.0 * s0);
  for (double& x : q.v) x *= ev;
  for (double& x : q.w) x *= ew;
  return q;
}

/// Distance between two points given through their coordinates, m2 = 0.
/// z^{-1} z' = n̄(e^{s}(v' - v)) a(s' - s).
inline double distance_coords(std::span<const double> v, double s, std::span<const double> vp,
                              double sp_s) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double dv = vp[i] - v[i];
    d2 += dv * dv;
  }
  return cartan_radius_sq(std::exp(2.0 * s) * d2, 0.0, sp_s - s);
}

inline double distance(const SpaceParams& sp, const IwasawaPoint& z, const IwasawaPoint& zp) {
  if (sp.m2 != 0) {
    throw UnsupportedSpace("point-level operations require m2 = 0");
  }
  detail::check_shape(sp, z);
  detail::check_shape(sp, zp);
  return distance_coords(z.v, z.s, zp.v, zp.s);
}

/// (sinh t)^m1 (sinh 2t)^m2, the radial part of Haar measure in polar form.
inline double radial_density(const SpaceParams& sp, double t) {
  if (t < 0.0) throw InvalidArgument("radial_density requires t >= 0");
  return std::pow(std::sinh(t), sp.m1) * std::pow(std::sinh(2.0 * t), sp.m2);
}

/// e^{2|ρ|s}, the A-weight of Haar measure in horospherical coordinates.
inline double iwasawa_weight(const SpaceParams& sp, double s) {
  return std::exp(2.0 * sp.rho * s);
}

/// |B(o, r)| = ∫_0^r radial_density(t) dt.
inline double ball_volume(const SpaceParams& sp, double r, double tol = 1e-12) {
  if (r < 0.0) throw InvalidArgument("ball_volume requires r >= 0");
  if (r == 0.0) return 0.0;
  auto f = [&](double t) { return radial_density(sp, t); };
  // Split at t = 1 so the small-r power law and the exponential tail are
  // resolved by separate panels.
  if (r <= 1.0) return quad::integrate(f, 0.0, r, tol);
  return quad::integrate(f, 0.0, 1.0, tol) + quad::integrate(f, 1.0, r, tol);
}

/// Surface area of the unit sphere S^{d-1} ⊂ R^d (d >= 1; S^0 has two points).
inline double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Ratio between the coordinate measure e^{2ρs} dv ds (m2 = 0) and
/// ball_volume: |B(o, r)|_coord = angular_constant · ball_volume(r).
///
/// With the (v, s) scaling used here the Riemannian volume form is
/// 2^{m1/2} e^{2ρs} dv ds, while polar coordinates give area(S^{m1}) sinh^{m1}t.
inline double angular_constant(const SpaceParams& sp) {
  if (sp.m2 != 0) throw UnsupportedSpace("point-level operations require m2 = 0");
  return sphere_area(sp.m1 + 1) / std::pow(2.0, 0.5 * sp.m1);
}

/// Coordinate measure of a geodesic ball (m2 = 0).
inline double coordinate_ball_measure(const SpaceParams& sp, double r) {
  return angular_constant(sp) * ball_volume(sp, r);
}

/// Map a point given in geodesic polar coordinates about o (radius r, unit
/// direction dir ∈ S^{m1} ⊂ R^{m1+1}) to horospherical coordinates, m2 = 0.
/// The last component of dir points along the A-axis towards s → -∞.
inline void polar_to_horospherical(double r, std::span<const double> dir, std::span<double> v,
                                   double& s) {
  const std::size_t m1 = v.size();
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  double d;  // cosh r - sinh r · dir[m1] > 0
  if (dir[m1] <= 0.0) {
    d = ch - sh * dir[m1];
  } else {
    double perp2 = 0.0;
    for (std::size_t i = 0; i < m1; ++i) perp2 += dir[i] * dir[i];
    d = (1.0 + sh * sh * perp2) / (ch + sh * dir[m1]);
  }
  s = std::log(d);
  const double scale = sh / (d * std::numbers::sqrt2);
  for (std::size_t i = 0; i < m1; ++i) v[i] = dir[i] * scale;
}

}  // namespace rank1ks
