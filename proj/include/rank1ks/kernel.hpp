#pragma once

// The slice kernel ψ(t, s): for a radial f with profile F,
//     e^{ρs} ∫_N̄ f(n̄ a(s)) dn̄ = κ ∫_{|s|}^∞ F(t) ψ(t, s) dt,
// with ψ normalised by the constant-free formula
//     ψ(t, s) = sinh t (cosh t)^{m2} ∫_{cosh s / cosh t}^1
//               (u cosh t - cosh s)^{(m1-2)/2} (1 - u²)^{(m2-2)/2} du
// for m2 >= 1, and ψ = sinh t (cosh t - cosh s)^{(m1-2)/2} for m2 = 0.
//
// Writing u = c + (1 - c)x with c = cosh s / cosh t turns the integral into
//     ψ = comparator(t, s) · J(c),
//     J(c) = ∫_0^1 x^α (1 - x)^β (1 + u)^β dx,  α = (m1-2)/2, β = (m2-2)/2,
// where comparator = sinh t (cosh t)^{m2/2} (cosh t - cosh s)^{(m1+m2-2)/2}.
// J is evaluated after the smoothstep map x = 3y² - 2y³, which leaves a
// bounded polynomial-type integrand for every (m1, m2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rank1ks/errors.hpp"
#include "rank1ks/geometry.hpp"
#include "rank1ks/parallel.hpp"
#include "rank1ks/quadrature.hpp"
#include "rank1ks/rearrange.hpp"

namespace rank1ks {

inline constexpr double kKernelTol = 1e-10;

namespace detail {

inline double signed_pow(double base, double e) {
  // 0^e with the limit conventions used for the comparator at t = |s|.
  if (base > 0.0) return std::pow(base, e);
  if (e > 0.0) return 0.0;
  if (e == 0.0) return 1.0;
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// J(c) for m2 >= 1; 1 when m2 = 0 (ψ equals the comparator there).
inline double psi_shape_factor(const SpaceParams& sp, double c, double tol = kKernelTol) {
  if (sp.m2 == 0) return 1.0;
  const double alpha = 0.5 * (sp.m1 - 2);
  const double beta = 0.5 * (sp.m2 - 2);
  const double one_minus_c = 1.0 - c;
  auto f = [&](double y) {
    const double x = y * y * (3.0 - 2.0 * y);
    const double u = c + one_minus_c * x;
    return 6.0 * std::pow(y, sp.m1 - 1) * std::pow(1.0 - y, sp.m2 - 1) *
           std::pow(3.0 - 2.0 * y, alpha) * std::pow(1.0 + 2.0 * y, beta) *
           std::pow(1.0 + u, beta);
  };
  return quad::integrate(f, 0.0, 1.0, tol);
}

/// sinh t (cosh t)^{m2/2} (cosh t - cosh s)^{(m1+m2-2)/2}, for t >= |s|.
inline double psi_comparator(const SpaceParams& sp, double t, double s) {
  const double as = std::fabs(s);
  if (t < as) throw InvalidArgument("psi_comparator requires t >= |s|");
  const double e = 0.5 * (sp.m1 + sp.m2 - 2);
  if (sp.m1 == 1 && sp.m2 == 0 && as == 0.0) {
    // sinh t / (cosh t - 1)^{1/2} = √2 cosh(t/2), including t = 0.
    return std::numbers::sqrt2 * std::cosh(0.5 * t);
  }
  const double d = cosh_diff(t, as);
  return std::sinh(t) * std::pow(std::cosh(t), 0.5 * sp.m2) * detail::signed_pow(d, e);
}

/// ψ(t, s); zero for t < |s|, even in s.
inline double psi(const SpaceParams& sp, double t, double s, double tol = kKernelTol) {
  const double as = std::fabs(s);
  if (t < as) return 0.0;
  const double comp = psi_comparator(sp, t, as);
  if (sp.m2 == 0) return comp;
  if (comp == 0.0) return 0.0;
  return comp * psi_shape_factor(sp, std::cosh(as) / std::cosh(t), tol);
}

/// Nonnegative step function of the Cartan radius: value values[i] on
/// [edges[i], edges[i+1]).
struct RadialFunction {
  std::vector<double> edges;
  std::vector<double> values;

  RadialFunction() = default;
  RadialFunction(std::vector<double> e, std::vector<double> v)
      : edges(std::move(e)), values(std::move(v)) {
    validate();
  }

  static RadialFunction indicator(double a, double b) { return RadialFunction({a, b}, {1.0}); }
  static RadialFunction ball(double r) { return indicator(0.0, r); }

  /// Indicator of a union of intervals.
  static RadialFunction from_intervals(const IntervalSet& set) {
    const IntervalSet n = normalize_intervals(set);
    RadialFunction f;
    for (const auto& [a, b] : n) {
      if (f.edges.empty()) {
        f.edges.push_back(a);
      } else if (f.edges.back() < a) {
        f.edges.push_back(a);
        f.values.push_back(0.0);
      }
      f.edges.push_back(b);
      f.values.push_back(1.0);
    }
    f.validate();
    return f;
  }

  void validate() const {
    if (edges.size() != values.size() + 1 && !(edges.empty() && values.empty())) {
      throw InvalidArgument("radial function needs one value per interval");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (!(edges[i] >= 0.0) || !(edges[i + 1] > edges[i]) || !std::isfinite(edges[i + 1])) {
        throw InvalidArgument("radial function edges must increase within [0, inf)");
      }
    }
    for (double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("radial values must be >= 0");
    }
  }

  std::size_t steps() const { return values.size(); }
  double support_radius() const { return edges.empty() ? 0.0 : edges.back(); }

  double operator()(double t) const {
    for (std::size_t i = 0; i < steps(); ++i) {
      if (t >= edges[i] && t < edges[i + 1]) return values[i];
    }
    return 0.0;
  }

  bool is_indicator() const {
    for (double v : values) {
      if (v != 0.0 && v != 1.0) return false;
    }
    return true;
  }
};

namespace detail {

/// ∫_lo^hi ψ(t, s) dt for |s| <= lo < hi.
inline double psi_integral(const SpaceParams& sp, double lo, double hi, double as, double tol) {
  if (!(hi > lo)) return 0.0;
  if (sp.m2 == 0) {
    // d/dt [(cosh t - cosh s)^{m1/2} / (m1/2)] = ψ(t, s).
    const double p = 0.5 * sp.m1;
    auto prim = [&](double t) { return std::pow(cosh_diff(t, as), p) / p; };
    return prim(hi) - prim(lo);
  }
  auto f = [&](double t) { return psi(sp, t, as, tol * 0.1); };
  return quad::integrate_smoothed(f, lo, hi, tol);
}

}  // namespace detail

/// ∫_{|s|}^∞ F(t) ψ(t, s) dt; exact per step when m2 = 0.
inline double abel_transform(const SpaceParams& sp, const RadialFunction& F, double s,
                             double tol = 1e-9) {
  const double as = std::fabs(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < F.steps(); ++i) {
    if (F.values[i] == 0.0) continue;
    const double lo = std::max(F.edges[i], as);
    const double hi = F.edges[i + 1];
    if (hi <= lo) continue;
    acc += F.values[i] * detail::psi_integral(sp, lo, hi, as, tol);
  }
  return acc;
}

/// ∫ F(t) radial_density(t) dt, the measure-side integral of a radial F.
inline double radial_integral(const SpaceParams& sp, const RadialFunction& F) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.steps(); ++i) {
    if (F.values[i] == 0.0) continue;
    acc += F.values[i] * (ball_volume(sp, F.edges[i + 1]) - ball_volume(sp, F.edges[i]));
  }
  return acc;
}

/// Distribution of a radial step function as weighted samples (weight =
/// radial measure of each step). Zero-value steps are dropped.
inline WeightedSamples radial_samples(const SpaceParams& sp, const RadialFunction& F) {
  std::vector<Sample> e;
  for (std::size_t i = 0; i < F.steps(); ++i) {
    if (F.values[i] == 0.0) continue;
    const double w = ball_volume(sp, F.edges[i + 1]) - ball_volume(sp, F.edges[i]);
    if (w > 0.0) e.push_back({F.values[i], w});
  }
  return WeightedSamples(std::move(e));
}

/// L^{2,1} quasinorm of a radial function on G (radial measure, unit constants).
inline double radial_l21_norm(const SpaceParams& sp, const RadialFunction& F) {
  const WeightedSamples w = radial_samples(sp, F);
  return w.size() == 0 ? 0.0 : lorentz_norm(w, 2.0, 1.0);
}

struct AbelBound {
  double sup_lhs = 0.0;
  double argmax_s = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? sup_lhs / rhs : 0.0; }
};

/// sup over s in s_grid of abel_transform(F, s) against (∫ F radial_density)^{1/2}.
inline AbelBound abel_l21_bound(const SpaceParams& sp, const RadialFunction& F,
                                const std::vector<double>& s_grid, double tol = 1e-9) {
  if (!F.is_indicator()) throw InvalidArgument("abel_l21_bound expects a {0,1}-valued profile");
  AbelBound out;
  out.rhs = std::sqrt(radial_integral(sp, F));
  for (double s : s_grid) {
    const double v = abel_transform(sp, F, s, tol);
    if (v > out.sup_lhs) {
      out.sup_lhs = v;
      out.argmax_s = s;
    }
  }
  return out;
}

/// The weight of the rearranged trilinear bound: u^{m1+m2} for u <= 1 and
/// e^{ρu} beyond.
inline double phi_weight(const SpaceParams& sp, double u) {
  if (u < 0.0) throw InvalidArgument("phi_weight requires u >= 0");
  if (u <= 1.0) return std::pow(u, sp.m1 + sp.m2);
  return std::exp(sp.rho * u);
}

struct PhiSupCheck {
  double sup_value = 0.0;
  double argmax_r = 0.0;
  double phi = 0.0;
  double ratio() const { return phi > 0.0 ? sup_value / phi : 0.0; }
};

/// sup_{r ∈ [-u, u]} e^{-ρr} ∫_{-u}^{r} ψ(u, s) e^{ρs} ds on an n_r-point grid.
inline PhiSupCheck phi_sup_identity_check(const SpaceParams& sp, double u, int n_r = 64,
                                          double tol = 1e-10) {
  if (!(u > 0.0)) throw InvalidArgument("phi_sup_identity_check requires u > 0");
  if (n_r < 2) throw InvalidArgument("need at least two r-grid points");
  PhiSupCheck out;
  out.phi = phi_weight(sp, u);
  auto f = [&](double s) { return psi(sp, u, s, tol) * std::exp(sp.rho * s); };
  double cumulative = 0.0;
  double prev = -u;
  for (int i = 1; i < n_r; ++i) {
    const double r = -u + 2.0 * u * i / (n_r - 1);
    cumulative += quad::integrate_smoothed(f, prev, r, tol);
    prev = r;
    const double v = std::exp(-sp.rho * r) * cumulative;
    if (v > out.sup_value) {
      out.sup_value = v;
      out.argmax_r = r;
    }
  }
  return out;
}

enum class KernelMethod { closed_form_m2_0, quadrature, monte_carlo };

inline std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::closed_form_m2_0: return "closed_form_m2_0";
    case KernelMethod::quadrature: return "quadrature";
    case KernelMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct KernelTable {
  SpaceParams sp;
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::vector<double> values;      // t-major: values[i * s_grid.size() + j]
  std::vector<double> comparator;  // NaN where t < |s|
  KernelMethod method = KernelMethod::closed_form_m2_0;

  double at(std::size_t i, std::size_t j) const { return values[i * s_grid.size() + j]; }
};

inline KernelTable build_kernel_table(const SpaceParams& sp, std::vector<double> t_grid,
                                      std::vector<double> s_grid, double tol = kKernelTol) {
  KernelTable tab{sp, std::move(t_grid), std::move(s_grid), {}, {},
                  sp.m2 == 0 ? KernelMethod::closed_form_m2_0 : KernelMethod::quadrature};
  const std::size_t ns = tab.s_grid.size();
  tab.values.assign(tab.t_grid.size() * ns, 0.0);
  tab.comparator.assign(tab.t_grid.size() * ns, std::numeric_limits<double>::quiet_NaN());
  parallel_for(tab.t_grid.size(), [&](std::size_t i) {
    const double t = tab.t_grid[i];
    for (std::size_t j = 0; j < ns; ++j) {
      const double s = tab.s_grid[j];
      tab.values[i * ns + j] = psi(sp, t, s, tol);
      if (t >= std::fabs(s)) tab.comparator[i * ns + j] = psi_comparator(sp, t, s);
    }
  });
  return tab;
}

/// Ratio between the Monte Carlo slice measure and ∫ψ: σ_{m1-1}/2 times
/// σ_{m2-1} when m2 >= 1 (σ_{d-1} is the area of the unit sphere in R^d).
inline double surface_constant(const SpaceParams& sp) {
  const double k = 0.5 * sphere_area(sp.m1);
  return sp.m2 == 0 ? k : k * sphere_area(sp.m2);
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t hits = 0;
};

namespace detail {

/// Uniform point in the unit ball of R^d, written into out.
inline void uniform_in_ball(Rng& rng, std::span<double> out) {
  const std::size_t d = out.size();
  if (d == 0) return;
  double n2;
  do {
    n2 = 0.0;
    for (double& x : out) {
      x = 2.0 * uniform01(rng) - 1.0;
      n2 += x * x;
    }
  } while (n2 > 1.0 || (d > 3 && n2 == 0.0));
  if (d <= 3) return;
  // Rejection from the cube is wasteful for d > 3; rescale the accepted
  // direction with an exact radial draw instead.
  const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(d));
  const double k = r / std::sqrt(n2);
  for (double& x : out) x *= k;
}

}  // namespace detail

/// Slice-measure histogram: for each bin [edges[b], edges[b+1]) estimates
///     e^{ρs} |{(v, w) : cartan_radius(v, w, s) ∈ bin}| / |bin|,
/// which equals κ times the bin average of ψ(·, s). Samples are drawn
/// uniformly from the product of balls |v| <= Rv, |w| <= Rw that encloses
/// {t <= edges.back()}.
inline std::vector<McEstimate> surface_mc_bins(const SpaceParams& sp,
                                               const std::vector<double>& edges, double s,
                                               std::uint64_t n_samples, std::uint64_t seed) {
  if (edges.size() < 2) throw InvalidArgument("need at least one bin");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw InvalidArgument("bins must be nonempty");
  }
  if (n_samples < 1000) throw InvalidArgument("surface_mc needs at least 10^3 samples");
  const std::size_t nb = edges.size() - 1;
  std::vector<McEstimate> out(nb);
  const double as = std::fabs(s);
  const double tmax = edges.back();
  if (tmax <= as) return out;

  const double es = std::exp(-s);
  const double dmax = cosh_diff(tmax, as);
  const double rv = std::sqrt(es * dmax);
  const double rw = es * std::sqrt(dmax * (std::cosh(tmax) + std::cosh(as)));
  const double volume = unit_ball_volume(sp.m1) * std::pow(rv, sp.m1) *
                        (sp.m2 > 0 ? unit_ball_volume(sp.m2) * std::pow(rw, sp.m2) : 1.0);

  const ChunkPlan plan{n_samples, 1u << 16};
  auto counts = parallel_map<std::vector<std::uint64_t>>(plan.count(), [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    std::vector<std::uint64_t> h(nb, 0);
    std::vector<double> v(sp.m1), w(sp.m2);
    for (std::uint64_t i = plan.begin(c); i < plan.end(c); ++i) {
      detail::uniform_in_ball(rng, v);
      detail::uniform_in_ball(rng, w);
      const double t = cartan_radius_sq(rv * rv * detail::norm2(v), rw * rw * detail::norm2(w), s);
      if (t < edges.front() || t >= tmax) continue;
      const auto it = std::upper_bound(edges.begin(), edges.end(), t);
      ++h[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
    return h;
  });
  std::vector<std::uint64_t> total(nb, 0);
  for (const auto& h : counts) {
    for (std::size_t b = 0; b < nb; ++b) total[b] += h[b];
  }
  const double n = static_cast<double>(n_samples);
  const double scale = volume * std::exp(sp.rho * s);
  for (std::size_t b = 0; b < nb; ++b) {
    const double p = static_cast<double>(total[b]) / n;
    const double width = edges[b + 1] - edges[b];
    out[b].hits = total[b];
    out[b].estimate = scale * p / width;
    out[b].stderr_ = scale * std::sqrt(p * (1.0 - p) / n) / width;
  }
  return out;
}

inline McEstimate surface_mc(const SpaceParams& sp, double t_lo, double t_hi, double s,
                             std::uint64_t n_samples, std::uint64_t seed) {
  return surface_mc_bins(sp, {t_lo, t_hi}, s, n_samples, seed).front();
}

/// Bin average of ψ(·, s) over [lo, hi).
inline double psi_bin_average(const SpaceParams& sp, double lo, double hi, double s,
                              double tol = 1e-10) {
  return abel_transform(sp, RadialFunction::indicator(lo, hi), s, tol) / (hi - lo);
}

}  // namespace rank1ks
