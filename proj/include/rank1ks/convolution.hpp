#pragma once

// The trilinear form ∫∫ f(z) g(z^{-1}z') h(z') dz' dz and the chain of
// upper bounds that controls it.
//
// Two tiers:
//  * Physical space (m2 = 0): Monte Carlo over pairs (z, z') for
//    bi-invariant triples, with z, z' drawn uniformly from the supports of
//    f and h.
//  * Discrete surrogate: K is replaced by n_K equal atoms, the A-line by a
//    uniform grid, and the N̄-integrated data F1, H1, G1 are arrays. The
//    Step 1 / Step 2 / rearranged / split bounds are then exact finite sums
//    built on the true kernel ψ.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rank1ks/errors.hpp"
#include "rank1ks/geometry.hpp"
#include "rank1ks/kernel.hpp"
#include "rank1ks/parallel.hpp"
#include "rank1ks/rearrange.hpp"

namespace rank1ks {

// ---------------------------------------------------------------------------
// Physical-space Monte Carlo (real hyperbolic spaces)

namespace detail {

/// Radius of a uniform point of B(o, R): proposal sinh r = sinh R · U^{1/m1},
/// accepted with probability tanh r.
inline double sample_ball_radius(Rng& rng, int m1, double R) {
  const double shr = std::sinh(R);
  for (;;) {
    const double x = shr * std::pow(uniform01(rng), 1.0 / m1);
    const double r = std::asinh(x);
    if (uniform01(rng) < std::tanh(r)) return r;
  }
}

/// Uniform point of B(o, R) in horospherical coordinates; v must have m1 slots.
inline double sample_ball_point(Rng& rng, int m1, double R, std::span<double> v,
                                std::vector<double>& dir) {
  const double r = sample_ball_radius(rng, m1, R);
  double n2;
  do {
    uniform_in_ball(rng, dir);
    n2 = norm2(dir);
  } while (n2 < 1e-12);
  const double k = 1.0 / std::sqrt(n2);
  for (double& x : dir) x *= k;
  double s;
  polar_to_horospherical(r, dir, v, s);
  return s;
}

}  // namespace detail

/// Coordinate-measure L^{2,1} quasinorm of a radial function (m2 = 0).
inline double coordinate_l21_norm(const SpaceParams& sp, const RadialFunction& F) {
  return radial_l21_norm(sp, F) * std::sqrt(angular_constant(sp));
}

/// Coordinate-measure L² norm of a radial function (m2 = 0).
inline double coordinate_l2_norm(const SpaceParams& sp, const RadialFunction& F) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.steps(); ++i) {
    if (F.values[i] == 0.0) continue;
    acc += F.values[i] * F.values[i] *
           (ball_volume(sp, F.edges[i + 1]) - ball_volume(sp, F.edges[i]));
  }
  return std::sqrt(acc * angular_constant(sp));
}

struct TrilinearSample {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
  std::uint64_t nonzero = 0;
};

inline constexpr std::uint64_t kMcChunk = 1u << 16;

/// Calls visit(acc, t_z, t_zp, d) for n_samples independent pairs
/// z ~ U(B(o, Rf)), z' ~ U(B(o, Rh)); t_z, t_zp are Cartan radii and
/// d = d(z, z'). Each chunk owns an accumulator from make_acc(); the
/// accumulators come back in chunk order.
template <class Acc, class MakeAcc, class Visit>
std::vector<Acc> sample_pairs(const SpaceParams& sp, double rf, double rh, std::uint64_t n_samples,
                              std::uint64_t seed, MakeAcc&& make_acc, Visit&& visit) {
  const ChunkPlan plan{n_samples, kMcChunk};
  return parallel_map<Acc>(plan.count(), [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    Acc acc = make_acc();
    std::vector<double> v(sp.m1), vp(sp.m1), dir(sp.m1 + 1);
    for (std::uint64_t i = plan.begin(c); i < plan.end(c); ++i) {
      const double s = detail::sample_ball_point(rng, sp.m1, rf, v, dir);
      const double sp_ = detail::sample_ball_point(rng, sp.m1, rh, vp, dir);
      const double tz = cartan_radius_sq(detail::norm2(v), 0.0, s);
      const double tzp = cartan_radius_sq(detail::norm2(vp), 0.0, sp_);
      const double d = distance_coords(v, s, vp, sp_);
      visit(acc, tz, tzp, d);
    }
    return acc;
  });
}

/// Monte Carlo value of ∫∫ f(z) g(z^{-1}z') h(z') dz' dz for radial f, g, h.
inline McEstimate trilinear_mc(const SpaceParams& sp, const RadialFunction& f,
                               const RadialFunction& g, const RadialFunction& h,
                               std::uint64_t n_samples, std::uint64_t seed) {
  if (sp.m2 != 0) throw UnsupportedSpace("point-level operations require m2 = 0");
  const double rf = f.support_radius();
  const double rh = h.support_radius();
  if (!(rf > 0.0) || !(rh > 0.0)) return {};
  if (n_samples < 2) throw InvalidArgument("trilinear_mc needs at least two samples");
  auto parts = sample_pairs<TrilinearSample>(
      sp, rf, rh, n_samples, seed, [] { return TrilinearSample{}; },
      [&](TrilinearSample& a, double tz, double tzp, double d) {
        const double y = f(tz) * g(d) * h(tzp);
        a.sum += y;
        a.sum_sq += y * y;
        ++a.n;
        if (y != 0.0) ++a.nonzero;
      });
  TrilinearSample tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sum_sq += p.sum_sq;
    tot.n += p.n;
    tot.nonzero += p.nonzero;
  }
  const double n = static_cast<double>(tot.n);
  const double mean = tot.sum / n;
  const double var = std::max(0.0, tot.sum_sq / n - mean * mean);
  const double vol = coordinate_ball_measure(sp, rf) * coordinate_ball_measure(sp, rh);
  McEstimate out;
  out.estimate = vol * mean;
  out.stderr_ = vol * std::sqrt(var / (n - 1.0));
  out.hits = tot.nonzero;
  return out;
}

struct EndpointRow {
  double radius = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double norm_product = 0.0;
  double ratio = 0.0;
  double rel_stderr() const { return estimate > 0.0 ? stderr_ / estimate : 0.0; }
};

/// Ratio T(χ_{B_R}, χ_{B_R}, χ_{B_R}) / ‖χ_{B_R}‖³_{2,1} for each R.
inline std::vector<EndpointRow> endpoint_ratio_sweep(const SpaceParams& sp,
                                                     const std::vector<double>& radii,
                                                     std::uint64_t n_samples, std::uint64_t seed) {
  std::vector<EndpointRow> rows;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const RadialFunction b = RadialFunction::ball(radii[i]);
    const McEstimate e = trilinear_mc(sp, b, b, b, n_samples, stream_seed(seed, i));
    const double n = coordinate_l21_norm(sp, b);
    rows.push_back({radii[i], e.estimate, e.stderr_, n * n * n, e.estimate / (n * n * n)});
  }
  return rows;
}

struct SharpnessRow {
  int layers = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double g_l2 = 0.0;
  double g_l21 = 0.0;
  double ratio_l2 = 0.0;   // T / (‖f‖_{2,1} ‖g‖_2 ‖h‖_{2,1})
  double ratio_l21 = 0.0;  // T / (‖f‖_{2,1} ‖g‖_{2,1} ‖h‖_{2,1})
};

/// Layered g_J = Σ_{j<J} e^{-ρj}/(1+j) χ_{[j,j+1)}, f = h = χ_{B_R}; all J
/// share one sample stream so the rows differ only through g.
inline RadialFunction layered_profile(const SpaceParams& sp, int layers) {
  std::vector<double> e(static_cast<std::size_t>(layers) + 1);
  std::vector<double> v(static_cast<std::size_t>(layers));
  for (int j = 0; j <= layers; ++j) e[j] = j;
  for (int j = 0; j < layers; ++j) v[j] = std::exp(-sp.rho * j) / (1.0 + j);
  return RadialFunction(std::move(e), std::move(v));
}

inline std::vector<SharpnessRow> sharpness_probe(const SpaceParams& sp, double R, int max_layers,
                                                 std::uint64_t n_samples, std::uint64_t seed) {
  if (sp.m2 != 0) throw UnsupportedSpace("point-level operations require m2 = 0");
  if (max_layers < 1) throw InvalidArgument("need at least one layer");
  using Hist = std::vector<std::uint64_t>;
  const std::size_t nl = static_cast<std::size_t>(max_layers);
  auto parts = sample_pairs<Hist>(
      sp, R, R, n_samples, seed, [&] { return Hist(nl, 0); },
      [&](Hist& hst, double, double, double d) {
        const auto j = static_cast<std::size_t>(std::floor(d));
        if (j < nl) ++hst[j];
      });
  Hist counts(nl, 0);
  for (const auto& p : parts) {
    for (std::size_t j = 0; j < nl; ++j) counts[j] += p[j];
  }
  const double vol = std::pow(coordinate_ball_measure(sp, R), 2);
  const double nf = coordinate_l21_norm(sp, RadialFunction::ball(R));
  const double n = static_cast<double>(n_samples);
  std::vector<SharpnessRow> rows;
  for (int J = 1; J <= max_layers; ++J) {
    const RadialFunction g = layered_profile(sp, J);
    // Pairs are independent, so the per-sample value Σ a_j [d ∈ layer j]
    // has mean Σ a_j p_j and second moment Σ a_j² p_j.
    double mean = 0.0;
    double second = 0.0;
    for (int j = 0; j < J; ++j) {
      const double p = static_cast<double>(counts[j]) / n;
      mean += g.values[j] * p;
      second += g.values[j] * g.values[j] * p;
    }
    SharpnessRow row;
    row.layers = J;
    row.estimate = vol * mean;
    row.stderr_ = vol * std::sqrt(std::max(0.0, second - mean * mean) / (n - 1.0));
    row.g_l2 = coordinate_l2_norm(sp, g);
    row.g_l21 = coordinate_l21_norm(sp, g);
    row.ratio_l2 = row.estimate / (nf * row.g_l2 * nf);
    row.ratio_l21 = row.estimate / (nf * row.g_l21 * nf);
    rows.push_back(row);
  }
  return rows;
}

/// Σ_n Σ_{n'} a(n) b(n' - n) c(n') on Z/N against (Σ b) · min(Σ a, Σ c).
inline InequalitySides min_young_check(std::span<const double> a, std::span<const double> b,
                                       std::span<const double> c) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n || n == 0) {
    throw InvalidArgument("min_young_check needs three functions on the same group");
  }
  for (auto span : {a, b, c}) {
    for (double x : span) {
      if (!(x >= 0.0) || x > 1.0) throw InvalidArgument("values must lie in [0, 1]");
    }
  }
  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) lhs += a[i] * b[(j + n - i) % n] * c[j];
  }
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  const double sc = std::accumulate(c.begin(), c.end(), 0.0);
  return {lhs, sb * std::min(sa, sc)};
}

// ---------------------------------------------------------------------------
// Discrete surrogate

/// Finite model of the data entering the chain.
///
/// t_i = -T + i h (i < n_t), h = 2T / (n_t - 1); offsets σ = i' - i give
/// s = σ h. The u-axis is cut into cells [j h, (j + 1) h), j < n_u.
/// gtilde(k, k', j) is g(k^{-1} a(u) k') on cell j; G1(k, k', j, σ) is its
/// surface average, zero when the cell lies below |s|.
struct DiscreteModel {
  int n_k = 1;
  int n_t = 2;
  int n_u = 2;
  double T = 1.0;
  std::vector<double> F1;      // [k][i]
  std::vector<double> H1;      // [k'][i]
  std::vector<double> gtilde;  // [k][k'][j]
  std::vector<double> G1;      // [k][k'][j][σ + n_t - 1]

  double h() const { return 2.0 * T / (n_t - 1); }
  double t(int i) const { return -T + i * h(); }
  int n_sigma() const { return 2 * n_t - 1; }
  double weight() const { return 1.0 / n_k; }

  double& f1(int k, int i) { return F1[static_cast<std::size_t>(k) * n_t + i]; }
  double f1(int k, int i) const { return F1[static_cast<std::size_t>(k) * n_t + i]; }
  double& h1(int k, int i) { return H1[static_cast<std::size_t>(k) * n_t + i]; }
  double h1(int k, int i) const { return H1[static_cast<std::size_t>(k) * n_t + i]; }
  std::size_t gt_index(int k, int kp, int j) const {
    return (static_cast<std::size_t>(k) * n_k + kp) * n_u + j;
  }
  std::size_t g1_index(int k, int kp, int j, int sigma) const {
    return gt_index(k, kp, j) * n_sigma() + (sigma + n_t - 1);
  }

  static DiscreteModel zeros(int n_k, int n_t, int n_u, double T) {
    if (n_k < 1 || n_t < 2 || n_u < 1 || !(T > 0.0)) {
      throw InvalidArgument("discrete model needs n_k >= 1, n_t >= 2, n_u >= 1, T > 0");
    }
    DiscreteModel m;
    m.n_k = n_k;
    m.n_t = n_t;
    m.n_u = n_u;
    m.T = T;
    m.F1.assign(static_cast<std::size_t>(n_k) * n_t, 0.0);
    m.H1.assign(static_cast<std::size_t>(n_k) * n_t, 0.0);
    m.gtilde.assign(static_cast<std::size_t>(n_k) * n_k * n_u, 0.0);
    m.G1.assign(m.gtilde.size() * m.n_sigma(), 0.0);
    return m;
  }

  void validate() const {
    for (double x : F1) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("F1 must be >= 0");
    }
    for (double x : H1) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("H1 must be >= 0");
    }
    for (double x : gtilde) {
      if (!(x >= 0.0) || x > 1.0) throw InvalidArgument("gtilde must lie in [0, 1]");
    }
    for (int k = 0; k < n_k; ++k) {
      for (int kp = 0; kp < n_k; ++kp) {
        for (int j = 0; j < n_u; ++j) {
          for (int sg = -(n_t - 1); sg < n_t; ++sg) {
            const double x = G1[g1_index(k, kp, j, sg)];
            if (!(x >= 0.0) || x > 1.0) throw InvalidArgument("G1 must lie in [0, 1]");
            if (j < std::abs(sg) && x != 0.0) {
              throw InvalidArgument("G1 must vanish below |s|");
            }
          }
        }
      }
    }
  }
};

/// Cell integrals Ψ[j][|σ|] = ∫_{jh}^{(j+1)h} ψ(u, σh) du; zero for j < |σ|.
struct KernelCells {
  SpaceParams sp;
  int n_t = 0;
  int n_u = 0;
  double h = 0.0;
  std::vector<double> psi;  // [j][|σ|]

  double at(int j, int sigma) const {
    return psi[static_cast<std::size_t>(j) * n_t + std::abs(sigma)];
  }
};

inline KernelCells build_kernel_cells(const SpaceParams& sp, int n_t, int n_u, double h,
                                      double tol = 1e-11) {
  KernelCells kc{sp, n_t, n_u, h, std::vector<double>(static_cast<std::size_t>(n_u) * n_t, 0.0)};
  parallel_for(static_cast<std::size_t>(n_u), [&](std::size_t j) {
    for (int sg = 0; sg < n_t && sg <= static_cast<int>(j); ++sg) {
      const double lo = static_cast<double>(j) * h;
      const double hi = lo + h;
      kc.psi[j * n_t + sg] =
          abel_transform(sp, RadialFunction::indicator(lo, hi), sg * h, tol);
    }
  });
  return kc;
}

inline KernelCells build_kernel_cells(const SpaceParams& sp, const DiscreteModel& m,
                                      double tol = 1e-11) {
  return build_kernel_cells(sp, m.n_t, m.n_u, m.h(), tol);
}

namespace detail {

inline void check_cells(const DiscreteModel& m, const KernelCells& kc) {
  if (kc.n_t != m.n_t || kc.n_u != m.n_u || std::fabs(kc.h - m.h()) > 1e-15 * m.h()) {
    throw InvalidArgument("kernel cells were built for a different grid");
  }
}

}  // namespace detail

/// Q(k, k', σ) = Σ_j G1(k, k', j, σ) Ψ[j][σ] = ∫_{u >= |s|} G1 ψ du.
inline std::vector<double> slice_kernel_sums(const DiscreteModel& m, const KernelCells& kc) {
  detail::check_cells(m, kc);
  const int ns = m.n_sigma();
  std::vector<double> q(static_cast<std::size_t>(m.n_k) * m.n_k * ns, 0.0);
  for (int k = 0; k < m.n_k; ++k) {
    for (int kp = 0; kp < m.n_k; ++kp) {
      for (int sg = -(m.n_t - 1); sg < m.n_t; ++sg) {
        double acc = 0.0;
        for (int j = std::abs(sg); j < m.n_u; ++j) {
          acc += m.G1[m.g1_index(k, kp, j, sg)] * kc.at(j, sg);
        }
        q[(static_cast<std::size_t>(k) * m.n_k + kp) * ns + (sg + m.n_t - 1)] = acc;
      }
    }
  }
  return q;
}

/// F(k) = [Σ_i h F1(k, i) e^{2ρ t_i}]^{1/2}.
inline std::vector<double> slice_norms(const SpaceParams& sp, const DiscreteModel& m,
                                       const std::vector<double>& a1) {
  std::vector<double> out(m.n_k, 0.0);
  for (int k = 0; k < m.n_k; ++k) {
    double acc = 0.0;
    for (int i = 0; i < m.n_t; ++i) {
      acc += m.h() * a1[static_cast<std::size_t>(k) * m.n_t + i] * std::exp(2.0 * sp.rho * m.t(i));
    }
    out[k] = std::sqrt(acc);
  }
  return out;
}

/// The quintuple sum with min[F1, H1] G1 ψ e^{ρ(t+t')}.
inline double chain_step1_bound(const SpaceParams& sp, const DiscreteModel& m,
                                const KernelCells& kc) {
  const std::vector<double> q = slice_kernel_sums(m, kc);
  const int ns = m.n_sigma();
  const double h = m.h();
  std::vector<double> et(m.n_t);
  for (int i = 0; i < m.n_t; ++i) et[i] = std::exp(sp.rho * m.t(i));
  double total = 0.0;
  for (int k = 0; k < m.n_k; ++k) {
    for (int kp = 0; kp < m.n_k; ++kp) {
      const double* qk = &q[(static_cast<std::size_t>(k) * m.n_k + kp) * ns];
      double acc = 0.0;
      for (int i = 0; i < m.n_t; ++i) {
        const double a = m.f1(k, i);
        if (a == 0.0) continue;
        for (int ip = 0; ip < m.n_t; ++ip) {
          const double b = m.h1(kp, ip);
          if (b == 0.0) continue;
          acc += std::min(a, b) * qk[ip - i + m.n_t - 1] * et[i] * et[ip];
        }
      }
      total += acc;
    }
  }
  return total * h * h * m.weight() * m.weight();
}

struct Step2Terms {
  double first = 0.0;   // region e^{ρs} <= H/F
  double second = 0.0;  // region e^{ρs} > H/F
  double total() const { return first + second; }
};

/// The two-region bound in F(k), H(k') and the threshold e^{ρs} = H/F.
inline Step2Terms chain_step2_terms(const SpaceParams& sp, const DiscreteModel& m,
                                    const KernelCells& kc) {
  const std::vector<double> q = slice_kernel_sums(m, kc);
  const std::vector<double> F = slice_norms(sp, m, m.F1);
  const std::vector<double> H = slice_norms(sp, m, m.H1);
  const int ns = m.n_sigma();
  const double h = m.h();
  Step2Terms out;
  for (int k = 0; k < m.n_k; ++k) {
    for (int kp = 0; kp < m.n_k; ++kp) {
      // 0/0 convention: F = 0 kills the first term, H = 0 the second.
      if (F[k] == 0.0 || H[kp] == 0.0) continue;
      const double f2 = F[k] * F[k];
      const double h2 = H[kp] * H[kp];
      const double* qk = &q[(static_cast<std::size_t>(k) * m.n_k + kp) * ns];
      for (int sg = -(m.n_t - 1); sg < m.n_t; ++sg) {
        const double es = std::exp(sp.rho * sg * h);
        const double qq = qk[sg + m.n_t - 1];
        if (qq == 0.0) continue;
        if (F[k] * es <= H[kp]) {
          out.first += f2 * es * qq;
        } else {
          out.second += h2 / es * qq;
        }
      }
    }
  }
  const double w = h * m.weight() * m.weight();
  out.first *= w;
  out.second *= w;
  return out;
}

inline double chain_step2_bound(const SpaceParams& sp, const DiscreteModel& m,
                                const KernelCells& kc) {
  return chain_step2_terms(sp, m, kc).total();
}

/// F*, H* over K and the per-u-cell double rearrangements of gtilde.
struct RearrangedData {
  StepProfile Fstar;
  StepProfile Hstar;
  std::vector<DoubleProfile> Gss;  // one per u-cell
  std::vector<double> u_edges;     // n_u + 1 edges
};

namespace detail {

/// ∫_a^b p(x) dx for a step profile.
inline double step_integral(const StepProfile& p, double a, double b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.steps(); ++i) {
    const double lo = std::max(a, p.left(i));
    const double hi = std::min(b, p.breaks()[i]);
    if (hi > lo) acc += p.values()[i] * (hi - lo);
  }
  return acc;
}

inline WeightedMatrix gtilde_slice(const DiscreteModel& m, int j) {
  WeightedMatrix a = WeightedMatrix::uniform(m.n_k, m.n_k);
  for (int k = 0; k < m.n_k; ++k) {
    for (int kp = 0; kp < m.n_k; ++kp) a(k, kp) = m.gtilde[m.gt_index(k, kp, j)];
  }
  return a;
}

}  // namespace detail

/// ∫∫ F*(x) H*(y) G(x, y) dy dx, exact for step data.
inline double rearranged_cell_integral(const StepProfile& Fs, const StepProfile& Hs,
                                       const DoubleProfile& G) {
  double acc = 0.0;
  for (std::size_t i = 0; i < G.nx(); ++i) {
    const double fx = detail::step_integral(Fs, G.x_left(i), G.x_breaks[i]);
    if (fx == 0.0) continue;
    for (std::size_t j = 0; j < G.ny(); ++j) {
      const double g = G.cell(i, j);
      if (g == 0.0) continue;
      acc += g * fx * detail::step_integral(Hs, G.y_left(j), G.y_breaks[j]);
    }
  }
  return acc;
}

inline RearrangedData rearrange_model(const SpaceParams& sp, const DiscreteModel& m) {
  RearrangedData d;
  const std::vector<double> F = slice_norms(sp, m, m.F1);
  const std::vector<double> H = slice_norms(sp, m, m.H1);
  d.Fstar = decreasing_rearrangement(WeightedSamples::uniform(F, m.weight()));
  d.Hstar = decreasing_rearrangement(WeightedSamples::uniform(H, m.weight()));
  d.Gss.resize(m.n_u);
  for (int j = 0; j < m.n_u; ++j) d.Gss[j] = double_rearrangement(detail::gtilde_slice(m, j));
  d.u_edges.resize(m.n_u + 1);
  for (int j = 0; j <= m.n_u; ++j) d.u_edges[j] = j * m.h();
  return d;
}

/// Σ_cells [∫∫ F* H* G**] · weight_integral(u_lo, u_hi).
template <class W>
double rearranged_form(const RearrangedData& d, W&& weight_integral) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d.Gss.size(); ++j) {
    const double inner = rearranged_cell_integral(d.Fstar, d.Hstar, d.Gss[j]);
    if (inner == 0.0) continue;
    acc += inner * weight_integral(d.u_edges[j], d.u_edges[j + 1]);
  }
  return acc;
}

/// ∫_a^b e^{ρu} du.
inline double exp_weight_integral(const SpaceParams& sp, double a, double b) {
  return (std::exp(sp.rho * b) - std::exp(sp.rho * a)) / sp.rho;
}

/// ∫_a^b φ(u) du with the splice at u = 1 handled exactly.
inline double phi_weight_integral(const SpaceParams& sp, double a, double b) {
  const int n = sp.m1 + sp.m2;
  double acc = 0.0;
  if (a < 1.0) {
    const double hi = std::min(b, 1.0);
    acc += (std::pow(hi, n + 1) - std::pow(a, n + 1)) / (n + 1);
  }
  if (b > 1.0) acc += exp_weight_integral(sp, std::max(a, 1.0), b);
  return acc;
}

/// ∫_{R_+} ∫∫ F* H* G** e^{ρu}.
inline double chain_step3_bound(const SpaceParams& sp, const RearrangedData& d) {
  return rearranged_form(d, [&](double a, double b) { return exp_weight_integral(sp, a, b); });
}

inline double chain_step3_bound(const SpaceParams& sp, const DiscreteModel& m) {
  return chain_step3_bound(sp, rearrange_model(sp, m));
}

/// ∫_{R_+} ∫∫ F* H* G** φ(u).
inline double theorem8_bound(const SpaceParams& sp, const RearrangedData& d) {
  return rearranged_form(d, [&](double a, double b) { return phi_weight_integral(sp, a, b); });
}

struct SplitNorms {
  double f = 0.0;  // (∫ F*²)^{1/2}
  double g = 0.0;  // (∫∫∫ G** e^{2ρu})^{1/2}
  double h = 0.0;
};

inline SplitNorms split_norms(const SpaceParams& sp, const RearrangedData& d) {
  SplitNorms n;
  n.f = std::sqrt(d.Fstar.integral_of_square());
  n.h = std::sqrt(d.Hstar.integral_of_square());
  double g2 = 0.0;
  for (std::size_t j = 0; j < d.Gss.size(); ++j) {
    const double a = d.u_edges[j];
    const double b = d.u_edges[j + 1];
    g2 += d.Gss[j].integral() * (std::exp(2.0 * sp.rho * b) - std::exp(2.0 * sp.rho * a)) /
          (2.0 * sp.rho);
  }
  n.g = std::sqrt(g2);
  return n;
}

/// Constant of the split: the region F*H* <= 𝒦 e^{ρu} costs 𝒦‖g‖², the
/// complement costs ‖f‖²‖h‖² / (ρ𝒦) because ∫_{e^{ρu} <= X} e^{ρu} du <= X/ρ.
inline double split_constant(const SpaceParams& sp) { return std::max(1.0, 1.0 / sp.rho); }

/// C𝒦‖g‖² + C‖f‖²‖h‖²/𝒦 at 𝒦 = ‖f‖‖h‖/‖g‖, i.e. 2C‖f‖‖g‖‖h‖.
inline double split_optimize(const SpaceParams& sp, const SplitNorms& n) {
  if (!(n.f > 0.0) || !(n.g > 0.0) || !(n.h > 0.0)) {
    throw InvalidArgument("split_optimize needs nonzero norms");
  }
  const double c = split_constant(sp);
  const double kk = n.f * n.h / n.g;
  return c * kk * n.g * n.g + c * n.f * n.f * n.h * n.h / kk;
}

// ---------------------------------------------------------------------------
// Random models

struct ModelSpec {
  int n_k = 8;
  int n_t = 64;
  int n_u = 72;
  double T = 4.0;
};

/// Random model with F1, H1 in {0} ∪ [e^{-8ρ}, e^{8ρ}], gtilde ∈ {0, 1}
/// vanishing for u < 1, and G1 the average of gtilde over two random
/// measure-preserving relabellings of K × K per (u-cell, s).
inline DiscreteModel random_model(const SpaceParams& sp, const ModelSpec& spec, Rng& rng) {
  DiscreteModel m = DiscreteModel::zeros(spec.n_k, spec.n_t, spec.n_u, spec.T);
  auto fill = [&](std::vector<double>& a1) {
    for (int k = 0; k < m.n_k; ++k) {
      if (uniform01(rng) < 0.125) continue;  // an empty slice
      const double centre = -6.0 + 12.0 * uniform01(rng);
      const int len = 1 + static_cast<int>(uniform01(rng) * m.n_t / 2);
      const int start = static_cast<int>(uniform01(rng) * (m.n_t - len + 1));
      for (int i = start; i < start + len; ++i) {
        if (uniform01(rng) < 0.2) continue;
        const double e = std::clamp(centre + 4.0 * uniform01(rng) - 2.0, -8.0, 8.0);
        a1[static_cast<std::size_t>(k) * m.n_t + i] = std::exp(sp.rho * e);
      }
    }
  };
  fill(m.F1);
  fill(m.H1);
  const int j_min = static_cast<int>(std::ceil(1.0 / m.h()));
  const double density = 0.1 + 0.8 * uniform01(rng);
  const int j_max = j_min + static_cast<int>(uniform01(rng) * (m.n_u - j_min));
  for (int k = 0; k < m.n_k; ++k) {
    for (int kp = 0; kp < m.n_k; ++kp) {
      for (int j = j_min; j <= std::min(j_max, m.n_u - 1); ++j) {
        m.gtilde[m.gt_index(k, kp, j)] = uniform01(rng) < density ? 1.0 : 0.0;
      }
    }
  }
  std::vector<int> p1(m.n_k), p2(m.n_k), p3(m.n_k), p4(m.n_k);
  auto shuffle = [&](std::vector<int>& p) {
    std::iota(p.begin(), p.end(), 0);
    for (int i = m.n_k - 1; i > 0; --i) {
      const int r = static_cast<int>(uniform01(rng) * (i + 1));
      std::swap(p[i], p[r]);
    }
  };
  for (int j = 0; j < m.n_u; ++j) {
    for (int sg = -(m.n_t - 1); sg < m.n_t; ++sg) {
      if (j < std::abs(sg)) continue;
      shuffle(p1);
      shuffle(p2);
      shuffle(p3);
      shuffle(p4);
      for (int k = 0; k < m.n_k; ++k) {
        for (int kp = 0; kp < m.n_k; ++kp) {
          m.G1[m.g1_index(k, kp, j, sg)] = 0.5 * (m.gtilde[m.gt_index(p1[k], p2[kp], j)] +
                                                  m.gtilde[m.gt_index(p3[k], p4[kp], j)]);
        }
      }
    }
  }
  return m;
}

}  // namespace rank1ks
