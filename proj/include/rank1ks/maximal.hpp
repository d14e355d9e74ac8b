#pragma once

// Maximal operators on a discretised box of a real hyperbolic space.
//
// A GridModel covers [-V, V]^{m1} × [-S, S] in (v, s) with uniform cells;
// the measure of a cell is e^{2ρs} dv^{m1} ds. A ball is represented by the
// cells whose centres lie strictly inside it. For a ball centred at
// (vc, sc) of radius r the horizontal slice at height s' is the disc
//     |v - vc|² < e^{-(sc + s')} (cosh r - cosh(s' - sc)),
// so every ball sum reduces to per-slice row sums read from prefix tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <span>
#include <vector>

#include "rank1ks/errors.hpp"
#include "rank1ks/geometry.hpp"
#include "rank1ks/parallel.hpp"
#include "rank1ks/rearrange.hpp"

namespace rank1ks {

struct GridModel {
  SpaceParams sp;
  int n_v = 0;  // cells per v-axis
  int n_s = 0;
  double V = 0.0;
  double S = 0.0;

  static GridModel make(const SpaceParams& sp, int n_v, int n_s, double V, double S) {
    if (sp.m2 != 0) throw UnsupportedSpace("point-level operations require m2 = 0");
    if (sp.m1 < 1 || sp.m1 > 2) throw UnsupportedSpace("grid models support m1 = 1 or 2");
    if (n_v < 1 || n_s < 1 || !(V > 0.0) || !(S > 0.0)) {
      throw InvalidArgument("grid needs positive extents and resolutions");
    }
    return GridModel{sp, n_v, n_s, V, S};
  }

  double dv() const { return 2.0 * V / n_v; }
  double ds() const { return 2.0 * S / n_s; }
  double v_center(int i) const { return -V + (i + 0.5) * dv(); }
  double s_center(int k) const { return -S + (k + 0.5) * ds(); }
  std::size_t slice_size() const { return sp.m1 == 1 ? n_v : static_cast<std::size_t>(n_v) * n_v; }
  std::size_t rows() const { return sp.m1 == 1 ? 1 : n_v; }
  std::size_t n_cells() const { return slice_size() * n_s; }
  double cell_volume() const { return std::pow(dv(), sp.m1) * ds(); }
  double slice_measure(int k) const { return std::exp(2.0 * sp.rho * s_center(k)) * cell_volume(); }

  /// Cell index from (slice k, row i1, column i0); row is 0 when m1 = 1.
  std::size_t index(int k, int row, int col) const {
    return static_cast<std::size_t>(k) * slice_size() + static_cast<std::size_t>(row) * n_v + col;
  }
  int slice_of(std::size_t c) const { return static_cast<int>(c / slice_size()); }

  /// Centre of a cell as (v, s).
  IwasawaPoint center(std::size_t c) const {
    const int k = slice_of(c);
    const std::size_t r = c % slice_size();
    IwasawaPoint p;
    p.s = s_center(k);
    p.v.resize(sp.m1);
    p.v[0] = v_center(static_cast<int>(r % n_v));
    if (sp.m1 == 2) p.v[1] = v_center(static_cast<int>(r / n_v));
    return p;
  }

  double cell_measure(std::size_t c) const { return slice_measure(slice_of(c)); }

  /// Index range [lo, hi] of centres x_i with |x_i - c| < R along an axis
  /// with n cells of width w starting at -half; empty when lo > hi.
  static std::pair<int, int> axis_range(double c, double R, int n, double w, double half) {
    if (!(R > 0.0)) return {0, -1};
    auto centre = [&](int i) { return -half + (i + 0.5) * w; };
    int lo = static_cast<int>(std::ceil((c - R + half) / w - 0.5));
    int hi = static_cast<int>(std::floor((c + R + half) / w - 0.5));
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    while (lo <= hi && !(std::fabs(centre(lo) - c) < R)) ++lo;
    while (hi >= lo && !(std::fabs(centre(hi) - c) < R)) --hi;
    return {lo, hi};
  }
  std::pair<int, int> v_range(double c, double R) const { return axis_range(c, R, n_v, dv(), V); }
  std::pair<int, int> s_range(double c, double R) const { return axis_range(c, R, n_s, ds(), S); }

  /// Visits (k, row, lo, hi) for every row segment of the disc |v - vc| < R
  /// in slice k.
  template <class Fn>
  void for_each_disc_row(int k, std::span<const double> vc, double R, Fn&& fn) const {
    if (sp.m1 == 1) {
      const auto [lo, hi] = v_range(vc[0], R);
      if (lo <= hi) fn(k, 0, lo, hi);
      return;
    }
    const auto [r0, r1] = v_range(vc[1], R);
    for (int row = r0; row <= r1; ++row) {
      const double dy = v_center(row) - vc[1];
      const double w2 = R * R - dy * dy;
      if (!(w2 > 0.0)) continue;
      const auto [lo, hi] = v_range(vc[0], std::sqrt(w2));
      if (lo <= hi) fn(k, row, lo, hi);
    }
  }

  /// Visits the row segments of the ball B((vc, sc), r).
  template <class Fn>
  void for_each_ball_row(std::span<const double> vc, double sc, double r, Fn&& fn) const {
    const auto [k0, k1] = s_range(sc, r);
    for (int k = k0; k <= k1; ++k) {
      const double sk = s_center(k);
      const double d = cosh_diff(r, sk - sc);
      if (!(d > 0.0)) continue;
      const double R = std::sqrt(std::exp(-(sc + sk)) * d);
      for_each_disc_row(k, vc, R, fn);
    }
  }

  /// Whether B((vc, sc), r) lies inside the box.
  bool contains_ball(std::span<const double> vc, double sc, double r) const {
    if (sc - r < -S || sc + r > S) return false;
    const double half = std::exp(-sc) * std::sinh(r) / std::numbers::sqrt2;
    for (double x : vc) {
      if (std::fabs(x) + half > V) return false;
    }
    return true;
  }
};

struct BallSpec {
  IwasawaPoint center;
  double radius = 0.0;

  BallSpec() = default;
  BallSpec(const GridModel& g, IwasawaPoint c, double r) : center(std::move(c)), radius(r) {
    detail::check_shape(g.sp, center);
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    if (!g.contains_ball(center.v, center.s, radius)) {
      throw ContainmentError("ball of radius " + std::to_string(radius) +
                             " does not fit in the grid box; boundary clipping would bias averages");
    }
  }
};

/// A nonnegative field over the cells of a grid.
struct FieldGrid {
  const GridModel* model = nullptr;
  std::vector<double> values;

  FieldGrid() = default;
  explicit FieldGrid(const GridModel& g, double fill = 0.0)
      : model(&g), values(g.n_cells(), fill) {}

  void validate() const {
    if (model == nullptr || values.size() != model->n_cells()) {
      throw InvalidArgument("field does not match its grid");
    }
    for (double x : values) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("field values must be >= 0");
    }
  }

  /// Cell values with cell measures, for rearrangement-based norms.
  WeightedSamples samples() const {
    std::vector<Sample> e;
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (values[c] > 0.0) e.push_back({values[c], model->cell_measure(c)});
    }
    return WeightedSamples(std::move(e));
  }

  double integral() const {
    double acc = 0.0;
    for (std::size_t c = 0; c < values.size(); ++c) acc += values[c] * model->cell_measure(c);
    return acc;
  }
};

/// Row prefix sums of a field: prefix[(k, row)][i] = Σ_{i' < i} f(k, row, i').
class SlicePrefix {
 public:
  explicit SlicePrefix(const FieldGrid& f) : g_(f.model) {
    f.validate();
    const std::size_t n_rows = g_->rows() * g_->n_s;
    stride_ = static_cast<std::size_t>(g_->n_v) + 1;
    data_.assign(n_rows * stride_, 0.0);
    weights_.resize(g_->n_s);
    for (int k = 0; k < g_->n_s; ++k) weights_[k] = g_->slice_measure(k);
    for (std::size_t r = 0; r < n_rows; ++r) {
      double acc = 0.0;
      const double* src = &f.values[r * g_->n_v];
      double* dst = &data_[r * stride_];
      for (int i = 0; i < g_->n_v; ++i) {
        acc += src[i];
        dst[i + 1] = acc;
      }
    }
    support_.assign(g_->n_s, {0, -1});
    for (int k = 0; k < g_->n_s; ++k) {
      for (int row = 0; row < static_cast<int>(g_->rows()); ++row) {
        if (row_sum(k, row, 0, g_->n_v - 1) <= 0.0) continue;
        auto& [lo, hi] = support_[k];
        if (lo > hi) lo = row;
        hi = row;
      }
    }
  }

  double row_sum(int k, int row, int lo, int hi) const {
    const double* p = &data_[(static_cast<std::size_t>(k) * g_->rows() + row) * stride_];
    return p[hi + 1] - p[lo];
  }

  const GridModel& grid() const { return *g_; }
  double weight(int k) const { return weights_[k]; }
  /// Rows of slice k between the first and last row where f is nonzero.
  std::pair<int, int> support_rows(int k) const { return support_[k]; }

 private:
  const GridModel* g_;
  std::size_t stride_ = 0;
  std::vector<double> data_;
  std::vector<double> weights_;  // slice measures
  std::vector<std::pair<int, int>> support_;
};

struct BallSum {
  double integral = 0.0;  // Σ f · cell measure
  double measure = 0.0;   // Σ cell measure
  std::size_t cells = 0;
};

/// ∫_{B} f over the cells of B = B((vc, sc), r) that lie in the box.
inline BallSum ball_sum(const SlicePrefix& p, std::span<const double> vc, double sc, double r) {
  const GridModel& g = p.grid();
  BallSum out;
  g.for_each_ball_row(vc, sc, r, [&](int k, int row, int lo, int hi) {
    const double w = p.weight(k);
    out.integral += w * p.row_sum(k, row, lo, hi);
    out.measure += w * (hi - lo + 1);
    out.cells += static_cast<std::size_t>(hi - lo + 1);
  });
  return out;
}

struct BallCells {
  std::vector<std::size_t> cells;
  double measure = 0.0;
};

/// Cells of a contained ball; a ball smaller than a cell yields the cell
/// containing its centre.
inline BallCells ball_cells(const GridModel& g, const BallSpec& b) {
  if (!g.contains_ball(b.center.v, b.center.s, b.radius)) {
    throw ContainmentError("ball does not fit in the grid box; boundary clipping would bias averages");
  }
  BallCells out;
  g.for_each_ball_row(b.center.v, b.center.s, b.radius, [&](int k, int row, int lo, int hi) {
    for (int i = lo; i <= hi; ++i) out.cells.push_back(g.index(k, row, i));
    out.measure += g.slice_measure(k) * (hi - lo + 1);
  });
  if (out.cells.empty()) {
    const int k = std::clamp(static_cast<int>((b.center.s + g.S) / g.ds()), 0, g.n_s - 1);
    const int i0 = std::clamp(static_cast<int>((b.center.v[0] + g.V) / g.dv()), 0, g.n_v - 1);
    const int i1 = g.sp.m1 == 2
                       ? std::clamp(static_cast<int>((b.center.v[1] + g.V) / g.dv()), 0, g.n_v - 1)
                       : 0;
    const std::size_t c = g.index(k, i1, i0);
    out.cells.push_back(c);
    out.measure = g.cell_measure(c);
  }
  return out;
}

/// A ball centred at a cell centre, as row segments in integer offsets.
/// Centred balls at cells of the same slice share one stencil.
struct Stencil {
  struct Group {
    int k;                  // absolute slice index
    int drow_min;           // first row offset (0 when m1 = 1)
    std::vector<int> half;  // per row offset: columns col - half .. col + half
  };
  std::vector<Group> groups;
};

namespace detail {

/// Largest n >= 0 with n·w < R, or -1 when R <= 0.
inline int half_count(double R, double w) {
  if (!(R > 0.0)) return -1;
  int n = static_cast<int>(std::ceil(R / w)) - 1;
  while (n >= 0 && !(n * w < R)) --n;
  while ((n + 1) * w < R) ++n;
  return n;
}

inline void disc_group(const GridModel& g, double R, int k, std::vector<Stencil::Group>& out) {
  const double w = g.dv();
  const int hr = half_count(R, w);
  if (hr < 0) return;
  if (g.sp.m1 == 1) {
    out.push_back({k, 0, {hr}});
    return;
  }
  Stencil::Group grp{k, -hr, {}};
  for (int d = -hr; d <= hr; ++d) {
    const double y = d * w;
    const double w2 = R * R - y * y;
    grp.half.push_back(w2 > 0.0 ? half_count(std::sqrt(w2), w) : -1);
  }
  out.push_back(std::move(grp));
}

}  // namespace detail

/// Stencil of B(z, r) for z a cell centre in slice k. Slices outside the box
/// are dropped, i.e. the field is extended by zero.
inline Stencil ball_stencil(const GridModel& g, int k, double r) {
  Stencil st;
  const double sc = g.s_center(k);
  const int hk = detail::half_count(r, g.ds());
  for (int dk = -hk; dk <= hk; ++dk) {
    const int kk = k + dk;
    if (kk < 0 || kk >= g.n_s) continue;
    const double delta = dk * g.ds();
    const double d = cosh_diff(r, delta);
    if (!(d > 0.0)) continue;
    detail::disc_group(g, std::sqrt(std::exp(-(2.0 * sc + delta)) * d), kk, st.groups);
  }
  return st;
}

/// Disc stencil |m| < u on the slice of the cell.
inline Stencil disc_stencil(const GridModel& g, int k, double u) {
  Stencil st;
  detail::disc_group(g, u, k, st.groups);
  return st;
}

/// Visits (k, row, lo, hi) for the stencil placed at (row, col), clipped to
/// the box and to the row window [row_lo(k), row_hi(k)].
template <class Fn, class Window>
void apply_stencil(const GridModel& g, const Stencil& st, int row, int col, Window&& window,
                   Fn&& fn) {
  for (const auto& grp : st.groups) {
    const auto [wlo, whi] = window(grp.k);
    const int n = static_cast<int>(grp.half.size());
    const int a = std::max(0, wlo - row - grp.drow_min);
    const int b = std::min(n - 1, whi - row - grp.drow_min);
    for (int j = a; j <= b; ++j) {
      const int h = grp.half[j];
      if (h < 0) continue;
      const int lo = std::max(col - h, 0);
      const int hi = std::min(col + h, g.n_v - 1);
      if (lo <= hi) fn(grp.k, row + grp.drow_min + j, lo, hi);
    }
  }
}

template <class Fn>
void apply_stencil(const GridModel& g, const Stencil& st, int row, int col, Fn&& fn) {
  const int last = static_cast<int>(g.rows()) - 1;
  apply_stencil(g, st, row, col, [last](int) { return std::pair<int, int>{0, last}; }, fn);
}

inline BallSum stencil_sum(const SlicePrefix& p, const Stencil& st, int row, int col) {
  const GridModel& g = p.grid();
  BallSum out;
  apply_stencil(g, st, row, col, [&](int k, int rr, int lo, int hi) {
    const double w = p.weight(k);
    out.integral += w * p.row_sum(k, rr, lo, hi);
    out.measure += w * (hi - lo + 1);
    out.cells += static_cast<std::size_t>(hi - lo + 1);
  });
  return out;
}

/// ∫ f over the stencil, visiting only rows where f has support. Without
/// weighting, the plain sum of cell values is returned.
inline double stencil_integral(const SlicePrefix& p, const Stencil& st, int row, int col,
                               bool weighted = true) {
  double acc = 0.0;
  apply_stencil(p.grid(), st, row, col, [&](int k) { return p.support_rows(k); },
                [&](int k, int rr, int lo, int hi) {
                  const double x = p.row_sum(k, rr, lo, hi);
                  acc += weighted ? p.weight(k) * x : x;
                });
  return acc;
}

namespace detail {

struct CellPos {
  int k, row, col;
};

inline CellPos cell_pos(const GridModel& g, std::size_t c) {
  const int k = g.slice_of(c);
  const std::size_t r = c % g.slice_size();
  return {k, static_cast<int>(r / g.n_v), static_cast<int>(r % g.n_v)};
}

inline double ball_average(const SlicePrefix& p, std::span<const double> vc, double sc, double r,
                           const FieldGrid& f) {
  const BallSum b = ball_sum(p, vc, sc, r);
  if (b.cells > 0) return b.integral / b.measure;
  const GridModel& g = *f.model;
  return f.values[ball_cells(g, BallSpec(g, IwasawaPoint{{vc.begin(), vc.end()}, {}, sc}, r))
                      .cells.front()];
}

}  // namespace detail

/// Centred maximal function at a cell: max over radii of the ball average.
inline double m1_centered(const FieldGrid& f, const SlicePrefix& p, std::size_t cell,
                          const std::vector<double>& radii) {
  const GridModel& g = *f.model;
  const IwasawaPoint z = g.center(cell);
  const auto pos = detail::cell_pos(g, cell);
  double best = 0.0;
  for (double r : radii) {
    if (!g.contains_ball(z.v, z.s, r)) {
      throw ContainmentError("centred ball of radius " + std::to_string(r) + " leaves the box");
    }
    const BallSum b = stencil_sum(p, ball_stencil(g, pos.k, r), pos.row, pos.col);
    best = std::max(best, b.integral / b.measure);
  }
  return best;
}

/// Centred maximal function on every cell, using the radii whose balls fit.
/// Every stencil contains its centre cell, so the value is at least f there.
inline std::vector<double> m1_centered_field(const FieldGrid& f, const std::vector<double>& radii) {
  const GridModel& g = *f.model;
  const SlicePrefix p(f);
  std::vector<double> out(f.values);
  parallel_for(static_cast<std::size_t>(g.n_s), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (double rad : radii) {
      const Stencil st = ball_stencil(g, k, rad);
      for (std::size_t r = 0; r < g.slice_size(); ++r) {
        const std::size_t c = kk * g.slice_size() + r;
        const IwasawaPoint z = g.center(c);
        if (!g.contains_ball(z.v, z.s, rad)) continue;
        const BallSum b = stencil_sum(p, st, static_cast<int>(r / g.n_v), static_cast<int>(r % g.n_v));
        out[c] = std::max(out[c], b.integral / b.measure);
      }
    }
  });
  return out;
}

/// Non-centred maximal function at a cell over an explicit candidate list;
/// candidates not containing the cell centre are ignored.
inline double m2_noncentered(const FieldGrid& f, const SlicePrefix& p, std::size_t cell,
                             const std::vector<BallSpec>& candidates) {
  const GridModel& g = *f.model;
  const IwasawaPoint z = g.center(cell);
  double best = 0.0;
  for (const auto& b : candidates) {
    if (!(distance_coords(b.center.v, b.center.s, z.v, z.s) < b.radius)) continue;
    best = std::max(best, detail::ball_average(p, b.center.v, b.center.s, b.radius, f));
  }
  return best;
}

/// Non-centred maximal function on every cell. The candidate family is
/// every contained ball centred on the stride-subgrid with a listed radius,
/// together with the centred balls of m1_centered_field, so the result
/// dominates the centred operator cell by cell.
inline std::vector<double> m2_noncentered_field(const FieldGrid& f,
                                                const std::vector<double>& radii, int stride = 4) {
  const GridModel& g = *f.model;
  const SlicePrefix p(f);
  std::vector<double> out = m1_centered_field(f, radii);
  const int off = stride / 2;
  const bool two = g.sp.m1 == 2;
  for (int k = off; k < g.n_s; k += stride) {
    for (double r : radii) {
      const Stencil st = ball_stencil(g, k, r);
      for (int row = two ? off : 0; row < static_cast<int>(g.rows()); row += two ? stride : 1) {
        for (int i = off; i < g.n_v; i += stride) {
          const IwasawaPoint z = g.center(g.index(k, row, i));
          if (!g.contains_ball(z.v, z.s, r)) continue;
          const BallSum b = stencil_sum(p, st, row, i);
          const double avg = b.integral / b.measure;
          if (avg == 0.0) continue;
          apply_stencil(g, st, row, i, [&](int kk, int rr, int lo, int hi) {
            double* slot = &out[g.index(kk, rr, 0)];
            for (int ii = lo; ii <= hi; ++ii) slot[ii] = std::max(slot[ii], avg);
          });
        }
      }
    }
  }
  return out;
}

/// sup over radii (all >= 1) of |B(z, r)|^{-1/2} ∫_{B(z, r)} f, with |B| the
/// exact coordinate measure. f is treated as zero outside the box, which is
/// exact whenever the field itself is the restriction of a function
/// supported in the box.
inline double m2_tilde(const FieldGrid& f, const SlicePrefix& p, std::size_t cell,
                       const std::vector<double>& radii) {
  const GridModel& g = *f.model;
  const auto pos = detail::cell_pos(g, cell);
  double best = 0.0;
  for (double r : radii) {
    if (r < 1.0) throw InvalidArgument("m2_tilde radii must be >= 1");
    const double vol = coordinate_ball_measure(g.sp, r);
    best = std::max(best, stencil_integral(p, ball_stencil(g, pos.k, r), pos.row, pos.col) /
                              std::sqrt(vol));
  }
  return best;
}

/// m2_tilde on every cell (or only where mask is true, zero elsewhere).
inline std::vector<double> m2_tilde_field(const FieldGrid& f, const std::vector<double>& radii,
                                          const std::vector<bool>* mask = nullptr) {
  const GridModel& g = *f.model;
  for (double r : radii) {
    if (r < 1.0) throw InvalidArgument("m2_tilde radii must be >= 1");
  }
  const SlicePrefix p(f);
  std::vector<double> inv_sqrt_vol;
  for (double r : radii) inv_sqrt_vol.push_back(1.0 / std::sqrt(coordinate_ball_measure(g.sp, r)));
  std::vector<double> out(g.n_cells(), 0.0);
  parallel_for(static_cast<std::size_t>(g.n_s), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const Stencil st = ball_stencil(g, k, radii[j]);
      for (std::size_t r = 0; r < g.slice_size(); ++r) {
        const std::size_t c = kk * g.slice_size() + r;
        if (mask != nullptr && !(*mask)[c]) continue;
        const double v =
            stencil_integral(p, st, static_cast<int>(r / g.n_v), static_cast<int>(r % g.n_v)) *
            inv_sqrt_vol[j];
        out[c] = std::max(out[c], v);
      }
    }
  });
  return out;
}

/// Nilpotent maximal function on the slice of the cell:
/// max_u u^{-m1} Σ_{|m| < u} f(v̄ - m, s) dv^{m1}. Zero extension outside the
/// box, as for m2_tilde.
inline double m3_nilpotent(const FieldGrid& f, const SlicePrefix& p, std::size_t cell,
                           const std::vector<double>& u_list) {
  const GridModel& g = *f.model;
  const auto pos = detail::cell_pos(g, cell);
  const double area = std::pow(g.dv(), g.sp.m1);
  double best = 0.0;
  for (double u : u_list) {
    if (!(u > 0.0)) throw InvalidArgument("m3 radii must be positive");
    double acc = 0.0;
    apply_stencil(g, disc_stencil(g, pos.k, u), pos.row, pos.col,
                  [&](int kk, int row, int lo, int hi) { acc += p.row_sum(kk, row, lo, hi); });
    best = std::max(best, acc * area / std::pow(u, g.sp.m1));
  }
  return best;
}

inline std::vector<double> m3_field(const FieldGrid& f, const std::vector<double>& u_list) {
  const GridModel& g = *f.model;
  for (double u : u_list) {
    if (!(u > 0.0)) throw InvalidArgument("m3 radii must be positive");
  }
  const SlicePrefix p(f);
  const double area = std::pow(g.dv(), g.sp.m1);
  std::vector<double> out(g.n_cells(), 0.0);
  parallel_for(static_cast<std::size_t>(g.n_s), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (double u : u_list) {
      const Stencil st = disc_stencil(g, k, u);
      const double scale = area / std::pow(u, g.sp.m1);
      for (std::size_t r = 0; r < g.slice_size(); ++r) {
        const double acc =
            stencil_integral(p, st, static_cast<int>(r / g.n_v), static_cast<int>(r % g.n_v), false);
        double& slot = out[kk * g.slice_size() + r];
        slot = std::max(slot, acc * scale);
      }
    }
  });
  return out;
}

/// Geometric radius list base^{j} ∩ [lo, hi] with base = 2^{1/per_octave}.
inline std::vector<double> geometric_radii(double lo, double hi, int per_octave) {
  std::vector<double> out;
  const double q = std::pow(2.0, 1.0 / per_octave);
  int j = static_cast<int>(std::ceil(std::log(lo) / std::log(q) - 1e-12));
  for (double r = std::pow(q, j); r <= hi * (1.0 + 1e-12); r = std::pow(q, ++j)) out.push_back(r);
  return out;
}

struct DominationResult {
  double max_ratio = 0.0;
  std::size_t worst_cell = 0;
  std::size_t violations = 0;  // rhs = 0 while lhs > 0
  std::size_t evaluated = 0;
};

/// Cell-wise ratio of m2_tilde to e^{-ρt} Σ_{t'} M3 f(v̄, t') e^{ρt'} ds.
inline DominationResult pointwise_domination_check(const FieldGrid& f,
                                                   const std::vector<double>& radii,
                                                   const std::vector<double>& u_list) {
  const GridModel& g = *f.model;
  const std::vector<double> lhs = m2_tilde_field(f, radii);
  const std::vector<double> m3 = m3_field(f, u_list);
  // column integrals: col[v-cell] = Σ_k M3(v, s_k) e^{ρ s_k} ds
  std::vector<double> col(g.slice_size(), 0.0);
  for (int k = 0; k < g.n_s; ++k) {
    const double w = std::exp(g.sp.rho * g.s_center(k)) * g.ds();
    for (std::size_t r = 0; r < g.slice_size(); ++r) col[r] += m3[k * g.slice_size() + r] * w;
  }
  DominationResult out;
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const int k = g.slice_of(c);
    const double rhs = std::exp(-g.sp.rho * g.s_center(k)) * col[c % g.slice_size()];
    ++out.evaluated;
    if (lhs[c] == 0.0) continue;
    if (rhs == 0.0) {
      ++out.violations;
      continue;
    }
    const double ratio = lhs[c] / rhs;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.worst_cell = c;
    }
  }
  return out;
}

/// Adds value · χ_B to a field (cells with centre in B).
inline void add_ball(FieldGrid& f, std::span<const double> vc, double sc, double r,
                     double value = 1.0) {
  const GridModel& g = *f.model;
  g.for_each_ball_row(vc, sc, r, [&](int k, int row, int lo, int hi) {
    for (int i = lo; i <= hi; ++i) f.values[g.index(k, row, i)] += value;
  });
}

/// Sets f = max(f, value) on B.
inline void paint_ball(FieldGrid& f, std::span<const double> vc, double sc, double r,
                       double value = 1.0) {
  const GridModel& g = *f.model;
  g.for_each_ball_row(vc, sc, r, [&](int k, int row, int lo, int hi) {
    for (int i = lo; i <= hi; ++i) {
      double& x = f.values[g.index(k, row, i)];
      x = std::max(x, value);
    }
  });
}

/// Cells within distance < reach of at least one of the centres.
inline std::vector<bool> reach_mask(const GridModel& g, const std::vector<IwasawaPoint>& centers,
                                    double reach) {
  std::vector<bool> mask(g.n_cells(), false);
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const IwasawaPoint z = g.center(c);
    for (const auto& p : centers) {
      if (distance_coords(p.v, p.s, z.v, z.s) < reach) {
        mask[c] = true;
        break;
      }
    }
  }
  return mask;
}

struct WeakTypeRow {
  int instance = 0;
  double weak_norm = 0.0;  // ‖M̃2 f‖_{2,∞}
  double l21_norm = 0.0;   // ‖f‖_{2,1}
  double l2_norm = 0.0;    // ‖f‖_2
  double ratio() const { return l21_norm > 0.0 ? weak_norm / l21_norm : 0.0; }
  double ratio_l2() const { return l2_norm > 0.0 ? weak_norm / l2_norm : 0.0; }
};

inline double field_l2_norm(const FieldGrid& f) {
  double acc = 0.0;
  for (std::size_t c = 0; c < f.values.size(); ++c) {
    acc += f.values[c] * f.values[c] * f.model->cell_measure(c);
  }
  return std::sqrt(acc);
}

/// ‖M̃2 f‖_{2,∞} against ‖f‖_{2,1} and ‖f‖_2. When mask is given, M̃2 is
/// evaluated only there and must vanish elsewhere (caller's guarantee).
inline WeakTypeRow weak_type_row(int instance, const FieldGrid& f, const std::vector<double>& radii,
                                 const std::vector<bool>* mask = nullptr) {
  FieldGrid m(*f.model);
  m.values = m2_tilde_field(f, radii, mask);
  WeakTypeRow row;
  row.instance = instance;
  row.weak_norm = weak_l2_norm(m.samples());
  row.l21_norm = lorentz_norm(f.samples(), 2.0, 1.0);
  row.l2_norm = field_l2_norm(f);
  return row;
}

struct CoveringReport {
  std::vector<std::size_t> selected;
  std::size_t completion_added = 0;
  double union_all = 0.0;       // |∪_I B_i|
  double union_selected = 0.0;  // |∪_J B_j|
  double overlap_weak = 0.0;    // ‖Σ_J χ_{B_j}‖_{2,∞}
  double union_ratio() const { return union_selected > 0.0 ? union_all / union_selected : 0.0; }
  double overlap_ratio() const {
    return union_all > 0.0 ? overlap_weak / std::sqrt(union_all) : 0.0;
  }
};

/// Greedy selection: by measure, largest first, accept a ball when at least
/// half of its measure is new. A completion pass then adds the rejected
/// ball with the most new measure until |∪_I| <= 2 |∪_J|.
inline CoveringReport covering_select(const GridModel& g, const std::vector<BallSpec>& balls) {
  CoveringReport rep;
  if (balls.empty()) return rep;
  std::vector<BallCells> cells;
  cells.reserve(balls.size());
  for (const auto& b : balls) cells.push_back(ball_cells(g, b));

  std::vector<char> in_all(g.n_cells(), 0);
  for (const auto& bc : cells) {
    for (std::size_t c : bc.cells) {
      if (!in_all[c]) {
        in_all[c] = 1;
        rep.union_all += g.cell_measure(c);
      }
    }
  }

  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cells[a].measure > cells[b].measure; });

  std::vector<char> covered(g.n_cells(), 0);
  std::vector<char> taken(balls.size(), 0);
  auto new_measure = [&](std::size_t i) {
    double m = 0.0;
    for (std::size_t c : cells[i].cells) {
      if (!covered[c]) m += g.cell_measure(c);
    }
    return m;
  };
  auto take = [&](std::size_t i) {
    taken[i] = 1;
    rep.selected.push_back(i);
    for (std::size_t c : cells[i].cells) {
      if (!covered[c]) {
        covered[c] = 1;
        rep.union_selected += g.cell_measure(c);
      }
    }
  };
  for (std::size_t i : order) {
    if (new_measure(i) >= 0.5 * cells[i].measure) take(i);
  }
  while (rep.union_all > 2.0 * rep.union_selected) {
    std::size_t best = balls.size();
    double best_m = 0.0;
    for (std::size_t i : order) {
      if (taken[i]) continue;
      const double m = new_measure(i);
      if (m > best_m) {
        best_m = m;
        best = i;
      }
    }
    if (best == balls.size()) break;
    take(best);
    ++rep.completion_added;
  }
  std::sort(rep.selected.begin(), rep.selected.end());

  std::vector<double> mult(g.n_cells(), 0.0);
  for (std::size_t i : rep.selected) {
    for (std::size_t c : cells[i].cells) mult[c] += 1.0;
  }
  std::vector<Sample> e;
  for (std::size_t c = 0; c < mult.size(); ++c) {
    if (mult[c] > 0.0) e.push_back({mult[c], g.cell_measure(c)});
  }
  rep.overlap_weak = weak_l2_norm(WeightedSamples(std::move(e)));
  return rep;
}

}  // namespace rank1ks
