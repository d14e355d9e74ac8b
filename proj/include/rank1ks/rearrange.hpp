#pragma once

// Nonincreasing rearrangements on finite measure spaces, Lorentz quasinorms,
// and the elementary embedding inequalities built on them.
//
// Every input is a finite weighted sample set; every output is an exact
// right-continuous step function. The L^{p,q} functional is the quasinorm
//     ‖f‖_{p,q} = ( ∫_0^M [t^{1/p} f*(t)]^q dt/t )^{1/q},
// so an indicator of a set E has ‖χ_E‖_{2,1} = 2|E|^{1/2}, ‖χ_E‖_{2,∞} = |E|^{1/2}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rank1ks/errors.hpp"

namespace rank1ks {

struct Sample {
  double value = 0.0;
  double weight = 0.0;
};

/// Discrete nonnegative function on a finite measure space.
class WeightedSamples {
 public:
  WeightedSamples() = default;

  explicit WeightedSamples(std::vector<Sample> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw InvalidArgument("sample weights must be positive and finite");
      }
      if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
        throw InvalidArgument("sample values must be nonnegative and finite");
      }
      total_mass_ += e.weight;
    }
  }

  WeightedSamples(std::span<const double> values, std::span<const double> weights)
      : WeightedSamples(zip(values, weights)) {}

  /// Values with a common weight.
  static WeightedSamples uniform(std::span<const double> values, double weight) {
    std::vector<Sample> e;
    e.reserve(values.size());
    for (double v : values) e.push_back({v, weight});
    return WeightedSamples(std::move(e));
  }

  const std::vector<Sample>& entries() const { return entries_; }
  double total_mass() const { return total_mass_; }
  std::size_t size() const { return entries_.size(); }

  /// ∫ f dμ.
  double integral() const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += e.value * e.weight;
    return acc;
  }

  /// μ{f > λ}.
  double distribution(double lambda) const {
    double acc = 0.0;
    for (const auto& e : entries_) {
      if (e.value > lambda) acc += e.weight;
    }
    return acc;
  }

 private:
  static std::vector<Sample> zip(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
      throw InvalidArgument("values and weights differ in length");
    }
    std::vector<Sample> e(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) e[i] = {values[i], weights[i]};
    return e;
  }

  std::vector<Sample> entries_;
  double total_mass_ = 0.0;
};

/// Right-continuous nonincreasing step function on (0, M]: the value
/// values[i] is taken on (breaks[i-1], breaks[i]] with breaks[-1] = 0.
class StepProfile {
 public:
  StepProfile() = default;

  StepProfile(std::vector<double> breaks, std::vector<double> values)
      : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.size() != values_.size()) {
      throw InvalidArgument("step profile needs one value per interval");
    }
    double prev_b = 0.0;
    double prev_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (!(breaks_[i] > prev_b)) throw InvalidArgument("breakpoints must increase strictly");
      if (!(values_[i] >= 0.0)) throw InvalidArgument("profile values must be nonnegative");
      if (values_[i] > prev_v) throw InvalidArgument("profile values must be nonincreasing");
      prev_b = breaks_[i];
      prev_v = values_[i];
    }
  }

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t steps() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double total_mass() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
  double left(std::size_t i) const { return i == 0 ? 0.0 : breaks_[i - 1]; }

  /// f*(x); zero outside (0, M].
  double operator()(double x) const {
    if (x <= 0.0 || breaks_.empty() || x > breaks_.back()) return 0.0;
    const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  double integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < steps(); ++i) acc += values_[i] * (breaks_[i] - left(i));
    return acc;
  }

  double integral_of_square() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < steps(); ++i) {
      acc += values_[i] * values_[i] * (breaks_[i] - left(i));
    }
    return acc;
  }

  /// |{x : f*(x) > λ}|.
  double distribution(double lambda) const {
    double m = 0.0;
    for (std::size_t i = 0; i < steps(); ++i) {
      if (values_[i] > lambda) m = breaks_[i];
    }
    return m;
  }

  StepProfile scaled(double c) const {
    if (!(c >= 0.0)) throw InvalidArgument("scale factor must be nonnegative");
    if (c == 0.0) return StepProfile({total_mass()}, {0.0});
    std::vector<double> v = values_;
    for (double& x : v) x *= c;
    return StepProfile(breaks_, std::move(v));
  }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

namespace detail {

/// Builds a profile from (value, width) pieces already sorted by value
/// descending, merging equal neighbours.
inline StepProfile profile_from_sorted(std::span<const Sample> sorted) {
  std::vector<double> breaks;
  std::vector<double> values;
  double acc = 0.0;
  for (const auto& s : sorted) {
    acc += s.weight;
    if (!values.empty() && values.back() == s.value) {
      breaks.back() = acc;
    } else {
      breaks.push_back(acc);
      values.push_back(s.value);
    }
  }
  return StepProfile(std::move(breaks), std::move(values));
}

/// Canonical order: value descending, ties by weight descending. Entries
/// that compare equal are indistinguishable, so the result does not depend
/// on the input order.
inline void canonical_sort(std::vector<Sample>& e) {
  std::stable_sort(e.begin(), e.end(), [](const Sample& a, const Sample& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.weight > b.weight;
  });
}

/// Union of sorted breakpoint lists. Breaks that agree to rounding are
/// collapsed (keeping the largest), otherwise cumulative weight sums taken in
/// different orders leave sliver cells whose midpoints sample the wrong step.
inline std::vector<double> merge_breaks(const std::vector<std::vector<double>>& lists) {
  std::vector<double> all;
  for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
  std::sort(all.begin(), all.end());
  if (all.empty()) return all;
  const double eps = 1e-12 * std::max(1.0, std::fabs(all.back()));
  std::vector<double> out;
  for (double x : all) {
    if (!out.empty() && x - out.back() <= eps) {
      out.back() = x;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace detail

/// Nonincreasing rearrangement f* on (0, μ(total)].
inline StepProfile decreasing_rearrangement(const WeightedSamples& f) {
  std::vector<Sample> e = f.entries();
  detail::canonical_sort(e);
  return detail::profile_from_sorted(e);
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Lorentz L^{p,q} quasinorm of a rearranged function; q may be +∞.
/// For q < ∞ each step contributes v^q (p/q)(b^{q/p} - a^{q/p}) exactly.
inline double lorentz_norm(const StepProfile& f, double p, double q) {
  if (!(p > 0.0)) throw InvalidArgument("Lorentz exponent p must be positive");
  if (!(q > 0.0)) throw InvalidArgument("Lorentz exponent q must be positive");
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i = 0; i < f.steps(); ++i) {
      best = std::max(best, f.values()[i] * std::pow(f.breaks()[i], 1.0 / p));
    }
    return best;
  }
  const double e = q / p;
  double acc = 0.0;
  for (std::size_t i = 0; i < f.steps(); ++i) {
    const double v = f.values()[i];
    if (v == 0.0) continue;
    acc += std::pow(v, q) * (std::pow(f.breaks()[i], e) - std::pow(f.left(i), e)) / e;
  }
  return std::pow(acc, 1.0 / q);
}

inline double lorentz_norm(const WeightedSamples& f, double p, double q) {
  return lorentz_norm(decreasing_rearrangement(f), p, q);
}

/// ‖f‖_{L^{2,∞}} = sup_λ λ μ{f > λ}^{1/2}.
inline double weak_l2_norm(const WeightedSamples& f) {
  return lorentz_norm(decreasing_rearrangement(f), 2.0, kInfinity);
}

/// Dense row-major nonnegative matrix with positive row and column weights,
/// the discrete carrier of a function on K × K'.
struct WeightedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;       // rows * cols
  std::vector<double> row_weights;  // rows
  std::vector<double> col_weights;  // cols

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }

  static WeightedMatrix uniform(std::size_t rows, std::size_t cols) {
    return WeightedMatrix{rows, cols, std::vector<double>(rows * cols, 0.0),
                          std::vector<double>(rows, 1.0 / static_cast<double>(rows)),
                          std::vector<double>(cols, 1.0 / static_cast<double>(cols))};
  }

  void validate() const {
    if (values.size() != rows * cols || row_weights.size() != rows || col_weights.size() != cols) {
      throw InvalidArgument("matrix dimensions do not match its weights");
    }
    for (double w : row_weights) {
      if (!(w > 0.0)) throw InvalidArgument("row weights must be positive");
    }
    for (double w : col_weights) {
      if (!(w > 0.0)) throw InvalidArgument("column weights must be positive");
    }
    for (double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("matrix entries must be >= 0");
    }
  }

  double integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) acc += (*this)(i, j) * row_weights[i] * col_weights[j];
    }
    return acc;
  }

  WeightedSamples row(std::size_t i) const {
    std::vector<Sample> e(cols);
    for (std::size_t j = 0; j < cols; ++j) e[j] = {(*this)(i, j), col_weights[j]};
    return WeightedSamples(std::move(e));
  }

  WeightedSamples flattened() const {
    std::vector<Sample> e;
    e.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        e.push_back({(*this)(i, j), row_weights[i] * col_weights[j]});
      }
    }
    return WeightedSamples(std::move(e));
  }
};

/// Piecewise-constant function on (0, X] × (0, Y], nonincreasing in both
/// variables. values[ix * ny + iy] holds the value on
/// (x_breaks[ix-1], x_breaks[ix]] × (y_breaks[iy-1], y_breaks[iy]].
struct DoubleProfile {
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  std::vector<double> values;

  std::size_t nx() const { return x_breaks.size(); }
  std::size_t ny() const { return y_breaks.size(); }
  double x_left(std::size_t i) const { return i == 0 ? 0.0 : x_breaks[i - 1]; }
  double y_left(std::size_t j) const { return j == 0 ? 0.0 : y_breaks[j - 1]; }
  double cell(std::size_t i, std::size_t j) const { return values[i * ny() + j]; }

  double operator()(double x, double y) const {
    if (x <= 0.0 || y <= 0.0 || x_breaks.empty() || y_breaks.empty()) return 0.0;
    if (x > x_breaks.back() || y > y_breaks.back()) return 0.0;
    const auto i = static_cast<std::size_t>(
        std::lower_bound(x_breaks.begin(), x_breaks.end(), x) - x_breaks.begin());
    const auto j = static_cast<std::size_t>(
        std::lower_bound(y_breaks.begin(), y_breaks.end(), y) - y_breaks.begin());
    return cell(i, j);
  }

  /// ∫_0^X ∫_0^Y a**(x, y) dy dx, with partial cells handled exactly.
  double integrate_rect(double X, double Y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nx(); ++i) {
      const double wx = std::clamp(X, x_left(i), x_breaks[i]) - x_left(i);
      if (wx <= 0.0) break;
      for (std::size_t j = 0; j < ny(); ++j) {
        const double wy = std::clamp(Y, y_left(j), y_breaks[j]) - y_left(j);
        if (wy <= 0.0) break;
        acc += cell(i, j) * wx * wy;
      }
    }
    return acc;
  }

  double integral() const {
    return integrate_rect(x_breaks.empty() ? 0.0 : x_breaks.back(),
                          y_breaks.empty() ? 0.0 : y_breaks.back());
  }

  /// Checks a**(x, y) <= a**(x', y') whenever x >= x' and y >= y'.
  bool is_bimonotone() const {
    for (std::size_t i = 0; i < nx(); ++i) {
      for (std::size_t j = 0; j < ny(); ++j) {
        if (i + 1 < nx() && cell(i + 1, j) > cell(i, j)) return false;
        if (j + 1 < ny() && cell(i, j + 1) > cell(i, j)) return false;
      }
    }
    return true;
  }
};

/// Double rearrangement a**: rearrange every row in k' to get a*(k, y), then
/// rearrange k ↦ a*(k, y) for each fixed y.
inline DoubleProfile double_rearrangement(const WeightedMatrix& a) {
  a.validate();
  std::vector<StepProfile> rows(a.rows);
  std::vector<std::vector<double>> row_breaks(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    rows[i] = decreasing_rearrangement(a.row(i));
    row_breaks[i] = rows[i].breaks();
  }
  DoubleProfile out;
  out.y_breaks = detail::merge_breaks(row_breaks);

  std::vector<StepProfile> columns(out.y_breaks.size());
  std::vector<std::vector<double>> col_breaks(out.y_breaks.size());
  for (std::size_t j = 0; j < out.y_breaks.size(); ++j) {
    const double ymid = 0.5 * (out.y_left(j) + out.y_breaks[j]);
    std::vector<Sample> col(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) col[i] = {rows[i](ymid), a.row_weights[i]};
    columns[j] = decreasing_rearrangement(WeightedSamples(std::move(col)));
    col_breaks[j] = columns[j].breaks();
  }
  out.x_breaks = detail::merge_breaks(col_breaks);
  out.values.assign(out.nx() * out.ny(), 0.0);
  for (std::size_t i = 0; i < out.nx(); ++i) {
    const double xmid = 0.5 * (out.x_left(i) + out.x_breaks[i]);
    for (std::size_t j = 0; j < out.ny(); ++j) out.values[i * out.ny() + j] = columns[j](xmid);
  }
  return out;
}

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInfinity : 0.0); }
};

/// ∫_D ∫_E a versus ∫_0^{|D|} ∫_0^{|E|} a**.
inline InequalitySides rectangle_domination_check(const WeightedMatrix& a,
                                                  const std::vector<bool>& in_d,
                                                  const std::vector<bool>& in_e) {
  a.validate();
  if (in_d.size() != a.rows || in_e.size() != a.cols) {
    throw InvalidArgument("subset masks do not match matrix dimensions");
  }
  double lhs = 0.0;
  double md = 0.0;
  double me = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (in_d[i]) md += a.row_weights[i];
  }
  for (std::size_t j = 0; j < a.cols; ++j) {
    if (in_e[j]) me += a.col_weights[j];
  }
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (!in_d[i]) continue;
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (in_e[j]) lhs += a(i, j) * a.row_weights[i] * a.col_weights[j];
    }
  }
  if (md == 0.0 || me == 0.0) return {lhs, 0.0};
  return {lhs, double_rearrangement(a).integrate_rect(md, me)};
}

/// Closed intervals [a, b] ⊂ [0, ∞) describing a {0,1}-valued function.
using IntervalSet = std::vector<std::pair<double, double>>;

/// Sorts and merges overlapping intervals; rejects malformed ones.
inline IntervalSet normalize_intervals(IntervalSet set) {
  for (const auto& [a, b] : set) {
    if (!(a >= 0.0) || !(b >= a) || !std::isfinite(b)) {
      throw InvalidArgument("intervals must satisfy 0 <= a <= b < inf");
    }
  }
  std::sort(set.begin(), set.end());
  IntervalSet out;
  for (const auto& iv : set) {
    if (iv.second == iv.first) continue;
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

/// The exponential-measure embedding in its substituted form: with
/// g = χ_S, S ⊂ R_+,
///     lhs = (1/|δ|) ∫ g(s) ds,   rhs = C_δ [(1/|δ|) ∫ g(s) s ds]^{1/2},
/// C_δ = (2/|δ|)^{1/2}. Equality holds exactly when S is a prefix [0, λ].
inline InequalitySides exp_embedding_check(const IntervalSet& g, double delta) {
  if (delta == 0.0 || !std::isfinite(delta)) {
    throw InvalidArgument("exp_embedding_check requires a finite nonzero delta");
  }
  const IntervalSet s = normalize_intervals(g);
  double mass = 0.0;
  double moment = 0.0;
  for (const auto& [a, b] : s) {
    mass += b - a;
    moment += 0.5 * (b - a) * (b + a);
  }
  const double ad = std::fabs(delta);
  return {mass / ad, std::sqrt(2.0 / ad) * std::sqrt(moment / ad)};
}

struct RowEmbeddingSides {
  double lhs = 0.0;   // (Σ_u w_u ‖H(u,·)‖²_{2,1})^{1/2}
  double norm = 0.0;  // ‖H‖_{L^{2,1}(U×V)}
  double rhs = 0.0;   // constant · norm
};

/// Mixed-norm embedding (∫_U ‖H(u,·)‖²_{L^{2,1}(V)} du)^{1/2} <= C ‖H‖_{L^{2,1}(U×V)}.
inline RowEmbeddingSides row_l21_embedding_check(const WeightedMatrix& h, double constant) {
  h.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < h.rows; ++i) {
    const double n = lorentz_norm(h.row(i), 2.0, 1.0);
    acc += h.row_weights[i] * n * n;
  }
  RowEmbeddingSides out;
  out.lhs = std::sqrt(acc);
  out.norm = lorentz_norm(h.flattened(), 2.0, 1.0);
  out.rhs = constant * out.norm;
  return out;
}

/// Rearranged radial profile of a general nonnegative function on K × N̄A.
///
/// slices[k] holds the values of f(·k) on N̄A cells with their measures
/// e^{2ρs} dv ds; k_weights are the K-atom masses. The three stages are
///  1. f̃(k, r): rearrangement of each slice over N̄A;
///  2. F̃(x, r): for fixed r, rearrangement of k ↦ f̃(k, r);
///  3. F*(x) = ½ ∫_0^∞ F̃(x, r) r^{-1/2} dr, exact per step in r.
/// For an indicator this reduces to the rearrangement of k ↦ |slice support|^{1/2}.
inline StepProfile general_radial_profile(const std::vector<WeightedSamples>& slices,
                                          std::span<const double> k_weights) {
  if (slices.size() != k_weights.size() || slices.empty()) {
    throw InvalidArgument("one K-weight per slice is required");
  }
  for (double w : k_weights) {
    if (!(w > 0.0)) throw InvalidArgument("K-weights must be positive");
  }
  const std::size_t nk = slices.size();
  std::vector<StepProfile> per_k(nk);
  std::vector<std::vector<double>> r_lists(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    per_k[k] = decreasing_rearrangement(slices[k]);
    r_lists[k] = per_k[k].breaks();
  }
  const std::vector<double> r_breaks = detail::merge_breaks(r_lists);

  std::vector<StepProfile> by_r(r_breaks.size());
  std::vector<std::vector<double>> x_lists(r_breaks.size());
  std::vector<double> r_weight(r_breaks.size());
  for (std::size_t j = 0; j < r_breaks.size(); ++j) {
    const double rl = j == 0 ? 0.0 : r_breaks[j - 1];
    const double rmid = 0.5 * (rl + r_breaks[j]);
    r_weight[j] = std::sqrt(r_breaks[j]) - std::sqrt(rl);  // ½ ∫ r^{-1/2} dr
    std::vector<Sample> col(nk);
    for (std::size_t k = 0; k < nk; ++k) col[k] = {per_k[k](rmid), k_weights[k]};
    by_r[j] = decreasing_rearrangement(WeightedSamples(std::move(col)));
    x_lists[j] = by_r[j].breaks();
  }
  const double total = std::accumulate(k_weights.begin(), k_weights.end(), 0.0);
  x_lists.push_back({total});
  const std::vector<double> x_breaks = detail::merge_breaks(x_lists);

  std::vector<double> breaks;
  std::vector<double> values;
  for (std::size_t i = 0; i < x_breaks.size(); ++i) {
    const double xl = i == 0 ? 0.0 : x_breaks[i - 1];
    const double xmid = 0.5 * (xl + x_breaks[i]);
    double v = 0.0;
    for (std::size_t j = 0; j < r_breaks.size(); ++j) v += by_r[j](xmid) * r_weight[j];
    if (!values.empty() && values.back() <= v) {
      // Equal up to rounding; keep the profile monotone.
      breaks.back() = x_breaks[i];
      continue;
    }
    breaks.push_back(x_breaks[i]);
    values.push_back(v);
  }
  return StepProfile(std::move(breaks), std::move(values));
}

}  // namespace rank1ks
