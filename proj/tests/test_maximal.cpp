#include <cmath>

#include <gtest/gtest.h>

#include "rank1ks/maximal.hpp"
#include "rank1ks/suites.hpp"

using namespace rank1ks;

namespace {

GridModel line_grid(int n = 128, double V = 16.0, double S = 4.0) {
  return GridModel::make(make_space(1, 0), n, n, V, S);
}

/// Brute-force average of f over the cells whose centres lie in B(c, r).
double brute_average(const FieldGrid& f, const IwasawaPoint& c, double r) {
  const GridModel& g = *f.model;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.n_cells(); ++k) {
    const IwasawaPoint z = g.center(k);
    if (distance_coords(c.v, c.s, z.v, z.s) < r) {
      num += f.values[k] * g.cell_measure(k);
      den += g.cell_measure(k);
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

TEST(Grid, RejectsUnsupportedShapes) {
  EXPECT_THROW(GridModel::make(make_space(2, 1), 8, 8, 1.0, 1.0), Error);
  EXPECT_THROW(GridModel::make(make_space(3, 0), 8, 8, 1.0, 1.0), Error);
}

TEST(Grid, BallMeasureMatchesVolume) {
  const auto sp = make_space(1, 0);
  const GridModel g = GridModel::make(sp, 256, 256, 8.0, 3.0);
  const GridModel fine = GridModel::make(sp, 512, 512, 8.0, 3.0);
  const double exact = coordinate_ball_measure(sp, 1.0);
  const auto coarse = ball_cells(g, BallSpec(g, origin_point(sp), 1.0));
  const auto refined = ball_cells(fine, BallSpec(fine, origin_point(sp), 1.0));
  EXPECT_NEAR(coarse.measure / exact, 1.0, 0.03);
  EXPECT_LE(std::fabs(refined.measure / exact - 1.0), std::fabs(coarse.measure / exact - 1.0) + 1e-3);
}

TEST(Grid, MeasureTranslationInvariant) {
  const auto sp = make_space(1, 0);
  const GridModel g = GridModel::make(sp, 256, 256, 8.0, 3.0);
  const double a = ball_cells(g, BallSpec(g, {{0.0}, {}, 0.5}, 1.0)).measure;
  const double b = ball_cells(g, BallSpec(g, {{2.3}, {}, 0.5}, 1.0)).measure;
  EXPECT_NEAR(a / b, 1.0, 0.01);
}

TEST(Grid, TinyBallIsContainingCell) {
  const GridModel g = line_grid();
  const auto cells = ball_cells(g, BallSpec(g, {{0.01}, {}, 0.01}, 1e-4));
  ASSERT_EQ(cells.cells.size(), 1u);
  const IwasawaPoint c = g.center(cells.cells[0]);
  EXPECT_LE(std::fabs(c.v[0] - 0.01), 0.5 * g.dv());
  EXPECT_LE(std::fabs(c.s - 0.01), 0.5 * g.ds());
}

TEST(Grid, ContainmentRejected) {
  const GridModel g = line_grid();
  EXPECT_THROW(BallSpec(g, {{0.0}, {}, 3.5}, 1.0), ContainmentError);
}

TEST(Centered, ConstantField) {
  const GridModel g = line_grid(64);
  const FieldGrid f(g, 2.0);
  const SlicePrefix p(f);
  const std::size_t c = g.index(32, 0, 32);
  EXPECT_NEAR(m1_centered(f, p, c, {0.5, 1.0}), 2.0, 1e-12);
}

TEST(Centered, UnitBallAtOrigin) {
  const GridModel g = line_grid();
  FieldGrid f(g);
  add_ball(f, std::vector<double>{0.0}, 0.0, 1.0);
  const SlicePrefix p(f);
  const std::size_t c = g.index(g.n_s / 2, 0, g.n_v / 2);
  EXPECT_NEAR(m1_centered(f, p, c, geometric_radii(0.25, 1.0, 4)), 1.0, 1e-12);
}

TEST(Centered, MatchesBruteForceAwayFromSupport) {
  const GridModel g = line_grid();
  FieldGrid f(g);
  add_ball(f, std::vector<double>{0.0}, 0.0, 1.0);
  const SlicePrefix p(f);
  // a cell near distance 3 from the origin along v
  std::size_t cell = 0;
  double best = 1e9;
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const IwasawaPoint z = g.center(c);
    if (std::fabs(z.s) > g.ds()) continue;
    const double d = std::fabs(distance_coords(std::vector<double>{0.0}, 0.0, z.v, z.s) - 3.0);
    if (d < best) {
      best = d;
      cell = c;
    }
  }
  const std::vector<double> radii = geometric_radii(0.5, 3.0, 4);
  double brute = 0.0;
  for (double r : radii) brute = std::max(brute, brute_average(f, g.center(cell), r));
  EXPECT_NEAR(m1_centered(f, p, cell, radii), brute, 1e-12);
}

TEST(NonCentered, DominatesCentredAndCandidateOracle) {
  const GridModel g = line_grid();
  FieldGrid f(g);
  add_ball(f, std::vector<double>{0.0}, 0.0, 1.0);
  const auto radii = geometric_radii(0.5, 3.0, 4);
  const auto m1 = m1_centered_field(f, radii);
  const auto m2 = m2_noncentered_field(f, radii);
  for (std::size_t c = 0; c < m1.size(); ++c) ASSERT_LE(m1[c], m2[c]);

  // a point at distance 2 sees the ball B(o, 2) through it, which contains B(o, 1)
  const SlicePrefix p(f);
  const std::size_t cell = g.index(g.n_s / 2, 0, g.n_v / 2);
  std::vector<BallSpec> cands{BallSpec(g, origin_point(make_space(1, 0)), 2.5)};
  const double v = m2_noncentered(f, p, cell, cands);
  EXPECT_NEAR(v, brute_average(f, origin_point(make_space(1, 0)), 2.5), 1e-12);
}

TEST(NonCentered, ConstantField) {
  const GridModel g = line_grid(64);
  const FieldGrid f(g, 3.0);
  const auto m2 = m2_noncentered_field(f, {0.5, 1.0});
  for (double v : m2) EXPECT_NEAR(v, 3.0, 1e-12);
}

TEST(Tilde, ZeroFieldAndUnitBall) {
  const GridModel g = line_grid();
  EXPECT_EQ(m2_tilde_field(FieldGrid(g), {1.0, 2.0})[0], 0.0);
  FieldGrid f(g);
  const std::size_t c = g.index(g.n_s / 2, 0, g.n_v / 2);
  const IwasawaPoint z = g.center(c);
  add_ball(f, z.v, z.s, 1.0);
  const SlicePrefix p(f);
  const double at_one = m2_tilde(f, p, c, {1.0});
  EXPECT_NEAR(m2_tilde(f, p, c, geometric_radii(1.0, 4.0, 4)), at_one, 1e-12);
  const double mass = f.integral();
  EXPECT_NEAR(at_one, mass / std::sqrt(coordinate_ball_measure(make_space(1, 0), 1.0)), 1e-12);
  // mass over √|B| with mass ≈ |B|, so at_one ≈ |B|^{1/2}
  EXPECT_NEAR(at_one / std::sqrt(coordinate_ball_measure(make_space(1, 0), 1.0)), 1.0, 0.03);
  EXPECT_THROW(m2_tilde(f, p, c, {0.5}), InvalidArgument);
}

TEST(Nilpotent, ConstantOnSlice) {
  const GridModel g = line_grid(128);
  const FieldGrid f(g, 1.0);
  const SlicePrefix p(f);
  const std::size_t c = g.index(10, 0, 64);
  // slice average over |m| < u has measure 2u; max_u u^{-1} · 2u = 2
  EXPECT_NEAR(m3_nilpotent(f, p, c, {0.5, 1.0, 2.0}), 2.0, 2.0 * g.dv());
}

TEST(Nilpotent, IndependentOfSliceWeight) {
  const GridModel g = line_grid(128);
  FieldGrid f(g);
  for (int k : {5, 100}) {
    for (int i = 0; i < g.n_v; ++i) {
      if (std::fabs(g.v_center(i)) <= 1.0) f.values[g.index(k, 0, i)] = 1.0;
    }
  }
  const auto m3 = m3_field(f, geometric_radii(0.25, 8.0, 4));
  EXPECT_NEAR(m3[g.index(5, 0, 64)], m3[g.index(100, 0, 64)], 1e-12);
  // brute force over the same u-list
  double brute = 0.0;
  for (double u : geometric_radii(0.25, 8.0, 4)) {
    double acc = 0.0;
    for (int i = 0; i < g.n_v; ++i) {
      if (std::fabs(g.v_center(i) - g.v_center(64)) < u) acc += f.values[g.index(5, 0, i)] * g.dv();
    }
    brute = std::max(brute, acc / u);
  }
  EXPECT_NEAR(m3[g.index(5, 0, 64)], brute, 1e-12);
}

TEST(Domination, ZeroFieldReportsZero) {
  const GridModel g = line_grid(64);
  const DominationResult d = pointwise_domination_check(FieldGrid(g), {1.0}, {0.5, 1.0});
  EXPECT_EQ(d.max_ratio, 0.0);
  EXPECT_EQ(d.violations, 0u);
}

TEST(Domination, UnitBallBelowPinned) {
  const GridModel g = line_grid(256);
  FieldGrid f(g);
  add_ball(f, std::vector<double>{0.0}, 0.0, 1.0);
  const DominationResult d =
      pointwise_domination_check(f, geometric_radii(1.0, 3.0, 4), geometric_radii(0.5 * g.dv(), 32.0, 2));
  EXPECT_GT(d.max_ratio, 0.0);
  EXPECT_LE(d.max_ratio, pinned::kDomination);
  EXPECT_EQ(d.violations, 0u);
}

TEST(Covering, SingleAndDisjoint) {
  const auto sp = make_space(1, 0);
  const GridModel g = GridModel::make(sp, 256, 128, 32.0, 4.0);
  const CoveringReport one = covering_select(g, {BallSpec(g, origin_point(sp), 1.5)});
  EXPECT_EQ(one.selected.size(), 1u);
  EXPECT_NEAR(one.union_ratio(), 1.0, 1e-15);

  std::vector<BallSpec> disjoint;
  for (double v : {-20.0, 0.0, 20.0}) disjoint.emplace_back(g, IwasawaPoint{{v}, {}, 0.0}, 1.0);
  const CoveringReport rep = covering_select(g, disjoint);
  EXPECT_EQ(rep.selected.size(), 3u);
  EXPECT_NEAR(rep.union_ratio(), 1.0, 1e-15);
  EXPECT_NEAR(rep.overlap_ratio(), 1.0, 1e-12);
}

TEST(Covering, QuickSuitePasses) {
  SuiteConfig cfg;
  cfg.quick = true;
  const SuiteResult r = covering_suite(cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}
