#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "rank1ks/convolution.hpp"
#include "rank1ks/suites.hpp"

using namespace rank1ks;

TEST(Trilinear, FactorizesWhenMiddleFunctionCoversAll) {
  const auto sp = make_space(2, 0);
  const auto ball = RadialFunction::ball(1.0);
  const McEstimate e = trilinear_mc(sp, ball, RadialFunction::ball(3.0), ball, 200000, 1);
  const double b1 = coordinate_ball_measure(sp, 1.0);
  EXPECT_NEAR(e.estimate, b1 * b1, 3.0 * e.stderr_ + 1e-12);
  EXPECT_EQ(e.hits, 200000u);
}

TEST(Trilinear, MidpointOracleOnLine) {
  // m1 = 1: points are (v, s) with measure e^{2ρ s} dv ds.
  const auto sp = make_space(1, 0);
  const auto f = RadialFunction::ball(0.6);
  const auto g = RadialFunction::ball(0.8);
  const int n = 40;
  std::vector<std::array<double, 3>> pts;  // v, s, weight
  const double L = 1.0;
  const double h = 2.0 * L / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = -L + (i + 0.5) * h;
      const double s = -L + (j + 0.5) * h;
      if (cartan_radius_sq(v * v, 0.0, s) < 0.6) pts.push_back({v, s, std::exp(s) * h * h});
    }
  }
  double exact = 0.0;
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      const double d = distance_coords(std::span<const double>(&a[0], 1), a[1],
                                       std::span<const double>(&b[0], 1), b[1]);
      exact += a[2] * b[2] * g(d);
    }
  }
  const McEstimate e = trilinear_mc(sp, f, g, f, 400000, 2);
  EXPECT_NEAR(e.estimate / exact, 1.0, 0.05);
}

TEST(MinYoung, CyclicDelta) {
  const std::vector<double> d{1.0, 0.0, 0.0, 0.0};
  const InequalitySides s = min_young_check(d, d, d);
  EXPECT_EQ(s.lhs, 1.0);
  EXPECT_EQ(s.rhs, 1.0);
  const std::vector<double> z(4, 0.0);
  const InequalitySides zero = min_young_check(d, z, d);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
}

TEST(MinYoung, RandomTriples) {
  Rng rng = make_rng(6, 0);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 64);
    std::vector<double> a(n), b(n), c(n);
    for (auto* v : {&a, &b, &c}) {
      for (double& x : *v) x = uniform01(rng) < 0.4 ? uniform01(rng) : 0.0;
    }
    const InequalitySides s = min_young_check(a, b, c);
    EXPECT_LE(s.lhs, s.rhs * (1.0 + 1e-12) + 1e-15);
  }
}

namespace {

DiscreteModel single_cell_model() {
  DiscreteModel m = DiscreteModel::zeros(1, 2, 2, 1.0);
  m.f1(0, 0) = 0.5;
  m.h1(0, 1) = 0.25;
  m.gtilde[m.gt_index(0, 0, 1)] = 1.0;
  m.G1[m.g1_index(0, 0, 1, 1)] = 1.0;
  return m;
}

}  // namespace

TEST(Chain, ZeroInputsGiveZero) {
  const auto sp = make_space(2, 0);
  Rng rng = make_rng(7, 0);
  DiscreteModel m = random_model(sp, ModelSpec{2, 16, 18, 2.0}, rng);
  const KernelCells kc = build_kernel_cells(sp, m);
  DiscreteModel g0 = m;
  std::fill(g0.G1.begin(), g0.G1.end(), 0.0);
  std::fill(g0.gtilde.begin(), g0.gtilde.end(), 0.0);
  EXPECT_EQ(chain_step1_bound(sp, g0, kc), 0.0);
  EXPECT_EQ(chain_step3_bound(sp, g0), 0.0);
  DiscreteModel f0 = m;
  std::fill(f0.F1.begin(), f0.F1.end(), 0.0);
  EXPECT_EQ(chain_step2_bound(sp, f0, kc), 0.0);
}

TEST(Chain, DoublingG1NeverDecreasesStep1) {
  const auto sp = make_space(2, 0);
  Rng rng = make_rng(8, 0);
  DiscreteModel m = random_model(sp, ModelSpec{2, 16, 18, 2.0}, rng);
  const KernelCells kc = build_kernel_cells(sp, m);
  const double before = chain_step1_bound(sp, m, kc);
  for (double& g : m.G1) g = std::min(1.0, 2.0 * g);
  EXPECT_GE(chain_step1_bound(sp, m, kc), before);
}

TEST(Chain, SingleCellStep1) {
  const auto sp = make_space(2, 0);
  const DiscreteModel m = single_cell_model();
  const KernelCells kc = build_kernel_cells(sp, m);
  const double v = chain_step1_bound(sp, m, kc);
  // one term: min(0.5, 0.25) · Q(σ = 1) · e^{ρ(t0 + t1)} h², with t0 = -1, t1 = 1, h = 2
  const std::vector<double> q = slice_kernel_sums(m, kc);
  const double expected = 0.25 * q[2] * 1.0 * 4.0;
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(v, expected, 1e-10 * expected);
}

TEST(Chain, QuickSuitePasses) {
  SuiteConfig cfg;
  cfg.quick = true;
  const SuiteResult r = chain_suite(cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST(Split, Homogeneous) {
  const auto sp = make_space(2, 0);
  const double one = split_optimize(sp, SplitNorms{1.0, 1.0, 1.0});
  EXPECT_GT(one, 0.0);
  EXPECT_NEAR(split_optimize(sp, SplitNorms{1.0, 3.0, 1.0}), 3.0 * one, 1e-12 * one);
}

TEST(Endpoint, SmallBallRatioVanishes) {
  const auto sp = make_space(2, 0);
  const auto rows = endpoint_ratio_sweep(sp, {0.05, 0.2, 1.0}, 100000, 4);
  EXPECT_LT(rows[0].ratio, rows[1].ratio);
  EXPECT_LT(rows[1].ratio, rows[2].ratio);
}

TEST(RearrangedBound, QuickSuitePasses) {
  SuiteConfig cfg;
  cfg.quick = true;
  const SuiteResult r = rearranged_phi_suite(cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}
