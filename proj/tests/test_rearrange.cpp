#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rank1ks/parallel.hpp"
#include "rank1ks/rearrange.hpp"
#include "rank1ks/suites.hpp"

using namespace rank1ks;

TEST(Rearrangement, SingleAtom) {
  const StepProfile p = decreasing_rearrangement(WeightedSamples({{3.0, 2.0}}));
  EXPECT_EQ(p(0.5), 3.0);
  EXPECT_EQ(p(2.0), 3.0);
  EXPECT_EQ(p.breaks().back(), 2.0);
}

TEST(Rearrangement, SortsDescending) {
  const StepProfile p = decreasing_rearrangement(WeightedSamples({{1.0, 1.0}, {2.0, 1.0}}));
  EXPECT_EQ(p(0.5), 2.0);
  EXPECT_EQ(p(1.5), 1.0);
}

TEST(Rearrangement, ConservesMass) {
  Rng rng = make_rng(2, 0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Sample> e;
    const int n = 1 + static_cast<int>(uniform01(rng) * 30);
    for (int j = 0; j < n; ++j) e.push_back({10.0 * uniform01(rng), 0.01 + uniform01(rng)});
    const WeightedSamples f(e);
    EXPECT_NEAR(f.integral(), decreasing_rearrangement(f).integral(), 1e-12 * (1.0 + f.integral()));
  }
}

TEST(Lorentz, IndicatorNorms) {
  const WeightedSamples ind({{1.0, 4.0}});
  EXPECT_NEAR(lorentz_norm(ind, 2.0, 1.0), 4.0, 1e-14);
  EXPECT_NEAR(lorentz_norm(ind, 2.0, kInfinity), 2.0, 1e-14);
  EXPECT_NEAR(weak_l2_norm(WeightedSamples({{1.0, 9.0}})), 3.0, 1e-14);
}

TEST(Lorentz, WeakNormPerStep) {
  const WeightedSamples f({{2.0, 1.0}, {1.0, 3.0}});
  EXPECT_NEAR(lorentz_norm(f, 2.0, kInfinity), 2.0, 1e-14);
}

TEST(WeakNorm, HomogeneousAndMatchesLevelSweep) {
  Rng rng = make_rng(3, 0);
  std::vector<Sample> e;
  for (int j = 0; j < 40; ++j) e.push_back({5.0 * uniform01(rng), 0.1 + uniform01(rng)});
  const WeightedSamples f(e);
  const double w = weak_l2_norm(f);
  std::vector<Sample> scaled = e;
  for (auto& s : scaled) s.value *= 3.0;
  EXPECT_NEAR(weak_l2_norm(WeightedSamples(scaled)), 3.0 * w, 1e-12);

  // brute force: sup over λ of λ |{f > λ}|^{1/2}, approached from below
  double brute = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double lambda = 5.0 * i / 1000.0;
    double m = 0.0;
    for (const auto& s : e) m += s.value > lambda ? s.weight : 0.0;
    brute = std::max(brute, lambda * std::sqrt(m));
  }
  for (const auto& s : e) {
    double m = 0.0;
    for (const auto& q : e) m += q.value >= s.value ? q.weight : 0.0;
    brute = std::max(brute, s.value * std::sqrt(m));
  }
  EXPECT_NEAR(w, brute, 1e-9);
}

TEST(DoubleRearrangement, IdentityPattern) {
  WeightedMatrix a = WeightedMatrix::uniform(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  const DoubleProfile d = double_rearrangement(a);
  EXPECT_NEAR(d.integrate_rect(1.0, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(d.integrate_rect(1.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(d.integrate_rect(0.5, 0.5), 0.25, 1e-15);
  EXPECT_TRUE(d.is_bimonotone());
}

TEST(DoubleRearrangement, ConstantStaysConstant) {
  WeightedMatrix a = WeightedMatrix::uniform(3, 4);
  for (double& v : a.values) v = 2.5;
  const DoubleProfile d = double_rearrangement(a);
  for (double v : d.values) EXPECT_EQ(v, 2.5);
}

TEST(DoubleRearrangement, ConservationAndBimonotone) {
  Rng rng = make_rng(4, 0);
  for (int i = 0; i < 1000; ++i) {
    const WeightedMatrix a = random_weighted_matrix(rng, 12, true);
    const DoubleProfile d = double_rearrangement(a);
    EXPECT_NEAR(a.integral(), d.integral(), 1e-12 * std::max(1.0, a.integral()));
    EXPECT_TRUE(d.is_bimonotone());
  }
}

TEST(RectangleDomination, IdentityEquality) {
  WeightedMatrix a = WeightedMatrix::uniform(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  const InequalitySides s = rectangle_domination_check(a, {true, false}, {true, false});
  EXPECT_NEAR(s.lhs, 0.25, 1e-15);
  EXPECT_NEAR(s.rhs, 0.25, 1e-15);
}

TEST(RectangleDomination, EmptySet) {
  WeightedMatrix a = WeightedMatrix::uniform(2, 2);
  a(0, 1) = 1.0;
  const InequalitySides s = rectangle_domination_check(a, {false, false}, {true, true});
  EXPECT_EQ(s.lhs, 0.0);
  EXPECT_EQ(s.rhs, 0.0);
}

TEST(ExpEmbedding, PrefixIsExtremal) {
  const InequalitySides s = exp_embedding_check({{0.0, 1.0}}, 1.0);
  EXPECT_NEAR(s.lhs, 1.0, 1e-15);
  EXPECT_NEAR(s.rhs, 1.0, 1e-15);
}

TEST(ExpEmbedding, ShiftedInterval) {
  const InequalitySides s = exp_embedding_check({{1.0, 2.0}}, 1.0);
  EXPECT_NEAR(s.lhs, 1.0, 1e-15);
  EXPECT_NEAR(s.rhs, std::sqrt(3.0), 1e-7);
}

TEST(ExpEmbedding, RandomUnions) {
  Rng rng = make_rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    IntervalSet set;
    for (int j = 0; j < 3; ++j) {
      double a = 10.0 * uniform01(rng), b = 10.0 * uniform01(rng);
      if (a > b) std::swap(a, b);
      set.push_back({a, b + 1e-3});
    }
    const InequalitySides s = exp_embedding_check(set, 0.5 + uniform01(rng));
    EXPECT_LE(s.lhs, s.rhs * (1.0 + 1e-12));
  }
}

TEST(RowEmbedding, HandCases) {
  WeightedMatrix one{1, 1, {1.0}, {1.0}, {1.0}};
  RowEmbeddingSides s = row_l21_embedding_check(one, 1.0);
  EXPECT_NEAR(s.lhs, 2.0, 1e-14);
  EXPECT_NEAR(s.norm, 2.0, 1e-14);

  WeightedMatrix row{1, 2, {1.0, 1.0}, {1.0}, {1.0, 1.0}};
  s = row_l21_embedding_check(row, 1.0);
  EXPECT_NEAR(s.lhs, 2.0 * std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(s.norm, 2.0 * std::numbers::sqrt2, 1e-14);

  WeightedMatrix diag{2, 2, {2.0, 0.0, 0.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
  s = row_l21_embedding_check(diag, 1.0);
  EXPECT_NEAR(s.lhs, std::sqrt(20.0), 1e-12);
  EXPECT_NEAR(s.norm, 2.0 + 2.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_LT(s.lhs, s.norm);
}

TEST(GeneralProfile, ZeroInput) {
  const std::vector<double> kw{0.5, 0.5};
  const std::vector<WeightedSamples> slices{WeightedSamples({{0.0, 1.0}}),
                                            WeightedSamples({{0.0, 2.0}})};
  const StepProfile p = general_radial_profile(slices, kw);
  EXPECT_EQ(p.integral(), 0.0);
}

TEST(Suites, RearrangementQuickPasses) {
  SuiteConfig cfg;
  cfg.quick = true;
  const SuiteResult r = rearrangement_suite(cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}
