#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rank1ks/constants.hpp"
#include "rank1ks/kernel.hpp"

using namespace rank1ks;

TEST(Psi, VanishesBelowDiagonal) {
  for (auto sp : {make_space(1, 0), make_space(2, 0), make_space(2, 1), make_space(4, 3)}) {
    EXPECT_EQ(psi(sp, 0.5, 1.0), 0.0);
  }
}

TEST(Psi, PlaneCaseIsSinhT) {
  const auto sp = make_space(2, 0);
  for (double s : {-2.0, -1.0, 0.0, 0.5, 1.9}) EXPECT_NEAR(psi(sp, 2.0, s), std::sinh(2.0), 1e-12);
  EXPECT_NEAR(std::sinh(2.0), 3.6268604, 1e-7);
}

TEST(Psi, EvenInS) {
  const auto sp = make_space(2, 1);
  for (double s : {0.3, 1.1, 2.5}) EXPECT_NEAR(psi(sp, 3.0, s), psi(sp, 3.0, -s), 1e-12);
}

TEST(Comparator, Values) {
  EXPECT_NEAR(psi_comparator(make_space(2, 0), 2.0, 0.0), std::sinh(2.0), 1e-12);
  EXPECT_EQ(psi_comparator(make_space(2, 1), 1.0, 1.0), 0.0);
}

TEST(Comparator, RatioBandedOnCoarseGrid) {
  for (auto sp : {make_space(1, 0), make_space(2, 1), make_space(4, 3)}) {
    for (double s = -3.0; s <= 3.0; s += 0.5) {
      for (double t = std::fabs(s) + 0.01; t <= 6.0; t += 0.5) {
        const double r = psi(sp, t, s) / psi_comparator(sp, t, s);
        EXPECT_LE(r, pinned::kKernelComparability);
        EXPECT_GE(r, 1.0 / pinned::kKernelComparability);
      }
    }
  }
}

TEST(Abel, BallClosedForm) {
  const auto sp = make_space(2, 0);
  for (double R : {1.0, 3.0, 6.0}) {
    for (double s : {0.0, 0.4, -0.9}) {
      if (std::fabs(s) > R) continue;
      EXPECT_NEAR(abel_transform(sp, RadialFunction::ball(R), s), std::cosh(R) - std::cosh(s),
                  1e-9 * std::cosh(R));
    }
    EXPECT_EQ(abel_transform(sp, RadialFunction::ball(R), R + 0.5), 0.0);
  }
  EXPECT_NEAR(abel_transform(sp, RadialFunction::ball(1.0), 0.0), 0.5430806, 1e-7);
}

TEST(Abel, ZeroFunctionBound) {
  const auto sp = make_space(2, 0);
  const AbelBound b = abel_l21_bound(sp, RadialFunction({0.0, 1.0}, {0.0}), {0.0, 0.5});
  EXPECT_EQ(b.sup_lhs, 0.0);
  EXPECT_EQ(b.rhs, 0.0);
}

TEST(Abel, BallFamilySaturates) {
  const auto sp = make_space(2, 0);
  double m10 = 0.0, m20 = 0.0;
  for (int R = 1; R <= 20; ++R) {
    std::vector<double> grid;
    for (int i = 0; i * 0.25 <= R; ++i) grid.push_back(i * 0.25);
    const double r = abel_l21_bound(sp, RadialFunction::ball(R), grid).ratio();
    if (R <= 10) m10 = std::max(m10, r);
    m20 = std::max(m20, r);
    EXPECT_LE(r, pinned::kAbelL21);
  }
  EXPECT_LT(m20 / m10 - 1.0, 0.05);
}

TEST(Phi, Branches) {
  EXPECT_NEAR(phi_weight(make_space(2, 1), 0.5), 0.125, 1e-15);
  EXPECT_NEAR(phi_weight(make_space(2, 0), 2.0), 7.3890561, 1e-7);
  // the two branches meet only up to the factor e^{ρ}: u = 1 takes the power branch
  for (auto sp : {make_space(1, 0), make_space(2, 1), make_space(4, 3)}) {
    EXPECT_EQ(phi_weight(sp, 1.0), 1.0);
    EXPECT_NEAR(phi_weight(sp, 1.0 - 1e-9), 1.0, 1e-7);
    EXPECT_NEAR(phi_weight(sp, 1.0 + 1e-9), std::exp(sp.rho), 1e-7 * std::exp(sp.rho));
  }
}

TEST(PhiSup, RatioBandedAndStable) {
  const auto sp = make_space(2, 0);
  double prev = 0.0;
  for (double u : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const PhiSupCheck c = phi_sup_identity_check(sp, u);
    EXPECT_LE(c.ratio(), pinned::kPhiSup);
    EXPECT_GE(c.ratio(), 1.0 / pinned::kPhiSup);
    const PhiSupCheck fine = phi_sup_identity_check(sp, u, 128);
    EXPECT_NEAR(fine.ratio() / c.ratio(), 1.0, 0.05);
    if (prev > 0.0) EXPECT_LT(std::max(c.ratio() / prev, prev / c.ratio()), 4.0);
    prev = c.ratio();
  }
}

TEST(KernelTable, MethodTags) {
  const auto a = build_kernel_table(make_space(2, 0), {1.0, 2.0}, {0.0});
  EXPECT_EQ(a.method, KernelMethod::closed_form_m2_0);
  const auto b = build_kernel_table(make_space(2, 1), {1.0, 2.0}, {0.0, 3.0});
  EXPECT_EQ(b.method, KernelMethod::quadrature);
  EXPECT_TRUE(std::isnan(b.comparator[1]));
}

TEST(SurfaceMc, BinBelowDiagonalIsEmpty) {
  const auto sp = make_space(2, 0);
  const McEstimate e = surface_mc(sp, 0.2, 0.8, 1.0, 10000, 3);
  EXPECT_EQ(e.estimate, 0.0);
}

TEST(SurfaceMc, PlaneBinMatchesSinh) {
  const auto sp = make_space(2, 0);
  const McEstimate e = surface_mc(sp, 1.9, 2.1, 0.0, 400000, 11);
  const double exact = surface_constant(sp) * psi_bin_average(sp, 1.9, 2.1, 0.0);
  EXPECT_NEAR(e.estimate, exact, 4.0 * e.stderr_);
  EXPECT_NEAR(surface_constant(sp), std::numbers::pi, 1e-12);
}

TEST(SurfaceMc, StderrShrinksWithSamples) {
  const auto sp = make_space(2, 1);
  const McEstimate a = surface_mc(sp, 1.0, 2.0, 0.5, 100000, 5);
  const McEstimate b = surface_mc(sp, 1.0, 2.0, 0.5, 200000, 5);
  EXPECT_NEAR(a.stderr_ / b.stderr_, std::sqrt(2.0), 0.15);
}

TEST(SurfaceMc, SameSeedSameEstimate) {
  const auto sp = make_space(2, 1);
  const McEstimate a = surface_mc(sp, 1.0, 2.0, 0.5, 50000, 9);
  const McEstimate b = surface_mc(sp, 1.0, 2.0, 0.5, 50000, 9);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.stderr_, b.stderr_);
}
