#include <cmath>

#include <gtest/gtest.h>

#include "rank1ks/geometry.hpp"
#include "rank1ks/parallel.hpp"

using namespace rank1ks;

TEST(Space, RhoFromMultiplicities) {
  EXPECT_DOUBLE_EQ(make_space(1, 0).rho, 0.5);
  EXPECT_DOUBLE_EQ(make_space(2, 1).rho, 2.0);
  EXPECT_EQ(make_space(4, 3).dim(), 8);
}

TEST(Space, RejectsZeroM1) {
  EXPECT_THROW(make_space(0, 3), InvalidArgument);
  EXPECT_THROW(make_space(1, -1), InvalidArgument);
}

TEST(CartanRadius, PointOnFlatHasRadiusS) {
  const auto sp = make_space(2, 0);
  EXPECT_NEAR(cartan_radius(sp, {{0.0, 0.0}, {}, 1.5}), 1.5, 1e-14);
}

TEST(CartanRadius, HandValues) {
  EXPECT_NEAR(cartan_radius(make_space(2, 0), {{1.0, 0.0}, {}, 0.0}), std::acosh(2.0), 1e-12);
  EXPECT_NEAR(cartan_radius(make_space(2, 1), {{1.0, 0.0}, {1.0}, 0.0}), std::acosh(std::sqrt(5.0)),
              1e-12);
  EXPECT_NEAR(std::acosh(2.0), 1.3169579, 1e-7);
  EXPECT_NEAR(std::acosh(std::sqrt(5.0)), 1.4436355, 1e-7);
}

TEST(CartanRadius, ShapeMismatchThrows) {
  EXPECT_THROW(cartan_radius(make_space(2, 1), {{1.0, 0.0}, {}, 0.0}), InvalidArgument);
}

TEST(Dilation, IdentityAndInverse) {
  const IwasawaPoint p{{1.0, -2.0}, {0.5}, 0.3};
  const IwasawaPoint same = conjugate_by_a(p, 0.0);
  EXPECT_EQ(same.v, p.v);
  EXPECT_EQ(same.w, p.w);
  const IwasawaPoint q = conjugate_by_a(p, std::log(2.0));
  const IwasawaPoint back = conjugate_by_a(q, -std::log(2.0));
  for (std::size_t i = 0; i < p.v.size(); ++i) EXPECT_NEAR(back.v[i], p.v[i], 1e-15);
  EXPECT_NEAR(back.w[0], p.w[0], 1e-15);
  EXPECT_DOUBLE_EQ(back.s, p.s);
}

TEST(Dilation, HalvesV) {
  const IwasawaPoint q = conjugate_by_a({{1.0, 0.0}, {}, 0.0}, std::log(2.0));
  EXPECT_NEAR(q.v[0], 0.5, 1e-15);
  EXPECT_EQ(q.v[1], 0.0);
}

TEST(Distance, AlongFlat) {
  const auto sp = make_space(2, 0);
  EXPECT_NEAR(distance(sp, {{0.0, 0.0}, {}, 0.0}, {{0.0, 0.0}, {}, -0.7}), 0.7, 1e-14);
}

TEST(Distance, HandValue) {
  const auto sp = make_space(2, 0);
  EXPECT_NEAR(distance(sp, {{1.0, 0.0}, {}, 0.0}, {{0.0, 0.0}, {}, 0.0}), 1.3169579, 1e-7);
}

TEST(Distance, SymmetricOnRandomPairs) {
  const auto sp = make_space(3, 0);
  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    IwasawaPoint z{{0, 0, 0}, {}, 0}, zp{{0, 0, 0}, {}, 0};
    for (auto* p : {&z, &zp}) {
      for (double& x : p->v) x = 6.0 * uniform01(rng) - 3.0;
      p->s = 4.0 * uniform01(rng) - 2.0;
    }
    EXPECT_NEAR(distance(sp, z, zp), distance(sp, zp, z), 1e-10);
  }
}

TEST(Distance, NeedsM2Zero) {
  const auto sp = make_space(2, 1);
  EXPECT_THROW(distance(sp, origin_point(sp), origin_point(sp)), UnsupportedSpace);
}

TEST(RadialDensity, Values) {
  EXPECT_EQ(radial_density(make_space(2, 0), 0.0), 0.0);
  EXPECT_NEAR(radial_density(make_space(1, 0), 1.0), 1.1752012, 1e-7);
  // sinh(0.5)^2 sinh(1) = 0.3191145
  EXPECT_NEAR(radial_density(make_space(2, 1), 0.5), std::pow(std::sinh(0.5), 2) * std::sinh(1.0),
              1e-14);
  EXPECT_NEAR(radial_density(make_space(2, 1), 0.5), 0.3191145, 1e-7);
}

TEST(IwasawaWeight, Values) {
  const auto sp = make_space(2, 0);
  EXPECT_EQ(iwasawa_weight(sp, 0.0), 1.0);
  EXPECT_NEAR(iwasawa_weight(sp, 1.0), 7.3890561, 1e-7);
  EXPECT_NEAR(iwasawa_weight(sp, 0.8) * iwasawa_weight(sp, -0.8), 1.0, 1e-15);
}

TEST(BallVolume, ClosedForm) {
  const auto sp = make_space(2, 0);
  EXPECT_EQ(ball_volume(sp, 0.0), 0.0);
  EXPECT_NEAR(ball_volume(sp, 1.0), (std::sinh(1.0) * std::cosh(1.0) - 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(ball_volume(sp, 1.0), 0.4067151, 1e-7);
}

TEST(BallVolume, ExponentialGrowthBand) {
  const auto sp = make_space(2, 0);
  double lo = 1e300, hi = 0.0;
  for (int r = 2; r <= 10; ++r) {
    const double q = ball_volume(sp, r) / std::exp(2.0 * r);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 1.5);
}
