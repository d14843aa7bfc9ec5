#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rrgg/geometry.hpp"
#include "support/oracles.hpp"

using namespace rrgg;

TEST(Geometry, LpDistanceBasics) {
  const std::vector<double> a = {0.0, 0.0};
  const std::vector<double> b = {0.3, 0.4};
  EXPECT_NEAR(lp_distance(a, b, 2.0), 0.5, 1e-15);
  EXPECT_NEAR(lp_distance(a, b, 1.0), 0.7, 1e-15);
  EXPECT_NEAR(lp_distance(a, b, kInfNorm), 0.4, 1e-15);
}

TEST(Geometry, SamplingIsDeterministic) {
  const RggConfig cfg{300, 3, 2.0, 42};
  const auto a = sample_points(cfg);
  const auto b = sample_points(cfg);
  EXPECT_EQ(a.coords(), b.coords());
  for (double x : a.coords()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(a.coords(), sample_points(RggConfig{300, 3, 2.0, 43}).coords());
}

TEST(Geometry, BucketedMatchesAllPairs) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (int d : {2, 3, 4}) {
      for (double p : {1.5, 2.0, kInfNorm}) {
        const auto pts = sample_points(RggConfig{150, d, p, seed});
        const double r = 0.05 + 0.03 * static_cast<double>(seed);
        const auto g = build_rgg(pts, r, p);
        EXPECT_EQ(oracle::edge_set(g), oracle::all_pairs_edges(pts, r, p)) << "seed " << seed << " d " << d;
      }
    }
  }
}

TEST(Geometry, EdgeLookupAndDegrees) {
  const PointSet pts(2, {0.1, 0.1, 0.2, 0.1, 0.9, 0.9});
  const auto g = build_rgg(pts, 0.15, 2.0);
  ASSERT_EQ(g.num_edges(), 1U);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.min_degree(), 0U);
  EXPECT_EQ(g.max_degree(), 1U);
}

TEST(Geometry, ZeroRadiusHasNoEdges) {
  const auto pts = sample_points(RggConfig{50, 2, 2.0, 1});
  EXPECT_EQ(build_rgg(pts, 0.0, 2.0).num_edges(), 0U);
}

TEST(Geometry, BallVolume) {
  EXPECT_NEAR(unit_ball_volume(2, 2.0), std::numbers::pi, 1e-13);
  EXPECT_NEAR(unit_ball_volume(3, 2.0), 4.0 * std::numbers::pi / 3.0, 1e-13);
  EXPECT_NEAR(unit_ball_volume(2, 1.0), 2.0, 1e-13);
  EXPECT_DOUBLE_EQ(unit_ball_volume(4, kInfNorm), 16.0);
}

TEST(Geometry, ThresholdRadiusPlanarForm) {
  for (std::size_t n : {100U, 1000U, 100000U}) {
    const double ln_n = std::log(static_cast<double>(n));
    const double expect = std::sqrt((ln_n + std::log(ln_n) + 0.5) / (std::numbers::pi * n));
    EXPECT_NEAR(threshold_radius(n, 2, 2.0, 0.5) / expect, 1.0, 1e-12);
  }
}

TEST(Geometry, ThresholdRadiusDomain) {
  EXPECT_THROW(threshold_radius(2, 2, 2.0, 0.0), DomainError);
  EXPECT_THROW(threshold_radius(100, 0, 2.0, 0.0), DomainError);
}

TEST(Geometry, DefaultOmega) {
  EXPECT_EQ(default_omega(10), 0.0);
  const double n = 1e6;
  EXPECT_NEAR(default_omega(1000000), std::log(std::log(std::log(n))), 1e-14);
}

TEST(Geometry, HittingRadiusIsMinimal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = sample_points(RggConfig{120, 2, 2.0, seed});
    const double rh = hitting_radius(pts, 2.0, 2);
    EXPECT_GE(build_rgg(pts, rh, 2.0).min_degree(), 2U);
    EXPECT_LT(build_rgg(pts, std::nextafter(rh, 0.0), 2.0).min_degree(), 2U);
  }
}

TEST(Geometry, FormatNorm) {
  EXPECT_EQ(format_norm(2.0), "2");
  EXPECT_EQ(format_norm(kInfNorm), "inf");
}

TEST(Geometry, RejectsBadConfig) {
  EXPECT_THROW((RggConfig{0, 2, 2.0, 0}.validate()), ConfigError);
  EXPECT_THROW((RggConfig{10, 1, 2.0, 0}.validate()), ConfigError);
  EXPECT_THROW((RggConfig{10, 2, 1.0, 0}.validate()), ConfigError);
}
