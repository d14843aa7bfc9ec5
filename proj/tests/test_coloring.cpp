#include <gtest/gtest.h>

#include <map>

#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

using namespace rrgg;

TEST(Palette, ConstructionSplit) {
  const auto pal = make_palette(1000, 0.2);
  EXPECT_EQ(pal.m, 1400U);
  EXPECT_EQ(pal.q0.lo, 1U);
  EXPECT_EQ(pal.q0.hi, 1200U);
  EXPECT_EQ(pal.q1.lo, 1201U);
  EXPECT_EQ(pal.q1.hi, 1400U);
  EXPECT_TRUE(pal.in_q1(1300));
  EXPECT_FALSE(pal.in_q1(1200));
}

TEST(Palette, StrictModeTotalsOnePlusEta) {
  const auto pal = make_palette(1000, 0.2, PaletteMode::Strict);
  EXPECT_EQ(pal.m, 1200U);
  EXPECT_EQ(pal.q0.hi, 1100U);
  EXPECT_EQ(pal.q1.size(), 100U);
}

TEST(Palette, RoundsHalfUp) {
  // (1 + 2 * 0.25) * 5 = 7.5
  EXPECT_EQ(make_palette(5, 0.25).m, 8U);
  EXPECT_EQ(round_half_up(2.5), 3U);
  EXPECT_EQ(round_half_up(2.4999), 2U);
}

TEST(Palette, RejectsEmptyReserve) {
  EXPECT_THROW(make_palette(3, 0.01), ConfigError);
  EXPECT_THROW(make_palette(100, 1.0), ConfigError);
  EXPECT_THROW(make_palette_with_total(10, 5, 5), ConfigError);
}

TEST(Palette, ExplicitTotal) {
  const auto pal = make_palette_with_total(10, 20, 4);
  EXPECT_EQ(pal.m, 20U);
  EXPECT_EQ(pal.q0.hi, 16U);
  EXPECT_EQ(pal.q1.lo, 17U);
}

TEST(Coloring, UniformAndReproducible) {
  const auto pts = sample_points(RggConfig{400, 2, 2.0, 5});
  const auto g = build_rgg(pts, 0.2, 2.0);
  const auto pal = make_palette(400, 0.5);
  Rng r1(9), r2(9);
  const auto a = color_edges(g, pal, r1);
  const auto b = color_edges(g, pal, r2);
  EXPECT_EQ(a.colors(), b.colors());
  std::map<Color, std::size_t> census;
  for (Color c : a.colors()) {
    ASSERT_GE(c, 1U);
    ASSERT_LE(c, pal.m);
    ++census[c];
  }
  // Roughly uniform: every colour appears, none wildly often.
  const double mean = static_cast<double>(g.num_edges()) / pal.m;
  EXPECT_EQ(census.size(), pal.m);
  for (const auto& [c, k] : census) EXPECT_LT(static_cast<double>(k), mean * 3.0 + 10.0);
}

TEST(Coloring, EdgeColorSymmetric) {
  const PointSet pts(2, {0.1, 0.1, 0.15, 0.1, 0.2, 0.1});
  const auto g = build_rgg(pts, 0.2, 2.0);
  const EdgeColoring col(3, {1, 2, 3});
  EXPECT_EQ(edge_color(g, col, 0, 2), edge_color(g, col, 2, 0));
  const PointSet far(2, {0.1, 0.1, 0.9, 0.9});
  const auto h = build_rgg(far, 0.2, 2.0);
  EXPECT_THROW(edge_color(h, EdgeColoring(1, {}), 0, 1), UsageError);
}

TEST(ColorSet, InsertEraseMerge) {
  ColorSet a(10), b(10);
  EXPECT_TRUE(a.insert(3));
  EXPECT_FALSE(a.insert(3));
  b.insert(7);
  a.merge(b);
  EXPECT_EQ(a.size(), 2U);
  EXPECT_EQ(a.to_vector(), (std::vector<Color>{3, 7}));
  EXPECT_TRUE(a.erase(3));
  EXPECT_FALSE(a.contains(3));
  EXPECT_FALSE(a.contains(99));
}

TEST(Coloring, RainbowCheck) {
  const PointSet pts(2, {0.1, 0.1, 0.15, 0.1, 0.2, 0.1});
  const auto g = build_rgg(pts, 0.2, 2.0);
  const EdgeColoring same(2, {1, 1, 2});
  const std::vector<Edge> two = {g.edge(0), g.edge(1)};
  EXPECT_FALSE(is_rainbow(g, same, two));
  const std::vector<Edge> other = {g.edge(0), g.edge(2)};
  EXPECT_TRUE(is_rainbow(g, same, other));
}

TEST(Coloring, ForbiddenB1CollectsOutsideAndCoverColours) {
  // Path 0-1-2-3 on a line with spacing 0.1 and r = 0.12.
  const PointSet pts(2, {0.1, 0.5, 0.2, 0.5, 0.3, 0.5, 0.4, 0.5});
  const auto g = build_rgg(pts, 0.12, 2.0);
  ASSERT_EQ(g.num_edges(), 3U);
  const EdgeColoring col(6, {4, 5, 6});
  const std::vector<std::uint8_t> outside = {0, 0, 0, 1};
  PathCover cover;
  cover.paths.push_back({0, 1});
  const auto b1 = forbidden_b1(g, col, outside, cover);
  EXPECT_EQ(b1.to_vector(), (std::vector<Color>{4, 6}));
}
