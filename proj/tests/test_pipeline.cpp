#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rrgg/pipeline.hpp"
#include "support/oracles.hpp"

using namespace rrgg;

namespace {

EdgeColoring distinct_colors(const GeometricGraph& g) {
  std::vector<Color> c(g.num_edges());
  std::iota(c.begin(), c.end(), 1);
  return EdgeColoring(static_cast<Color>(c.size()), c);
}

struct RichInstance {
  GeometricGraph graph;
  Palette palette;
  EdgeColoring coloring;
};

// Dense regime: about eight points per cell, palette 200 n.
RichInstance rich(std::size_t n, std::uint64_t seed) {
  const double r = std::sqrt(8.0 / (static_cast<double>(n) * 0.04));
  RichInstance out;
  out.graph = build_rgg(sample_points(RggConfig{n, 2, 2.0, seed}), r, 2.0);
  out.palette = make_palette_with_total(n, static_cast<Color>(200 * n), static_cast<Color>(20 * n));
  Rng rng = Rng(seed).split("colors");
  out.coloring = color_edges(out.graph, out.palette, rng);
  return out;
}

PipelineParams rich_params(std::uint64_t seed) {
  PipelineParams p;
  p.eta = 0.2;
  p.epsilon = 0.2;
  p.seed = seed;
  p.audit = true;
  return p;
}

}  // namespace

// Eight points inside one cell, every edge its own colour.
TEST(Pipeline, CliqueWithDistinctColoursSucceeds) {
  std::vector<double> xy;
  for (int i = 0; i < 8; ++i) {
    xy.push_back(0.05 + 0.03 * i);
    xy.push_back(0.05 + 0.02 * (i % 3));
  }
  const auto g = build_rgg(PointSet(2, xy), 2.0, 2.0);
  ASSERT_EQ(g.num_edges(), 28U);
  const auto col = distinct_colors(g);
  const auto pal = make_palette_with_total(8, 28, 4);
  PipelineParams params;
  params.epsilon = 0.19;
  const auto res = find_rainbow_hamilton(g, col, pal, params);
  ASSERT_TRUE(res.success) << res.diag.reason << " " << res.diag.witness;
  EXPECT_EQ(res.diag.phase, Phase::None);
  EXPECT_EQ(res.diag.good_cells, 1U);
  EXPECT_TRUE(verify_cycle(g, col, res.cycle).passes());
  EXPECT_TRUE(oracle::reverse_verify(g, col, res.cycle));
}

TEST(Pipeline, PigeonholeFailsFast) {
  const auto inst = rich(60, 1);
  const auto pal = make_palette_with_total(60, 59, 5);
  const auto res = find_rainbow_hamilton(inst.graph, inst.coloring, pal, rich_params(1));
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.diag.phase, Phase::Precheck);
  EXPECT_EQ(res.diag.reason, "PIGEONHOLE");
}

TEST(Pipeline, LowDegreeFailsFast) {
  const PointSet pts(2, {0.1, 0.1, 0.15, 0.1, 0.12, 0.13, 0.9, 0.9});
  const auto g = build_rgg(pts, 0.1, 2.0);
  const auto col = distinct_colors(g);
  const auto res = find_rainbow_hamilton(g, col, make_palette_with_total(4, 40, 4), PipelineParams{});
  EXPECT_EQ(res.diag.reason, "MIN_DEGREE");
  EXPECT_EQ(res.diag.witness, "vertex 3");
}

TEST(Pipeline, TooFewVertices) {
  const auto g = build_rgg(PointSet(2, {0.1, 0.1, 0.2, 0.2}), 0.5, 2.0);
  const auto res = find_rainbow_hamilton(g, distinct_colors(g), make_palette_with_total(2, 10, 2), PipelineParams{});
  EXPECT_EQ(res.diag.reason, "TOO_FEW_VERTICES");
}

TEST(Pipeline, RichRegimeSucceedsWithCleanDiagnostics) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 200 + 100 * seed;
    const auto inst = rich(n, seed);
    const auto res = find_rainbow_hamilton(inst.graph, inst.coloring, inst.palette, rich_params(seed));
    ASSERT_TRUE(res.success) << seed << " " << to_string(res.diag.phase) << " " << res.diag.reason;
    const auto rep = verify_cycle(inst.graph, inst.coloring, res.cycle);
    EXPECT_TRUE(rep.passes());
    EXPECT_TRUE(oracle::reverse_verify(inst.graph, inst.coloring, res.cycle));
    EXPECT_EQ(res.diag.good_b1_hits, 0U);
    EXPECT_TRUE(res.diag.splice.duplicates_nonincreasing);
    EXPECT_GT(res.diag.audits, 0U);
    EXPECT_GT(res.diag.cell_cycles, 0U);
    EXPECT_LE(res.diag.q1_used, inst.palette.q1.size());
    EXPECT_FALSE(res.diag.timings_ms.empty());
  }
}

TEST(Pipeline, ConstructionPaletteRecordsFailingPhase) {
  const std::size_t n = 400;
  const auto inst = rich(n, 4);
  const auto pal = make_palette(n, 0.9);
  Rng rng = Rng(4).split("colors");
  const auto col = color_edges(inst.graph, pal, rng);
  const auto res = find_rainbow_hamilton(inst.graph, col, pal, rich_params(4));
  if (!res.success) {
    EXPECT_NE(res.diag.phase, Phase::None);
    EXPECT_NE(res.diag.reason, "OK");
    EXPECT_FALSE(res.diag.witness.empty());
  } else {
    EXPECT_TRUE(verify_cycle(inst.graph, col, res.cycle).passes());
  }
}

TEST(Pipeline, DeterministicForFixedSeed) {
  const auto inst = rich(500, 7);
  const auto a = find_rainbow_hamilton(inst.graph, inst.coloring, inst.palette, rich_params(7));
  const auto b = find_rainbow_hamilton(inst.graph, inst.coloring, inst.palette, rich_params(7));
  ASSERT_TRUE(a.success);
  EXPECT_EQ(a.cycle, b.cycle);
  EXPECT_EQ(a.diag.q1_used, b.diag.q1_used);
}

TEST(Pipeline, RejectsBadParams) {
  const auto inst = rich(60, 1);
  PipelineParams p;
  p.eta = 1.5;
  EXPECT_THROW((void)find_rainbow_hamilton(inst.graph, inst.coloring, inst.palette, p), ConfigError);
  p = PipelineParams{};
  p.retry_budget = 0;
  EXPECT_THROW((void)find_rainbow_hamilton(inst.graph, inst.coloring, inst.palette, p), ConfigError);
}

TEST(Pipeline, Defaults) {
  EXPECT_EQ(default_psi0(0.5, 0.5), 80U);
  EXPECT_EQ(default_k0(0.05), 400U);
  EXPECT_EQ(default_repair_cap(0.05, 0.2), 64U);
  EXPECT_EQ(default_repair_cap(0.9, 0.99), 19U);  // 2 / (0.99^2 * 0.9 / 8) = 18.1
}
