#include <gtest/gtest.h>

#include <cmath>

#include "rrgg/cells.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rrgg;

namespace {

CellId cell_at(const CellGrid& grid, long i, long j) {
  const std::vector<long> idx = {i, j};
  const auto c = grid.find(idx);
  EXPECT_TRUE(c.has_value()) << i << "," << j;
  return c.value_or(kNoCell);
}

}  // namespace

TEST(CellGrid, OnlyNonemptyCellsExist) {
  const PointSet pts(2, {0.01, 0.01, 0.02, 0.03, 0.95, 0.95});
  const CellGrid grid(pts, 0.5, 0.2);  // side 0.1
  EXPECT_EQ(grid.cells_per_axis(), 10U);
  EXPECT_EQ(grid.num_cells(), 2U);
  EXPECT_EQ(grid.cell_of(0), grid.cell_of(1));
  EXPECT_NE(grid.cell_of(0), grid.cell_of(2));
  EXPECT_EQ(grid.index_of(grid.cell_of(2)), (std::vector<long>{9, 9}));
  EXPECT_EQ(grid.points_of(grid.cell_of(0)).size(), 2U);
}

TEST(CellGrid, RejectsCoarseGrid) {
  const PointSet pts(2, {0.5, 0.5});
  EXPECT_THROW(CellGrid(pts, 5.0, 0.2), ConfigError);
  EXPECT_THROW(CellGrid(pts, 0.5, 0.0), ConfigError);
}

TEST(CellGraph, AdjacencyMatchesCentreDistances) {
  for (double p : {2.0, kInfNorm}) {
    const auto pts = sample_points(RggConfig{400, 2, p, 11});
    const double r = 0.3;
    const double eps = 0.1;
    const CellGrid grid(pts, r, eps);
    const auto cg = build_cell_graph(grid, r, p);
    const double threshold = r - 4.0 * grid.side();
    for (CellId a = 0; a < grid.num_cells(); ++a) {
      for (CellId b = 0; b < grid.num_cells(); ++b) {
        if (a == b) continue;
        const bool expect = oracle::distance(grid.center(a), grid.center(b), p) <= threshold * (1 + 1e-12);
        ASSERT_EQ(cg.adjacent(a, b), expect) << a << " " << b;
      }
    }
  }
}

TEST(CellGraph, AdjacentCellsAreCompletelyJoined) {
  const auto pts = sample_points(RggConfig{600, 2, 2.0, 3});
  const double r = 0.25;
  const CellGrid grid(pts, r, 0.15);
  const auto cg = build_cell_graph(grid, r, 2.0);
  const auto g = build_rgg(pts, r, 2.0);
  for (CellId a = 0; a < grid.num_cells(); ++a) {
    for (CellId b : cg.neighbors(a)) {
      for (Vertex u : grid.points_of(a)) {
        for (Vertex v : grid.points_of(b)) ASSERT_TRUE(g.has_edge(u, v));
      }
    }
  }
}

TEST(CellGraph, RequiresPositiveThreshold) {
  const PointSet pts(2, {0.5, 0.5});
  const CellGrid grid(pts, 0.5, 0.3);
  EXPECT_THROW(build_cell_graph(grid, 0.5, 2.0), ConfigError);
}

TEST(Classify, DenseMinimumHasFloor) {
  EXPECT_EQ(default_dense_min(0.05, 1000), 4U);
  EXPECT_EQ(default_dense_min(0.2, 1000000), 4U);  // 0.008 * 13.8 rounds up to 1
  EXPECT_EQ(default_dense_min(0.9, 1000000), 11U);
}

TEST(Classify, FixtureLabels) {
  const auto f = fixture::property_fixture();
  const auto& grid = f.grid;
  const auto& cg = f.cells;
  EXPECT_EQ(grid.num_cells(), 13U);
  const CellId c1 = cell_at(grid, 25, 25), c2 = cell_at(grid, 26, 25), c3 = cell_at(grid, 27, 25);
  const CellId c4 = cell_at(grid, 28, 25), c5 = cell_at(grid, 25, 32), c6 = cell_at(grid, 25, 24);
  const CellId c7 = cell_at(grid, 24, 25), y = cell_at(grid, 5, 5), z = cell_at(grid, 45, 5);

  std::vector<CellId> giant = {c1, c2, c3};
  std::sort(giant.begin(), giant.end());
  EXPECT_EQ(cg.giant_before_demotion, giant);
  EXPECT_FALSE(cg.rainbow[c1]);
  EXPECT_FALSE(cg.rainbow[z]);
  EXPECT_TRUE(cg.rainbow[y]);
  EXPECT_TRUE(cg.demoted[c1]);

  std::vector<CellId> good = {c2, c3};
  std::sort(good.begin(), good.end());
  EXPECT_EQ(cg.good, good);
  for (CellId c : {c1, c4, c6, c7}) EXPECT_EQ(cg.cls[c], CellClass::Bad) << c;
  for (CellId c : {c5, y, z}) EXPECT_EQ(cg.cls[c], CellClass::Ugly) << c;
  EXPECT_EQ(cg.count(CellClass::Good), 2U);
  EXPECT_EQ(cg.count(CellClass::Bad), 4U);
  EXPECT_EQ(cg.count(CellClass::Ugly), 7U);

  const auto mask = outside_good_mask(grid, cg);
  EXPECT_EQ(mask[3], 0);  // C2
  EXPECT_EQ(mask[0], 1);  // C1, demoted
}

TEST(Classify, NoDenseCellsThrows) {
  const PointSet pts(2, {0.1, 0.1, 0.9, 0.9});
  const auto g = build_rgg(pts, 0.2, 2.0);
  const CellGrid grid(pts, 0.2, 0.1);
  auto cg = build_cell_graph(grid, 0.2, 2.0);
  EXPECT_THROW(classify_cells(grid, cg, g, EdgeColoring(1, {}), 4), ClassificationError);
}

TEST(Classify, DfsOrderCoversGoodCellsWithParents) {
  const auto pts = sample_points(RggConfig{2000, 2, 2.0, 8});
  const double r = 0.3;
  const auto g = build_rgg(pts, r, 2.0);
  std::vector<Color> distinct(g.num_edges());
  for (EdgeId id = 0; id < distinct.size(); ++id) distinct[id] = static_cast<Color>(id + 1);
  const EdgeColoring col(static_cast<Color>(distinct.size()), distinct);
  const CellGrid grid(pts, r, 0.1);
  auto cg = build_cell_graph(grid, r, 2.0);
  classify_cells(grid, cg, g, col, 4);
  const auto ord = dfs_order(cg);
  ASSERT_EQ(ord.order.size(), cg.good.size());
  EXPECT_EQ(ord.parent.front(), kNoCell);
  std::vector<std::uint8_t> seen(grid.num_cells(), 0);
  seen[ord.order.front()] = 1;
  for (std::size_t i = 1; i < ord.order.size(); ++i) {
    ASSERT_TRUE(seen[ord.parent[i]]) << "parent visited first";
    ASSERT_TRUE(cg.adjacent(ord.order[i], ord.parent[i]));
    seen[ord.order[i]] = 1;
  }
}
