#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

namespace fixture {

// Twenty points, r = 0.2, eps = 0.1 (cell side 0.02, cells adjacent when
// their centres are within 0.12), dense_min = 2.
//
//   cluster X near (0.5, 0.5): eleven points, pairwise within 0.16, so K11
//     C1 (25,25) three points   dense, non-rainbow (two edges share a colour)
//     C2 (26,25) two points     dense
//     C3 (27,25) two points     dense
//     C4 (28,25), C6 (25,24), C7 (24,25)  singletons touching the giant
//     C5 (25,32) singleton, 0.14 from C1's centre, so not adjacent
//   Y (5,5)   two points, dense, isolated
//   Z (45,5)  three points, dense, isolated, non-rainbow
//   four lone points far from everything
//
// Before demotion the giant is {C1,C2,C3}; bad = {C4,C6,C7}; ugly = C5, Y,
// Z and the four lone cells (7).
struct PropertyFixture {
  rrgg::GeometricGraph graph;
  rrgg::EdgeColoring coloring;
  rrgg::CellGrid grid;
  rrgg::CellGraph cells;
};

inline constexpr double kRadius = 0.2;
inline constexpr double kEpsilon = 0.1;

inline PropertyFixture property_fixture() {
  const std::vector<double> xy = {
      0.505, 0.505, 0.51,  0.51,  0.515, 0.505,  // C1
      0.525, 0.505, 0.53,  0.515,                // C2
      0.545, 0.505, 0.55,  0.515,                // C3
      0.565, 0.505,                              // C4
      0.505, 0.645,                              // C5
      0.505, 0.485,                              // C6
      0.485, 0.505,                              // C7
      0.105, 0.105, 0.11,  0.115,                // Y
      0.905, 0.105, 0.91,  0.11,  0.915, 0.105,  // Z
      0.1,   0.9,   0.9,   0.9,   0.3,   0.8,   0.8, 0.3,
  };
  PropertyFixture f;
  f.graph = rrgg::build_rgg(rrgg::PointSet(2, xy), kRadius, 2.0);
  std::vector<rrgg::Color> colors(f.graph.num_edges());
  for (rrgg::EdgeId id = 0; id < colors.size(); ++id) colors[id] = static_cast<rrgg::Color>(id + 1);
  colors[*f.graph.find_edge(0, 2)] = colors[*f.graph.find_edge(0, 1)];
  colors[*f.graph.find_edge(13, 15)] = colors[*f.graph.find_edge(13, 14)];
  f.coloring = rrgg::EdgeColoring(static_cast<rrgg::Color>(colors.size()), colors);
  f.grid = rrgg::CellGrid(f.graph.points(), kRadius, kEpsilon);
  f.cells = rrgg::build_cell_graph(f.grid, kRadius, 2.0);
  rrgg::classify_cells(f.grid, f.cells, f.graph, f.coloring, 2);
  return f;
}

// K_k on points clustered near (0.45, 0.45) with r = 0.5. Edge colours come
// from `colors`; pairs it leaves out get fresh colours above every listed one.
struct Complete {
  rrgg::GeometricGraph graph;
  rrgg::EdgeColoring coloring;
};

inline Complete complete_graph(std::size_t k, const std::map<std::pair<rrgg::Vertex, rrgg::Vertex>, rrgg::Color>& colors,
                               rrgg::Color min_total = 0) {
  std::vector<double> xy;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = 6.283185307179586 * static_cast<double>(i) / static_cast<double>(k);
    xy.push_back(0.45 + 0.04 * std::cos(t));
    xy.push_back(0.45 + 0.04 * std::sin(t));
  }
  Complete out;
  out.graph = rrgg::build_rgg(rrgg::PointSet(2, xy), 0.5, 2.0);
  rrgg::Color next = 1;
  for (const auto& [pair, c] : colors) next = std::max<rrgg::Color>(next, c + 1);
  std::vector<rrgg::Color> per_edge;
  for (const auto& e : out.graph.edges()) {
    const auto it = colors.find({std::min(e.u, e.v), std::max(e.u, e.v)});
    per_edge.push_back(it != colors.end() ? it->second : next++);
  }
  out.coloring = rrgg::EdgeColoring(std::max(next - 1, min_total), per_edge);
  return out;
}

}  // namespace fixture
