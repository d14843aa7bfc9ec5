#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

namespace rrgg {

struct UglyCover {
  PathCover cover;  // anchors[i] is the good cell C_P of paths[i]
  bool ok = true;
  Vertex witness = kNoVertex;  // an uncoverable ugly vertex when !ok
  std::size_t clusters = 0;
};

namespace detail {

class UglyCoverBuilder {
 public:
  UglyCoverBuilder(const GeometricGraph& graph, const EdgeColoring& coloring, const CellGrid& grid,
                   const CellGraph& cg)
      : graph_(graph),
        coloring_(coloring),
        grid_(grid),
        cg_(cg),
        pending_(graph.num_vertices(), 0),
        in_path_(graph.num_vertices(), 0),
        covered_(graph.num_vertices(), 0),
        load_(grid.num_cells(), 0),
        used_(coloring.num_colors()) {}

  UglyCover run() {
    UglyCover out;
    const std::size_t n = graph_.num_vertices();
    std::vector<std::uint8_t> seen(n, 0);
    for (Vertex s = 0; s < n; ++s) {
      if (seen[s] || !is_ugly(s)) continue;
      std::vector<Vertex> cluster{s};
      seen[s] = 1;
      for (std::size_t head = 0; head < cluster.size(); ++head) {
        for (Vertex w : graph_.neighbors(cluster[head])) {
          if (!seen[w] && is_ugly(w)) {
            seen[w] = 1;
            cluster.push_back(w);
          }
        }
      }
      std::sort(cluster.begin(), cluster.end());
      ++out.clusters;
      if (!cover_cluster(cluster, out)) return out;
    }
    return out;
  }

 private:
  [[nodiscard]] bool is_ugly(Vertex v) const { return cg_.cls[grid_.cell_of(v)] == CellClass::Ugly; }
  [[nodiscard]] Color color(Vertex a, Vertex b) const { return edge_color(graph_, coloring_, a, b); }

  // Good cells adjacent in the cell graph to the terminal's cell.
  [[nodiscard]] std::vector<CellId> anchors(Vertex t) const {
    std::vector<CellId> out;
    for (CellId c : cg_.neighbors(grid_.cell_of(t))) {
      if (cg_.cls[c] == CellClass::Good) out.push_back(c);
    }
    return out;
  }

  [[nodiscard]] bool terminal_ok(Vertex t) const {
    if (covered_[t] || in_path_[t] || is_ugly(t) || load_[grid_.cell_of(t)] >= 2) return false;
    return !anchors(t).empty();
  }

  // Bad-cell terminals first, then by vertex index.
  [[nodiscard]] std::vector<Vertex> terminals_near(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex t : graph_.neighbors(v)) {
      if (terminal_ok(t) && !used_.contains(color(v, t))) out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(), [&](Vertex a, Vertex b) {
      return (cg_.cls[grid_.cell_of(a)] == CellClass::Bad) > (cg_.cls[grid_.cell_of(b)] == CellClass::Bad);
    });
    return out;
  }

  [[nodiscard]] std::size_t pending_degree(Vertex v) const {
    std::size_t deg = 0;
    for (Vertex w : graph_.neighbors(v)) deg += pending_[w] && !in_path_[w] ? 1 : 0;
    return deg;
  }

  void push(std::vector<Vertex>& path, Vertex v) {
    used_.insert(color(path.back(), v));
    in_path_[v] = 1;
    path.push_back(v);
  }

  void pop(std::vector<Vertex>& path) {
    const Vertex v = path.back();
    path.pop_back();
    in_path_[v] = 0;
    used_.erase(color(path.back(), v));
  }

  bool cover_cluster(const std::vector<Vertex>& cluster, UglyCover& out) {
    for (Vertex v : cluster) pending_[v] = 1;
    std::size_t left = cluster.size();
    while (left > 0) {
      std::vector<Vertex> starts;
      for (Vertex v : cluster) {
        if (pending_[v]) starts.push_back(v);
      }
      std::stable_sort(starts.begin(), starts.end(),
                       [&](Vertex a, Vertex b) { return pending_degree(a) < pending_degree(b); });
      bool placed = false;
      for (Vertex u0 : starts) {
        for (Vertex t1 : terminals_near(u0)) {
          if (try_path(t1, u0, out, left)) {
            placed = true;
            break;
          }
        }
        if (placed) break;
      }
      if (!placed) {
        out.ok = false;
        out.witness = starts.front();
        return false;
      }
    }
    return true;
  }

  bool try_path(Vertex t1, Vertex u0, UglyCover& out, std::size_t& left) {
    std::vector<Vertex> path{t1};
    in_path_[t1] = 1;
    push(path, u0);

    // Greedy walk through pending ugly vertices, fewest onward options first.
    while (true) {
      const Vertex end = path.back();
      Vertex best = kNoVertex;
      std::size_t best_deg = SIZE_MAX;
      for (Vertex w : graph_.neighbors(end)) {
        if (!pending_[w] || in_path_[w] || used_.contains(color(end, w))) continue;
        const std::size_t deg = pending_degree(w);
        if (deg < best_deg) {
          best_deg = deg;
          best = w;
        }
      }
      if (best == kNoVertex) break;
      push(path, best);
    }

    const auto a1 = anchors(t1);
    const CellId c1 = grid_.cell_of(t1);
    while (path.size() >= 2) {
      const Vertex last = path.back();
      for (Vertex t2 : terminals_near(last)) {
        const CellId c2 = grid_.cell_of(t2);
        if (c2 == c1 && load_[c1] > 0) continue;  // both terminals would land in one cell
        const auto a2 = anchors(t2);
        CellId anchor = kNoCell;
        for (CellId g : a1) {
          if (std::binary_search(a2.begin(), a2.end(), g)) {
            anchor = g;
            break;
          }
        }
        if (anchor == kNoCell) continue;
        push(path, t2);
        for (Vertex v : path) {
          in_path_[v] = 0;
          covered_[v] = 1;
          if (pending_[v]) {
            pending_[v] = 0;
            --left;
          }
        }
        ++load_[c1];
        ++load_[c2];
        out.cover.paths.push_back(std::move(path));
        out.cover.anchors.push_back(anchor);
        return true;
      }
      if (path.size() == 2) break;
      pop(path);
    }
    while (path.size() > 1) pop(path);
    in_path_[t1] = 0;
    return false;
  }

  const GeometricGraph& graph_;
  const EdgeColoring& coloring_;
  const CellGrid& grid_;
  const CellGraph& cg_;
  std::vector<std::uint8_t> pending_;
  std::vector<std::uint8_t> in_path_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::uint8_t> load_;
  ColorSet used_;
};

}  // namespace detail

/// The path system over ugly vertices. Each ugly component of G is covered
/// by paths t1, u..., t2 whose terminals lie in non-ugly cells (at most two
/// covered vertices per such cell) adjacent to a common good cell C_P. All
/// cover edges get distinct colours.
inline UglyCover cover_ugly(const GeometricGraph& graph, const EdgeColoring& coloring, const CellGrid& grid,
                            const CellGraph& cg) {
  return detail::UglyCoverBuilder(graph, coloring, grid, cg).run();
}

}  // namespace rrgg
