#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

namespace rrgg {

struct PropertyCheck {
  std::string name;
  bool pass = true;
  double value = 0.0;  // measured statistic
  double bound = 0.0;  // the threshold it is compared against
  std::string witness;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  [[nodiscard]] const PropertyCheck* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  [[nodiscard]] bool passed(std::string_view name) const {
    const auto* c = find(name);
    return c && c->pass;
  }
  [[nodiscard]] std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.pass) out.push_back(c.name);
    }
    return out;
  }
};

struct PropertyParams {
  double epsilon = 0.1;
  std::size_t k0 = 200;
  double separation = 3.0;  // A in the path separation check
};

namespace detail {

inline std::string cell_name(const CellGrid& grid, CellId c) {
  std::string s = "cell " + std::to_string(c) + " (";
  const auto idx = grid.index_of(c);
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k]);
  return s + ")";
}

}  // namespace detail

/// Evaluates the structural properties literally on one instance. Bounds
/// with unspecified constants (ugly cells, cover size) use constant 1.
/// Statements about "good"/"bad" that precede the non-rainbow
/// demotion (P2, P3, L3c, L3e) use the pre-demotion giant.
inline PropertyReport check_properties(const GeometricGraph& graph, const CellGrid& grid, const CellGraph& cg,
                                       const EdgeColoring& coloring, const PathCover& cover,
                                       const PropertyParams& params) {
  PropertyReport rep;
  const std::size_t n = graph.num_vertices();
  const std::size_t cells = grid.num_cells();
  const int d = grid.dim();
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const double r = graph.radius();
  const double small_power = std::pow(params.epsilon, 1.0 / d);
  auto add = [&](std::string name, bool pass, double value, double bound, std::string witness = {}) {
    rep.checks.push_back({std::move(name), pass, value, bound, pass ? std::string() : std::move(witness)});
  };

  std::vector<std::uint8_t> in_giant(cells, 0);
  for (CellId c : cg.giant_before_demotion) in_giant[c] = 1;
  std::vector<std::uint8_t> pre_bad(cells, 0);
  std::size_t pre_bad_count = 0;
  std::size_t pre_ugly_count = 0;
  for (CellId c = 0; c < cells; ++c) {
    if (in_giant[c]) continue;
    const auto nb = cg.neighbors(c);
    pre_bad[c] = std::any_of(nb.begin(), nb.end(), [&](CellId o) { return in_giant[o] != 0; }) ? 1 : 0;
    (pre_bad[c] ? pre_bad_count : pre_ugly_count)++;
  }

  {  // P1
    std::size_t worst = 0;
    CellId at = 0;
    for (CellId c = 0; c < cells; ++c) {
      if (grid.points_of(c).size() > worst) {
        worst = grid.points_of(c).size();
        at = c;
      }
    }
    add("P1", static_cast<double>(worst) <= ln_n, static_cast<double>(worst), ln_n,
        detail::cell_name(grid, at) + " holds " + std::to_string(worst) + " points");
  }
  {
    const double bound = std::pow(static_cast<double>(n), 1.0 - params.epsilon / 2.0);
    add("P2", static_cast<double>(pre_bad_count) <= bound, static_cast<double>(pre_bad_count), bound,
        std::to_string(pre_bad_count) + " bad cells");
  }
  {
    const double bound = std::pow(static_cast<double>(n), small_power);
    add("P3", static_cast<double>(pre_ugly_count) <= bound, static_cast<double>(pre_ugly_count), bound,
        std::to_string(pre_ugly_count) + " ugly cells");
  }
  {  // P4
    Vertex at = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (graph.degree(v) > graph.degree(at)) at = v;
    }
    const double bound = std::ldexp(1.0, d) * ln_n;
    const double worst = n ? static_cast<double>(graph.degree(at)) : 0.0;
    add("P4", worst <= bound, worst, bound, "vertex " + std::to_string(at) + " has degree " + std::to_string(
        static_cast<std::size_t>(worst)));
  }

  std::vector<CellId> non_rainbow;
  for (CellId c = 0; c < cells; ++c) {
    if (!cg.rainbow[c]) non_rainbow.push_back(c);
  }
  {
    const double bound = std::pow(ln_n, 4);
    add("L3a", static_cast<double>(non_rainbow.size()) <= bound, static_cast<double>(non_rainbow.size()), bound,
        std::to_string(non_rainbow.size()) + " non-rainbow cells");
  }
  {  // L3b: a colour three times inside one cell
    std::string witness;
    std::size_t worst = 0;
    for (CellId c : non_rainbow) {
      const auto pts = grid.points_of(c);
      std::map<Color, std::size_t> census;
      for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
          if (const auto id = graph.find_edge(pts[a], pts[b])) ++census[coloring[*id]];
        }
      }
      for (const auto& [col, k] : census) {
        if (k > worst) {
          worst = k;
          if (k >= 3) witness = detail::cell_name(grid, c) + " colour " + std::to_string(col) + " x" + std::to_string(k);
        }
      }
    }
    add("L3b", worst < 3, static_cast<double>(worst), 2.0, witness);
  }
  {
    std::string witness;
    for (CellId c : non_rainbow) {
      if (!in_giant[c]) {
        witness = detail::cell_name(grid, c) + " is non-rainbow outside the giant";
        break;
      }
    }
    add("L3c", witness.empty(), static_cast<double>(non_rainbow.size()), 0.0, witness);
  }
  {
    double nearest = std::numeric_limits<double>::infinity();
    CellId at = kNoCell;
    for (CellId c : non_rainbow) {
      const double dist = grid.boundary_distance(c);
      if (dist < nearest) {
        nearest = dist;
        at = c;
      }
    }
    add("L3d", !(nearest < 10.0 * r), nearest, 10.0 * r,
        at == kNoCell ? "" : detail::cell_name(grid, at) + " at distance " + std::to_string(nearest));
  }
  {
    std::string witness;
    for (CellId c : non_rainbow) {
      for (CellId o : cg.neighbors(c)) {
        if (pre_bad[o] && witness.empty()) {
          witness = detail::cell_name(grid, o) + " is bad and adjacent to non-rainbow " + detail::cell_name(grid, c);
        }
      }
    }
    add("L3e", witness.empty(), 0.0, 0.0, witness);
  }

  // L6: per cell, incident edges whose colour lies in B1, with the cell's own
  // contribution removed when it is bad or ugly.
  {
    const Color m = coloring.num_colors();
    std::unordered_set<EdgeId> on_cover;
    for (const auto& path : cover.paths) {
      for (std::size_t i = 1; i < path.size(); ++i) {
        if (const auto id = graph.find_edge(path[i - 1], path[i])) on_cover.insert(*id);
      }
    }
    auto nongood = [&](Vertex v) { return cg.cls[grid.cell_of(v)] != CellClass::Good; };
    std::vector<std::uint32_t> total(static_cast<std::size_t>(m) + 1, 0);
    for (EdgeId id = 0; id < graph.num_edges(); ++id) {
      const Edge& e = graph.edge(id);
      if (nongood(e.u) || nongood(e.v) || on_cover.count(id)) ++total[coloring[id]];
    }
    std::vector<std::uint32_t> removed(static_cast<std::size_t>(m) + 1, 0);
    std::size_t worst = 0;
    CellId at = 0;
    std::vector<EdgeId> incident;
    for (CellId c = 0; c < cells; ++c) {
      incident.clear();
      for (Vertex v : grid.points_of(c)) {
        for (EdgeId id : graph.incident_edges(v)) {
          const Edge& e = graph.edge(id);
          const Vertex other = e.u == v ? e.v : e.u;
          if (grid.cell_of(other) != c || v < other) incident.push_back(id);
        }
      }
      const bool own = cg.cls[c] != CellClass::Good;
      if (own) {
        for (EdgeId id : incident) {
          const Edge& e = graph.edge(id);
          const bool only_here = !on_cover.count(id) && (!nongood(e.u) || grid.cell_of(e.u) == c) &&
                                 (!nongood(e.v) || grid.cell_of(e.v) == c);
          if (only_here) ++removed[coloring[id]];
        }
      }
      std::size_t count = 0;
      for (EdgeId id : incident) count += total[coloring[id]] > removed[coloring[id]] ? 1 : 0;
      if (own) {
        for (EdgeId id : incident) removed[coloring[id]] = 0;
      }
      if (count > worst) {
        worst = count;
        at = c;
      }
    }
    add("L6", worst < params.k0, static_cast<double>(worst), static_cast<double>(params.k0),
        detail::cell_name(grid, at) + " has " + std::to_string(worst) + " incident B1 edges");
  }

  // Path system checks.
  std::vector<std::uint8_t> covered(n, 0);
  for (const auto& path : cover.paths) {
    for (Vertex v : path) covered[v] = 1;
  }
  {
    std::string witness;
    for (Vertex v = 0; v < n && witness.empty(); ++v) {
      if (cg.cls[grid.cell_of(v)] == CellClass::Ugly && !covered[v]) witness = "ugly vertex " + std::to_string(v);
    }
    add("Q1", witness.empty(), 0.0, 0.0, witness);
  }
  {
    std::vector<std::uint32_t> load(cells, 0);
    std::uint32_t worst = 0;
    CellId at = 0;
    for (Vertex v = 0; v < n; ++v) {
      const CellId c = grid.cell_of(v);
      if (covered[v] && cg.cls[c] != CellClass::Ugly && ++load[c] > worst) {
        worst = load[c];
        at = c;
      }
    }
    add("Q2", worst <= 2, worst, 2.0, detail::cell_name(grid, at) + " hosts " + std::to_string(worst));
  }
  {  // Q3: cell-graph distance from covered vertices to the ugly set
    constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(cells, kUnreached);
    std::vector<CellId> queue;
    for (CellId c = 0; c < cells; ++c) {
      if (cg.cls[c] == CellClass::Ugly) {
        dist[c] = 0;
        queue.push_back(c);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (CellId o : cg.neighbors(queue[head])) {
        if (dist[o] == kUnreached) {
          dist[o] = dist[queue[head]] + 1;
          queue.push_back(o);
        }
      }
    }
    double worst = 0.0;
    Vertex at = kNoVertex;
    for (Vertex v = 0; v < n; ++v) {
      if (!covered[v]) continue;
      const std::size_t dv = dist[grid.cell_of(v)];
      const double val = dv == kUnreached ? std::numeric_limits<double>::infinity() : static_cast<double>(dv);
      if (val > worst || at == kNoVertex) {
        worst = val;
        at = v;
      }
    }
    const double bound = 2.0 * std::pow(20.0 * d, d);
    add("Q3", worst <= bound, worst, bound, "vertex " + std::to_string(at));
  }
  {
    std::string witness;
    for (std::size_t i = 0; i < cover.paths.size() && witness.empty(); ++i) {
      const auto& path = cover.paths[i];
      const CellId anchor = i < cover.anchors.size() ? cover.anchors[i] : kNoCell;
      if (path.empty()) continue;
      const bool good_anchor = anchor != kNoCell && anchor < cells && cg.cls[anchor] == CellClass::Good;
      if (!good_anchor || !cg.adjacent(grid.cell_of(path.front()), anchor) ||
          !cg.adjacent(grid.cell_of(path.back()), anchor)) {
        witness = "path " + std::to_string(i);
      }
    }
    add("Q4", witness.empty(), 0.0, 0.0, witness);
  }
  {
    double nearest = std::numeric_limits<double>::infinity();
    std::string witness;
    for (std::size_t i = 0; i < cover.paths.size(); ++i) {
      for (std::size_t j = i + 1; j < cover.paths.size(); ++j) {
        for (Vertex a : cover.paths[i]) {
          for (Vertex b : cover.paths[j]) {
            const double dist = lp_distance(graph.points()[a], graph.points()[b], graph.p_norm());
            if (dist < nearest) {
              nearest = dist;
              witness = "paths " + std::to_string(i) + " and " + std::to_string(j);
            }
          }
        }
      }
    }
    const double bound = params.separation * r;
    add("Q5", !(nearest < bound), nearest, bound, witness);
  }
  {
    const double bound = std::pow(static_cast<double>(n), small_power);
    const double edges = static_cast<double>(cover.num_edges());
    add("Q6", edges <= bound, edges, bound, std::to_string(cover.num_edges()) + " cover edges");
  }
  {
    std::vector<Edge> edges;
    for (const auto& path : cover.paths) {
      const auto pe = path_edges(path);
      edges.insert(edges.end(), pe.begin(), pe.end());
    }
    add("L5", is_rainbow(graph, coloring, edges), static_cast<double>(edges.size()), 0.0, "cover repeats a colour");
  }
  return rep;
}

}  // namespace rrgg
