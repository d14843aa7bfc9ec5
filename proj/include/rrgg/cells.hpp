#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrgg/coloring.hpp"
#include "rrgg/disjoint_sets.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"

namespace rrgg {

using CellId = std::uint32_t;
inline constexpr CellId kNoCell = std::numeric_limits<CellId>::max();

/// Axis-aligned grid of side s = epsilon * r over [0,1]^d. Only cells that
/// contain points are materialized; their ids follow the lexicographic order
/// of the integer index vectors in [M]^d.
class CellGrid {
 public:
  CellGrid() = default;

  CellGrid(const PointSet& points, double radius, double epsilon)
      : dim_(points.dim()), radius_(radius), epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("cell grid: epsilon must lie in (0,1)");
    if (!(radius > 0.0)) throw ConfigError("cell grid: radius must be positive");
    side_ = epsilon * radius;
    if (!(side_ < 1.0)) throw ConfigError("cell grid: epsilon * r must be below 1");
    per_axis_ = static_cast<std::size_t>(std::ceil(1.0 / side_));
    double total = 1.0;
    for (int k = 0; k < dim_; ++k) total *= static_cast<double>(per_axis_);
    if (total > 9.0e18) throw ConfigError("cell grid: too many cells for 64-bit keys");

    const std::size_t n = points.size();
    std::vector<std::uint64_t> point_key(n);
    for (std::size_t i = 0; i < n; ++i) point_key[i] = key_of_point(points[i]);
    keys_ = point_key;
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    lookup_.reserve(keys_.size() * 2);
    for (CellId c = 0; c < keys_.size(); ++c) lookup_.emplace(keys_[c], c);

    cell_of_.resize(n);
    start_.assign(keys_.size() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of_[i] = lookup_.at(point_key[i]);
      ++start_[cell_of_[i] + 1];
    }
    for (std::size_t c = 0; c < keys_.size(); ++c) start_[c + 1] += start_[c];
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[cell_of_[i]]++] = static_cast<Vertex>(i);
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double side() const noexcept { return side_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] std::size_t cells_per_axis() const noexcept { return per_axis_; }
  [[nodiscard]] std::size_t num_cells() const noexcept { return keys_.size(); }
  [[nodiscard]] std::size_t num_points() const noexcept { return cell_of_.size(); }

  [[nodiscard]] CellId cell_of(Vertex v) const { return cell_of_[v]; }
  [[nodiscard]] const std::vector<CellId>& cell_of_points() const noexcept { return cell_of_; }
  [[nodiscard]] std::span<const Vertex> points_of(CellId c) const {
    return {members_.data() + start_[c], start_[c + 1] - start_[c]};
  }
  [[nodiscard]] std::uint64_t key(CellId c) const { return keys_[c]; }

  [[nodiscard]] std::vector<long> index_of(CellId c) const { return index_of_key(keys_[c]); }

  [[nodiscard]] std::vector<long> index_of_key(std::uint64_t key) const {
    std::vector<long> idx(static_cast<std::size_t>(dim_));
    for (int k = dim_ - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = static_cast<long>(key % per_axis_);
      key /= per_axis_;
    }
    return idx;
  }

  [[nodiscard]] std::optional<std::uint64_t> key_of_index(std::span<const long> idx) const {
    std::uint64_t key = 0;
    for (long i : idx) {
      if (i < 0 || static_cast<std::size_t>(i) >= per_axis_) return std::nullopt;
      key = key * per_axis_ + static_cast<std::uint64_t>(i);
    }
    return key;
  }

  [[nodiscard]] std::optional<CellId> find(std::span<const long> idx) const {
    const auto key = key_of_index(idx);
    if (!key) return std::nullopt;
    return find_key(*key);
  }

  [[nodiscard]] std::optional<CellId> find_key(std::uint64_t key) const {
    const auto it = lookup_.find(key);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Integer cell index of a coordinate vector: floor(x_k / s), clamped to M-1.
  [[nodiscard]] std::vector<long> index_of_point(std::span<const double> x) const {
    std::vector<long> idx(static_cast<std::size_t>(dim_));
    for (int k = 0; k < dim_; ++k) {
      auto i = static_cast<long>(std::floor(x[static_cast<std::size_t>(k)] / side_));
      idx[static_cast<std::size_t>(k)] = std::clamp(i, 0L, static_cast<long>(per_axis_) - 1);
    }
    return idx;
  }

  [[nodiscard]] std::vector<double> center(CellId c) const {
    const auto idx = index_of(c);
    std::vector<double> ctr(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) ctr[k] = (static_cast<double>(idx[k]) + 0.5) * side_;
    return ctr;
  }

  /// Distance from the cell (clipped to the unit cube) to the cube boundary.
  [[nodiscard]] double boundary_distance(CellId c) const {
    double best = std::numeric_limits<double>::infinity();
    for (long i : index_of(c)) {
      const double lo = static_cast<double>(i) * side_;
      const double hi = std::min(1.0, static_cast<double>(i + 1) * side_);
      best = std::min({best, lo, 1.0 - hi});
    }
    return std::max(0.0, best);
  }

 private:
  [[nodiscard]] std::uint64_t key_of_point(std::span<const double> x) const {
    std::uint64_t key = 0;
    for (long i : index_of_point(x)) key = key * per_axis_ + static_cast<std::uint64_t>(i);
    return key;
  }

  int dim_ = 0;
  double radius_ = 0.0;
  double epsilon_ = 0.0;
  double side_ = 0.0;
  std::size_t per_axis_ = 0;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, CellId> lookup_;
  std::vector<CellId> cell_of_;
  std::vector<std::size_t> start_;
  std::vector<Vertex> members_;
};

inline CellGrid build_grid(const PointSet& points, double radius, double epsilon) {
  return CellGrid(points, radius, epsilon);
}

enum class CellClass : std::uint8_t { Good, Bad, Ugly };

inline const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Good: return "GOOD";
    case CellClass::Bad: return "BAD";
    case CellClass::Ugly: return "UGLY";
  }
  return "?";
}

/// Graph on the nonempty cells plus, once classified, the good/bad/ugly labels.
struct CellGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<CellId> adjacency;
  double center_threshold = 0.0;  // r - 2 d s

  // Filled by classify_cells.
  bool classified = false;
  std::size_t dense_min = 0;
  std::vector<std::uint8_t> dense;
  std::vector<std::uint8_t> rainbow;
  std::vector<std::uint8_t> demoted;
  std::vector<CellClass> cls;
  std::vector<CellId> giant_before_demotion;  // sorted
  std::vector<CellId> good;                   // sorted

  [[nodiscard]] std::size_t num_cells() const noexcept { return offsets.size() - 1; }
  [[nodiscard]] std::span<const CellId> neighbors(CellId c) const {
    return {adjacency.data() + offsets[c], offsets[c + 1] - offsets[c]};
  }
  [[nodiscard]] bool adjacent(CellId a, CellId b) const {
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }
  [[nodiscard]] std::size_t count(CellClass c) const {
    return static_cast<std::size_t>(std::count(cls.begin(), cls.end(), c));
  }
};

namespace detail {

inline bool centers_within(double side, std::span<const long> offset, double p, double threshold) {
  std::vector<double> delta(offset.size());
  const std::vector<double> zero(offset.size(), 0.0);
  for (std::size_t k = 0; k < offset.size(); ++k) delta[k] = static_cast<double>(offset[k]);
  // Relative slack keeps exact face/diagonal ties adjacent despite rounding in r - 2ds.
  return side * lp_distance(delta, zero, p) <= threshold * (1.0 + 1e-12);
}

}  // namespace detail

/// Cells are adjacent when their centres are within l_p distance r - 2ds.
inline CellGraph build_cell_graph(const CellGrid& grid, double radius, double p_norm) {
  const int d = grid.dim();
  const double s = grid.side();
  const double threshold = radius - 2.0 * d * s;
  if (!(threshold > 0.0)) throw ConfigError("cell graph: r - 2ds must be positive (epsilon < 1/(2d))");

  const std::size_t cells = grid.num_cells();
  std::vector<std::vector<CellId>> adj(cells);

  const long reach = static_cast<long>(std::floor(threshold / s)) + 1;
  double stencil_volume = 1.0;
  for (int k = 0; k < d; ++k) stencil_volume *= static_cast<double>(2 * reach + 1);

  if (stencil_volume < static_cast<double>(cells)) {
    std::vector<std::vector<long>> stencil;
    std::vector<long> off(static_cast<std::size_t>(d), -reach);
    while (true) {
      const bool is_zero = std::all_of(off.begin(), off.end(), [](long o) { return o == 0; });
      if (!is_zero && detail::centers_within(s, off, p_norm, threshold)) stencil.push_back(off);
      int k = d - 1;
      while (k >= 0 && off[static_cast<std::size_t>(k)] == reach) off[static_cast<std::size_t>(k--)] = -reach;
      if (k < 0) break;
      ++off[static_cast<std::size_t>(k)];
    }
    std::vector<long> probe(static_cast<std::size_t>(d));
    for (CellId c = 0; c < cells; ++c) {
      const auto idx = grid.index_of(c);
      for (const auto& o : stencil) {
        for (std::size_t k = 0; k < idx.size(); ++k) probe[k] = idx[k] + o[k];
        if (const auto other = grid.find(probe)) adj[c].push_back(*other);
      }
    }
  } else {
    std::vector<std::vector<long>> idx(cells);
    for (CellId c = 0; c < cells; ++c) idx[c] = grid.index_of(c);
    std::vector<long> off(static_cast<std::size_t>(d));
    for (CellId a = 0; a < cells; ++a) {
      for (CellId b = a + 1; b < cells; ++b) {
        for (std::size_t k = 0; k < off.size(); ++k) off[k] = idx[b][k] - idx[a][k];
        if (detail::centers_within(s, off, p_norm, threshold)) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
      }
    }
  }

  CellGraph g;
  g.center_threshold = threshold;
  g.offsets.assign(cells + 1, 0);
  for (CellId c = 0; c < cells; ++c) {
    std::sort(adj[c].begin(), adj[c].end());
    g.offsets[c + 1] = g.offsets[c] + adj[c].size();
  }
  g.adjacency.reserve(g.offsets[cells]);
  for (const auto& list : adj) g.adjacency.insert(g.adjacency.end(), list.begin(), list.end());
  return g;
}

/// Floor of 4 keeps room for an in-cell cycle when eps^3 ln n is tiny.
inline std::size_t default_dense_min(double epsilon, std::size_t n) {
  const double raw = std::ceil(epsilon * epsilon * epsilon * std::log(static_cast<double>(std::max<std::size_t>(n, 2))));
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::max(0.0, raw)));
}

/// True iff the in-cell edge set E(C) is rainbow.
inline bool cell_is_rainbow(const CellGrid& grid, CellId c, const GeometricGraph& graph,
                            const EdgeColoring& coloring) {
  const auto pts = grid.points_of(c);
  std::vector<Color> colors;
  colors.reserve(pts.size() * pts.size() / 2);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (const auto id = graph.find_edge(pts[a], pts[b])) colors.push_back(coloring[*id]);
    }
  }
  std::sort(colors.begin(), colors.end());
  return std::adjacent_find(colors.begin(), colors.end()) == colors.end();
}

namespace detail {

/// Largest connected component of `members` in the cell graph; ties go to
/// the component holding the smallest cell id. Result sorted.
inline std::vector<CellId> largest_component(const CellGraph& g, const std::vector<std::uint8_t>& member) {
  const std::size_t cells = g.num_cells();
  DisjointSets sets(cells);
  for (CellId a = 0; a < cells; ++a) {
    if (!member[a]) continue;
    for (CellId b : g.neighbors(a)) {
      if (b > a && member[b]) sets.unite(a, b);
    }
  }
  std::size_t best_root = cells;
  std::size_t best_size = 0;
  for (CellId a = 0; a < cells; ++a) {  // ascending ids: first hit of a size wins ties
    if (!member[a]) continue;
    const std::size_t root = sets.find(a);
    const std::size_t size = sets.size_of(root);
    if (size > best_size) {
      best_size = size;
      best_root = root;
    }
  }
  std::vector<CellId> out;
  if (best_root == cells) return out;
  for (CellId a = 0; a < cells; ++a) {
    if (member[a] && sets.find(a) == best_root) out.push_back(a);
  }
  return out;
}

}  // namespace detail

/// Dense cells, giant component K_g, demotion of non-rainbow cells, and the
/// good/bad/ugly labels. Throws ClassificationError when nothing is dense.
inline void classify_cells(const CellGrid& grid, CellGraph& g, const GeometricGraph& graph,
                           const EdgeColoring& coloring, std::size_t dense_min) {
  const std::size_t cells = g.num_cells();
  g.dense_min = dense_min;
  g.dense.assign(cells, 0);
  g.rainbow.assign(cells, 1);
  g.demoted.assign(cells, 0);
  g.cls.assign(cells, CellClass::Ugly);

  bool any_dense = false;
  for (CellId c = 0; c < cells; ++c) {
    g.dense[c] = grid.points_of(c).size() >= dense_min ? 1 : 0;
    any_dense = any_dense || g.dense[c];
    g.rainbow[c] = cell_is_rainbow(grid, c, graph, coloring) ? 1 : 0;
  }
  if (!any_dense) {
    throw ClassificationError("no dense cells (dense_min = " + std::to_string(dense_min) + ")");
  }

  g.giant_before_demotion = detail::largest_component(g, g.dense);

  std::vector<std::uint8_t> survivor(cells, 0);
  for (CellId c : g.giant_before_demotion) {
    if (g.rainbow[c]) {
      survivor[c] = 1;
    } else {
      g.demoted[c] = 1;
    }
  }
  g.good = detail::largest_component(g, survivor);
  if (g.good.empty()) throw ClassificationError("every giant-component cell is non-rainbow");
  std::vector<std::uint8_t> is_good(cells, 0);
  for (CellId c : g.good) is_good[c] = 1;
  for (CellId c = 0; c < cells; ++c) {
    if (survivor[c] && !is_good[c]) g.demoted[c] = 1;
  }

  for (CellId c = 0; c < cells; ++c) {
    if (is_good[c]) {
      g.cls[c] = CellClass::Good;
      continue;
    }
    const auto nb = g.neighbors(c);
    const bool touches_good = std::any_of(nb.begin(), nb.end(), [&](CellId o) { return is_good[o] != 0; });
    g.cls[c] = touches_good ? CellClass::Bad : CellClass::Ugly;
  }
  g.classified = true;
}

/// Per-vertex flag: 1 when the vertex lies in a bad or ugly cell.
inline std::vector<std::uint8_t> outside_good_mask(const CellGrid& grid, const CellGraph& g) {
  std::vector<std::uint8_t> mask(grid.num_points(), 0);
  for (Vertex v = 0; v < grid.num_points(); ++v) mask[v] = g.cls[grid.cell_of(v)] != CellClass::Good ? 1 : 0;
  return mask;
}

struct CellOrder {
  std::vector<CellId> order;
  std::vector<CellId> parent;  // parent[i] is the parent of order[i]; kNoCell for the root
};

/// DFS preorder of a spanning tree of the good cells, rooted at the smallest
/// good cell and visiting neighbors in ascending (lexicographic) order.
inline CellOrder dfs_order(const CellGraph& g) {
  CellOrder out;
  if (g.good.empty()) return out;
  const std::size_t cells = g.num_cells();
  std::vector<std::uint8_t> is_good(cells, 0);
  for (CellId c : g.good) is_good[c] = 1;
  std::vector<std::uint8_t> seen(cells, 0);

  struct Frame {
    CellId cell;
    std::size_t next;
  };
  std::vector<Frame> stack;
  const CellId root = g.good.front();
  seen[root] = 1;
  out.order.push_back(root);
  out.parent.push_back(kNoCell);
  stack.push_back({root, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto nb = g.neighbors(top.cell);
    bool descended = false;
    while (top.next < nb.size()) {
      const CellId c = nb[top.next++];
      if (!is_good[c] || seen[c]) continue;
      seen[c] = 1;
      out.order.push_back(c);
      out.parent.push_back(top.cell);
      stack.push_back({c, 0});
      descended = true;
      break;
    }
    if (!descended) stack.pop_back();
  }
  if (out.order.size() != g.good.size()) throw std::logic_error("dfs_order: good cells are not connected");
  return out;
}

}  // namespace rrgg
