#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rrgg/coloring.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/rng.hpp"

namespace rrgg {

struct SearchBudget {
  std::size_t restarts = 50;        // rotation-extension restarts
  std::size_t exhaustive_max = 12;  // exhaustive fallback up to this many vertices
  std::size_t exhaustive_nodes = 50'000'000;
  std::size_t cover_restarts = 8;
};

/// Subgraph induced on a handful of vertices, keeping only edges whose colour
/// passes the filter. Colours are renumbered to dense local ids.
class LocalColorGraph {
 public:
  template <typename Allowed>
  LocalColorGraph(std::span<const Vertex> vertices, const GeometricGraph& graph, const EdgeColoring& coloring,
                  Allowed&& allowed)
      : vertices_(vertices.begin(), vertices.end()), k_(vertices.size()), cid_(k_ * k_, 0) {
    std::unordered_map<Color, std::uint32_t> ids;
    for (std::size_t a = 0; a < k_; ++a) {
      for (std::size_t b = a + 1; b < k_; ++b) {
        const auto id = graph.find_edge(vertices_[a], vertices_[b]);
        if (!id) continue;
        const Color c = coloring[*id];
        if (!allowed(c)) continue;
        auto [it, fresh] = ids.try_emplace(c, static_cast<std::uint32_t>(colors_.size()) + 1);
        if (fresh) colors_.push_back(c);
        cid_[a * k_ + b] = it->second;
        cid_[b * k_ + a] = it->second;
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return k_; }
  [[nodiscard]] Vertex global(std::size_t a) const { return vertices_[a]; }
  /// Local colour id + 1 of {a,b}; 0 when unusable.
  [[nodiscard]] std::uint32_t cid(std::size_t a, std::size_t b) const { return cid_[a * k_ + b]; }
  [[nodiscard]] std::size_t num_colors() const noexcept { return colors_.size(); }

  [[nodiscard]] std::vector<Vertex> to_global(std::span<const std::size_t> local) const {
    std::vector<Vertex> out;
    out.reserve(local.size());
    for (std::size_t a : local) out.push_back(vertices_[a]);
    return out;
  }

 private:
  std::vector<Vertex> vertices_;
  std::size_t k_;
  std::vector<std::uint32_t> cid_;
  std::vector<Color> colors_;
};

namespace detail {

/// Colour-constrained Posa rotation-extension. With `close` set, looks for a
/// rainbow Hamilton cycle; otherwise grows one long rainbow path starting at
/// `start` over vertices not marked in `blocked`, respecting `taken` colours.
/// A restart ends after `stall` consecutive steps without the path growing.
class RotationSearch {
 public:
  RotationSearch(const LocalColorGraph& g, std::vector<std::uint8_t>& taken, const std::vector<std::uint8_t>& blocked,
                 Rng& rng)
      : g_(g), taken_(taken), blocked_(blocked), rng_(rng) {}

  std::vector<std::size_t> grow(std::size_t start, std::size_t target, bool close, std::size_t max_steps,
                                std::size_t stall) {
    const std::size_t k = g_.size();
    in_path_.assign(k, 0);
    free_deg_.assign(k, 0);
    for (std::size_t a = 0; a < k; ++a) {
      if (blocked_[a]) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (b != a && !blocked_[b] && g_.cid(a, b)) ++free_deg_[a];
      }
    }
    path_.clear();
    enter(start);
    closed_ = false;
    std::vector<std::size_t> best = path_;
    std::size_t since_growth = 0;
    bool flipped = false;
    for (std::size_t step = 0; step < max_steps && since_growth <= stall; ++step) {
      const std::size_t end = path_.back();
      if (close && path_.size() == target && path_.size() >= 3) {
        const auto c = g_.cid(end, path_.front());
        if (c && !taken_[c]) {
          taken_[c] = 1;
          closed_ = true;
          return path_;
        }
      }
      if (path_.size() < target && extend(end)) {
        flipped = false;
        since_growth = 0;
        if (path_.size() > best.size()) best = path_;
        continue;
      }
      ++since_growth;
      if (rotate()) continue;
      if (!flipped) {
        std::reverse(path_.begin(), path_.end());
        flipped = true;
        continue;
      }
      break;
    }
    release(path_);
    if (close) return {};
    claim(best);
    return best;
  }

  [[nodiscard]] bool closed() const noexcept { return closed_; }

  void release(const std::vector<std::size_t>& p) {
    for (std::size_t i = 1; i < p.size(); ++i) taken_[g_.cid(p[i - 1], p[i])] = 0;
  }
  void claim(const std::vector<std::size_t>& p) {
    for (std::size_t i = 1; i < p.size(); ++i) taken_[g_.cid(p[i - 1], p[i])] = 1;
  }

 private:
  void enter(std::size_t w) {
    in_path_[w] = 1;
    path_.push_back(w);
    for (std::size_t x = 0; x < g_.size(); ++x) {
      if (x != w && g_.cid(w, x) && free_deg_[x] > 0) --free_deg_[x];
    }
  }

  bool extend(std::size_t end) {
    candidates_.clear();
    std::size_t best_degree = SIZE_MAX;
    for (std::size_t w = 0; w < g_.size(); ++w) {
      if (in_path_[w] || blocked_[w]) continue;
      const auto c = g_.cid(end, w);
      if (!c || taken_[c]) continue;
      // Prefer the candidate with the fewest free continuations.
      if (free_deg_[w] < best_degree) {
        best_degree = free_deg_[w];
        candidates_.clear();
      }
      if (free_deg_[w] == best_degree) candidates_.push_back(w);
    }
    if (candidates_.empty()) return false;
    const std::size_t w = candidates_[rng_.below(candidates_.size())];
    taken_[g_.cid(end, w)] = 1;
    enter(w);
    return true;
  }

  bool rotate() {
    const std::size_t len = path_.size();
    if (len < 3) return false;
    const std::size_t end = path_.back();
    candidates_.clear();
    for (std::size_t i = 0; i + 2 < len; ++i) {
      const auto c = g_.cid(end, path_[i]);
      if (!c) continue;
      const auto dropped = g_.cid(path_[i], path_[i + 1]);
      if (taken_[c] && c != dropped) continue;
      candidates_.push_back(i);
    }
    if (candidates_.empty()) return false;
    const std::size_t i = candidates_[rng_.below(candidates_.size())];
    taken_[g_.cid(path_[i], path_[i + 1])] = 0;
    taken_[g_.cid(end, path_[i])] = 1;
    std::reverse(path_.begin() + static_cast<std::ptrdiff_t>(i) + 1, path_.end());
    return true;
  }

  const LocalColorGraph& g_;
  std::vector<std::uint8_t>& taken_;
  const std::vector<std::uint8_t>& blocked_;
  Rng& rng_;
  std::vector<std::uint8_t> in_path_;
  std::vector<std::size_t> free_deg_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> candidates_;
  bool closed_ = false;
};

/// Exact search for a rainbow Hamilton cycle on a small local graph.
class ExhaustiveCycle {
 public:
  ExhaustiveCycle(const LocalColorGraph& g, std::size_t node_budget)
      : g_(g), budget_(node_budget), taken_(g.num_colors() + 1, 0), visited_(g.size(), 0) {}

  std::optional<std::vector<std::size_t>> run() {
    if (g_.size() < 3) return std::nullopt;
    path_.assign(1, 0);
    visited_[0] = 1;
    if (dfs()) return path_;
    return std::nullopt;
  }

  [[nodiscard]] bool exhausted() const noexcept { return nodes_ >= budget_; }

 private:
  bool dfs() {
    if (++nodes_ >= budget_) return false;
    const std::size_t end = path_.back();
    if (path_.size() == g_.size()) {
      const auto c = g_.cid(end, 0);
      return c && !taken_[c];
    }
    for (std::size_t w = 1; w < g_.size(); ++w) {
      if (visited_[w]) continue;
      const auto c = g_.cid(end, w);
      if (!c || taken_[c]) continue;
      // Reflections: only keep orderings whose second vertex is below the last.
      if (path_.size() == g_.size() - 1 && path_.size() >= 2 && w < path_[1]) continue;
      taken_[c] = 1;
      visited_[w] = 1;
      path_.push_back(w);
      if (dfs()) return true;
      path_.pop_back();
      visited_[w] = 0;
      taken_[c] = 0;
    }
    return false;
  }

  const LocalColorGraph& g_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<std::uint8_t> taken_;
  std::vector<std::uint8_t> visited_;
  std::vector<std::size_t> path_;
};

}  // namespace detail

/// Rainbow Hamilton cycle on exactly `vertices`, using only edges whose
/// colour passes `allowed`. Rotation-extension with restarts first, then an
/// exhaustive search for small vertex sets.
template <typename Allowed>
std::optional<std::vector<Vertex>> cell_cycle(std::span<const Vertex> vertices, const GeometricGraph& graph,
                                              const EdgeColoring& coloring, Allowed&& allowed, Rng& rng,
                                              const SearchBudget& budget = {}) {
  if (vertices.size() < 3) throw UsageError("cell_cycle: need at least three vertices");
  const LocalColorGraph local(vertices, graph, coloring, allowed);
  const std::size_t k = local.size();
  for (std::size_t a = 0; a < k; ++a) {
    std::size_t deg = 0;
    for (std::size_t b = 0; b < k; ++b) deg += local.cid(a, b) ? 1 : 0;
    if (deg < 2) return std::nullopt;
  }
  std::vector<std::uint8_t> taken(local.num_colors() + 1, 0);
  const std::vector<std::uint8_t> blocked(k, 0);
  for (std::size_t attempt = 0; attempt < budget.restarts; ++attempt) {
    detail::RotationSearch search(local, taken, blocked, rng);
    auto found = search.grow(rng.below(k), k, true, 8 * k * k + 64, 4 * k + 16);
    std::fill(taken.begin(), taken.end(), 0);
    if (search.closed()) return local.to_global(found);
  }
  if (k <= budget.exhaustive_max) {
    detail::ExhaustiveCycle exact(local, budget.exhaustive_nodes);
    if (auto found = exact.run()) return local.to_global(*found);
  }
  return std::nullopt;
}

inline std::optional<std::vector<Vertex>> cell_cycle(std::span<const Vertex> vertices, const GeometricGraph& graph,
                                                     const EdgeColoring& coloring, const ColorSet& allowed, Rng& rng,
                                                     const SearchBudget& budget = {}) {
  return cell_cycle(vertices, graph, coloring, [&](Color c) { return allowed.contains(c); }, rng, budget);
}

/// Vertex-disjoint paths covering `vertices`, all edges with allowed and
/// pairwise distinct colours. Greedy longest path with rotations, then
/// endpoint merging; the best of several restarts is kept.
template <typename Allowed>
PathCover path_cover(std::span<const Vertex> vertices, const GeometricGraph& graph, const EdgeColoring& coloring,
                     Allowed&& allowed, Rng& rng, const SearchBudget& budget = {}) {
  const LocalColorGraph local(vertices, graph, coloring, allowed);
  const std::size_t k = local.size();
  std::vector<std::vector<std::size_t>> best;
  bool have_best = false;

  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, budget.cover_restarts); ++attempt) {
    std::vector<std::uint8_t> taken(local.num_colors() + 1, 0);
    std::vector<std::uint8_t> covered(k, 0);
    std::vector<std::vector<std::size_t>> paths;
    std::size_t left = k;
    while (left > 0) {
      // Start from an uncovered vertex with the fewest usable uncovered neighbours.
      std::size_t start = k;
      std::size_t start_deg = SIZE_MAX;
      for (std::size_t a = 0; a < k; ++a) {
        if (covered[a]) continue;
        std::size_t deg = 0;
        for (std::size_t b = 0; b < k; ++b) {
          const auto c = local.cid(a, b);
          if (!covered[b] && c && !taken[c]) ++deg;
        }
        if (deg < start_deg || (deg == start_deg && attempt > 0 && rng.below(2) == 0)) {
          start_deg = deg;
          start = a;
        }
      }
      detail::RotationSearch search(local, taken, covered, rng);
      auto path = search.grow(start, left, false, 4 * k * k + 32, 2 * k + 8);
      for (std::size_t a : path) covered[a] = 1;
      left -= path.size();
      paths.push_back(std::move(path));
    }
    // Merge passes: join two paths by an edge between their endpoints.
    bool merged = true;
    while (merged && paths.size() > 1) {
      merged = false;
      for (std::size_t i = 0; i < paths.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < paths.size() && !merged; ++j) {
          for (int flip_i = 0; flip_i < 2 && !merged; ++flip_i) {
            for (int flip_j = 0; flip_j < 2 && !merged; ++flip_j) {
              const std::size_t a = paths[i].back();
              const std::size_t b = paths[j].front();
              const auto c = local.cid(a, b);
              if (c && !taken[c]) {
                taken[c] = 1;
                paths[i].insert(paths[i].end(), paths[j].begin(), paths[j].end());
                paths.erase(paths.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
                break;
              }
              std::reverse(paths[j].begin(), paths[j].end());
            }
            if (!merged) std::reverse(paths[i].begin(), paths[i].end());
          }
        }
      }
    }
    if (!have_best || paths.size() < best.size()) {
      best = std::move(paths);
      have_best = true;
    }
    if (best.size() <= 1) break;
  }

  PathCover cover;
  for (const auto& p : best) cover.paths.push_back(local.to_global(p));
  return cover;
}

inline PathCover path_cover(std::span<const Vertex> vertices, const GeometricGraph& graph,
                            const EdgeColoring& coloring, const ColorSet& allowed, Rng& rng,
                            const SearchBudget& budget = {}) {
  return path_cover(vertices, graph, coloring, [&](Color c) { return allowed.contains(c); }, rng, budget);
}

}  // namespace rrgg
