#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rrgg/coloring.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"

// Ground truth for the construction. Nothing here touches the cycle
// machinery; only the graph and the colouring are read.

namespace rrgg {

struct DuplicateColor {
  Color color;
  Edge first;
  Edge second;
  friend bool operator==(const DuplicateColor&, const DuplicateColor&) = default;
};

struct VerificationReport {
  bool is_hamiltonian = false;
  bool is_rainbow = false;
  std::vector<Vertex> missing_vertices;
  std::vector<Vertex> repeated_vertices;
  std::vector<Vertex> invalid_vertices;  // indices >= n
  std::vector<std::pair<Vertex, Vertex>> non_edges;
  std::vector<DuplicateColor> duplicate_colors;

  [[nodiscard]] bool passes() const {
    return is_hamiltonian && is_rainbow && missing_vertices.empty() && repeated_vertices.empty() &&
           invalid_vertices.empty() && non_edges.empty() && duplicate_colors.empty();
  }
};

/// Checks that `cycle` (closing edge implied) visits every vertex once, uses
/// only graph edges and carries pairwise distinct colours.
inline VerificationReport verify_cycle(const GeometricGraph& graph, const EdgeColoring& coloring,
                                       std::span<const Vertex> cycle) {
  VerificationReport rep;
  const std::size_t n = graph.num_vertices();
  std::vector<std::uint32_t> visits(n, 0);
  for (Vertex v : cycle) {
    if (v >= n) {
      rep.invalid_vertices.push_back(v);
    } else if (++visits[v] == 2) {
      rep.repeated_vertices.push_back(v);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (visits[v] == 0) rep.missing_vertices.push_back(v);
  }

  std::unordered_map<Color, Edge> first_use;
  const std::size_t len = cycle.size();
  for (std::size_t i = 0; len >= 2 && i < len; ++i) {
    const Vertex a = cycle[i];
    const Vertex b = cycle[(i + 1) % len];
    if (len == 2 && i == 1) break;  // a 2-cycle has one distinct pair
    if (a >= n || b >= n || a == b) {
      rep.non_edges.emplace_back(a, b);
      continue;
    }
    const auto id = graph.find_edge(a, b);
    if (!id) {
      rep.non_edges.emplace_back(a, b);
      continue;
    }
    const Color c = coloring[*id];
    const auto [it, fresh] = first_use.try_emplace(c, Edge(a, b));
    if (!fresh) rep.duplicate_colors.push_back({c, it->second, Edge(a, b)});
  }

  rep.is_hamiltonian = n >= 3 && len == n && rep.missing_vertices.empty() && rep.repeated_vertices.empty() &&
                       rep.invalid_vertices.empty() && rep.non_edges.empty();
  rep.is_rainbow = rep.duplicate_colors.empty();
  return rep;
}

inline constexpr std::size_t kBruteForceMaxVertices = 12;
inline constexpr std::size_t kExactPsiMaxVertices = 18;

namespace detail {

class RainbowHamSearch {
 public:
  RainbowHamSearch(const GeometricGraph& graph, const EdgeColoring& coloring)
      : n_(graph.num_vertices()), color_(n_ * n_, kNoColor), used_(coloring.num_colors() + 1, 0) {
    for (const Edge& e : graph.edges()) {
      const Color c = coloring[*graph.find_edge(e.u, e.v)];
      color_[e.u * n_ + e.v] = c;
      color_[e.v * n_ + e.u] = c;
    }
  }

  std::optional<std::vector<Vertex>> run() {
    if (n_ < 3) return std::nullopt;
    path_.assign(1, 0);
    visited_ = 1;
    if (dfs()) return path_;
    return std::nullopt;
  }

 private:
  bool dfs() {
    const Vertex last = path_.back();
    if (path_.size() == n_) {
      const Color close = color_[last * n_ + 0];
      // Each undirected cycle is found in one direction only: path_[1] < last.
      return close != kNoColor && !used_[close] && path_[1] < last;
    }
    for (Vertex w = 1; w < n_; ++w) {
      const Color c = color_[last * n_ + w];
      if (c == kNoColor || (visited_ >> w & 1U) || used_[c]) continue;
      used_[c] = 1;
      visited_ |= 1U << w;
      path_.push_back(w);
      if (dfs()) return true;
      path_.pop_back();
      visited_ &= ~(1U << w);
      used_[c] = 0;
    }
    return false;
  }

  std::size_t n_;
  std::vector<Color> color_;
  std::vector<std::uint8_t> used_;
  std::vector<Vertex> path_;
  std::uint32_t visited_ = 0;
};

}  // namespace detail

/// Exhaustive search for a rainbow Hamilton cycle; definitive for n <= 12.
inline std::optional<std::vector<Vertex>> brute_force_rainbow_ham(const GeometricGraph& graph,
                                                                  const EdgeColoring& coloring) {
  if (graph.num_vertices() > kBruteForceMaxVertices) {
    throw CapacityError("brute_force_rainbow_ham: at most 12 vertices");
  }
  return detail::RainbowHamSearch(graph, coloring).run();
}

/// Minimum number of vertex-disjoint paths covering all vertices. DP over
/// (covered set, end of the last path); n <= 18.
inline std::size_t exact_psi(const std::vector<std::vector<Vertex>>& adj) {
  const std::size_t n = adj.size();
  if (n > kExactPsiMaxVertices) throw CapacityError("exact_psi: at most 18 vertices");
  if (n == 0) return 0;
  std::vector<std::uint32_t> nbr(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex w : adj[v]) {
      if (w < n && w != v) {
        nbr[v] |= 1U << w;
        nbr[w] |= 1U << v;
      }
    }
  }
  const std::uint32_t full = (1U << n) - 1;
  constexpr std::uint8_t kInf = 0xFF;
  std::vector<std::uint8_t> best((static_cast<std::size_t>(full) + 1) * n, kInf);
  for (std::size_t v = 0; v < n; ++v) best[(1U << v) * n + v] = 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (std::size_t v = 0; v < n; ++v) {
      const std::uint8_t here = best[mask * n + v];
      if (here == kInf) continue;
      const std::uint32_t rest = full & ~mask;
      for (std::size_t w = 0; w < n; ++w) {
        if (!(rest >> w & 1U)) continue;
        const std::uint8_t step = (nbr[v] >> w & 1U) ? here : static_cast<std::uint8_t>(here + 1);
        std::uint8_t& slot = best[(mask | (1U << w)) * n + w];
        slot = std::min(slot, step);
      }
    }
  }
  std::uint8_t answer = kInf;
  for (std::size_t v = 0; v < n; ++v) answer = std::min(answer, best[full * n + v]);
  return answer;
}

inline std::size_t exact_psi(const GeometricGraph& graph) {
  if (graph.num_vertices() > kExactPsiMaxVertices) throw CapacityError("exact_psi: at most 18 vertices");
  std::vector<std::vector<Vertex>> adj(graph.num_vertices());
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    const auto nb = graph.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
  }
  return exact_psi(adj);
}

}  // namespace rrgg
