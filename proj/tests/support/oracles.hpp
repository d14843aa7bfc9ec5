#pragma once

// Test-side reference implementations. They share no code with the library
// beyond plain data types, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

namespace oracle {

inline double distance(const std::vector<double>& a, const std::vector<double>& b, double p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = std::fabs(a[k] - b[k]);
    if (std::isinf(p)) {
      acc = std::max(acc, t);
    } else {
      acc += std::pow(t, p);
    }
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

inline std::vector<std::vector<double>> unpack(const rrgg::PointSet& pts) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.emplace_back(pts[i].begin(), pts[i].end());
  return out;
}

/// Every pair compared directly.
inline std::set<std::pair<rrgg::Vertex, rrgg::Vertex>> all_pairs_edges(const rrgg::PointSet& pts, double r, double p) {
  const auto x = unpack(pts);
  std::set<std::pair<rrgg::Vertex, rrgg::Vertex>> out;
  for (rrgg::Vertex i = 0; i < x.size(); ++i) {
    for (rrgg::Vertex j = i + 1; j < x.size(); ++j) {
      if (distance(x[i], x[j], p) <= r) out.emplace(i, j);
    }
  }
  return out;
}

inline std::set<std::pair<rrgg::Vertex, rrgg::Vertex>> edge_set(const rrgg::GeometricGraph& g) {
  std::set<std::pair<rrgg::Vertex, rrgg::Vertex>> out;
  for (const auto& e : g.edges()) out.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  return out;
}

/// Volume of the unit l_p ball via tgamma (the library uses lgamma).
inline double ball_volume(int d, double p) {
  if (std::isinf(p)) return std::pow(2.0, d);
  return std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), d) / std::tgamma(1.0 + d / p);
}

/// Threshold radius re-derived term by term. For d = 2 the ln ln n
/// coefficient vanishes and the 2^(2-d) factor is 1, which is taken as the
/// independent special case.
inline double threshold_radius(double n, int d, double p, double omega) {
  const double ln_n = std::log(n);
  if (d == 2) return std::sqrt((ln_n + std::log(ln_n) + omega) / (ball_volume(2, p) * n));
  const double a = 2.0 / d;
  const double b = 4.0 - d - a;
  const double rd = (a * ln_n + b * std::log(ln_n) + omega) / (std::pow(2.0, 2 - d) * ball_volume(d, p) * n);
  return std::exp(std::log(rd) / d);
}

/// Hamilton path on the vertex subset `mask` of an adjacency matrix.
inline bool has_ham_path(const std::vector<std::vector<bool>>& adj, std::uint32_t mask) {
  std::vector<int> verts;
  for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
    if (mask >> v & 1U) verts.push_back(v);
  }
  if (verts.size() <= 1) return true;
  do {
    bool ok = true;
    for (std::size_t i = 1; i < verts.size() && ok; ++i) ok = adj[verts[i - 1]][verts[i]];
    if (ok) return true;
  } while (std::next_permutation(verts.begin(), verts.end()));
  return false;
}

/// Fewest vertex-disjoint paths covering everything, by enumerating set
/// partitions and testing each block for a Hamilton path. n <= 8.
inline std::size_t psi_by_partitions(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 0) return 0;
  std::size_t best = static_cast<std::size_t>(n);
  std::vector<int> block(n, 0);
  // Restricted growth strings enumerate each partition once.
  auto visit = [&](auto&& self, int i, int blocks) -> void {
    if (static_cast<std::size_t>(blocks) >= best) return;
    if (i == n) {
      for (int b = 0; b < blocks; ++b) {
        std::uint32_t mask = 0;
        for (int v = 0; v < n; ++v) {
          if (block[v] == b) mask |= 1U << v;
        }
        if (!has_ham_path(adj, mask)) return;
      }
      best = static_cast<std::size_t>(blocks);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  visit(visit, 0, 0);
  return best;
}

/// Rainbow Hamilton cycle by enumerating permutations that fix vertex 0.
inline bool rainbow_ham_exists(const rrgg::GeometricGraph& g, const rrgg::EdgeColoring& col) {
  const std::size_t n = g.num_vertices();
  if (n < 3) return false;
  std::vector<rrgg::Vertex> perm;
  for (rrgg::Vertex v = 1; v < n; ++v) perm.push_back(v);
  do {
    std::set<rrgg::Color> seen;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const rrgg::Vertex a = i == 0 ? 0 : perm[i - 1];
      const rrgg::Vertex b = i + 1 == n ? 0 : perm[i];
      const auto id = g.find_edge(a, b);
      ok = id && seen.insert(col[*id]).second;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Verifies a cycle the long way: walk it backwards and rebuild every count.
inline bool reverse_verify(const rrgg::GeometricGraph& g, const rrgg::EdgeColoring& col,
                           const std::vector<rrgg::Vertex>& cycle) {
  const std::size_t n = g.num_vertices();
  if (cycle.size() != n || n < 3) return false;
  std::vector<rrgg::Vertex> rev(cycle.rbegin(), cycle.rend());
  std::vector<int> hits(n, 0);
  std::vector<rrgg::Color> colors;
  for (std::size_t i = 0; i < n; ++i) {
    if (rev[i] >= n || hits[rev[i]]++) return false;
    const auto id = g.find_edge(rev[i], rev[(i + 1) % n]);
    if (!id) return false;
    colors.push_back(col[*id]);
  }
  std::sort(colors.begin(), colors.end());
  return std::adjacent_find(colors.begin(), colors.end()) == colors.end();
}

/// Cycles are pairwise edge-disjoint Hamilton cycles on k labels.
inline bool disjoint_hamilton_cycles(const std::vector<std::vector<std::size_t>>& cycles, std::size_t k) {
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (const auto& c : cycles) {
    if (c.size() != k) return false;
    std::vector<std::size_t> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < k; ++i) {
      if (sorted[i] != i) return false;
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto a = c[i];
      const auto b = c[(i + 1) % k];
      if (!used.emplace(std::min(a, b), std::max(a, b)).second) return false;
    }
  }
  return true;
}

}  // namespace oracle
