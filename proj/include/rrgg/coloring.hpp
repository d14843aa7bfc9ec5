#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/rng.hpp"

namespace rrgg {

/// Colors are 1-based; 0 means "no color".
using Color = std::uint32_t;
inline constexpr Color kNoColor = 0;

/// `PaperConstruction` (the construction palette) draws from m = (1+2 eta) n colors. `Strict` draws from
/// q = (1+eta) n colors and carves the patch reserve from the top of [q].
enum class PaletteMode { PaperConstruction, Strict };

inline std::string to_string(PaletteMode mode) {
  return mode == PaletteMode::Strict ? "strict" : "construction";
}

struct ColorRange {
  Color lo = 1;
  Color hi = 0;  // inclusive; empty when hi < lo

  [[nodiscard]] bool contains(Color c) const noexcept { return c >= lo && c <= hi; }
  [[nodiscard]] std::size_t size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  friend bool operator==(const ColorRange&, const ColorRange&) = default;
};

struct Palette {
  std::size_t n = 0;
  double eta = 0.0;
  PaletteMode mode = PaletteMode::PaperConstruction;
  Color m = 0;
  ColorRange q0;  // primary colors, used inside cells
  ColorRange q1;  // patch reserve

  [[nodiscard]] bool in_q0(Color c) const noexcept { return q0.contains(c); }
  [[nodiscard]] bool in_q1(Color c) const noexcept { return q1.contains(c); }
};

inline std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

/// Q = [m], Q0 = [1, (1+eta) n], Q1 = [(1+eta) n + 1, m] with m = (1+2 eta) n,
/// rounded half-up. Strict mode runs the same split with eta/2 so the total is
/// (1+eta) n.
inline Palette make_palette(std::size_t n, double eta, PaletteMode mode = PaletteMode::PaperConstruction) {
  if (n == 0) throw ConfigError("palette: n must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("palette: eta must lie in (0,1)");
  const double split_eta = mode == PaletteMode::Strict ? eta / 2.0 : eta;
  const double nn = static_cast<double>(n);
  Palette pal;
  pal.n = n;
  pal.eta = eta;
  pal.mode = mode;
  pal.m = static_cast<Color>(round_half_up((1.0 + 2.0 * split_eta) * nn));
  const auto q0_hi = static_cast<Color>(round_half_up((1.0 + split_eta) * nn));
  pal.q0 = {1, q0_hi};
  pal.q1 = {q0_hi + 1, pal.m};
  if (pal.q1.size() == 0) throw ConfigError("palette: eta*n too small, the patch reserve Q1 is empty");
  return pal;
}

/// Palette with an explicit total and reserve size (fixtures and q-sweeps).
inline Palette make_palette_with_total(std::size_t n, Color total, Color reserve) {
  if (total == 0) throw ConfigError("palette: total must be positive");
  if (reserve >= total) throw ConfigError("palette: reserve must leave primary colors");
  Palette pal;
  pal.n = n;
  pal.eta = n == 0 ? 0.0 : static_cast<double>(total - n) / static_cast<double>(2 * std::max<std::size_t>(n, 1));
  pal.mode = PaletteMode::PaperConstruction;
  pal.m = total;
  pal.q0 = {1, total - reserve};
  pal.q1 = {total - reserve + 1, total};
  return pal;
}

/// One color per edge of a fixed graph, indexed by EdgeId.
class EdgeColoring {
 public:
  EdgeColoring() = default;
  EdgeColoring(Color m, std::vector<Color> colors) : m_(m), colors_(std::move(colors)) {
    for (Color c : colors_) {
      if (c == kNoColor || c > m_) throw UsageError("edge color outside [1,m]");
    }
  }

  [[nodiscard]] Color num_colors() const noexcept { return m_; }
  [[nodiscard]] std::size_t size() const noexcept { return colors_.size(); }
  [[nodiscard]] Color operator[](EdgeId id) const { return colors_[id]; }
  [[nodiscard]] const std::vector<Color>& colors() const noexcept { return colors_; }

 private:
  Color m_ = 0;
  std::vector<Color> colors_;
};

inline EdgeColoring color_edges(const GeometricGraph& graph, const Palette& palette, Rng& rng) {
  std::vector<Color> colors(graph.num_edges());
  std::uniform_int_distribution<Color> pick(1, palette.m);
  for (Color& c : colors) c = pick(rng.engine());
  return EdgeColoring(palette.m, std::move(colors));
}

/// Color of {u,v}; UsageError when the pair is not an edge.
inline Color edge_color(const GeometricGraph& graph, const EdgeColoring& coloring, Vertex u, Vertex v) {
  const auto id = graph.find_edge(u, v);
  if (!id) throw UsageError("pair is not an edge of the graph");
  return coloring[*id];
}

/// Membership bitmap over [0, m].
class ColorSet {
 public:
  ColorSet() = default;
  explicit ColorSet(Color m) : bits_(static_cast<std::size_t>(m) + 1, 0) {}

  [[nodiscard]] bool contains(Color c) const noexcept { return c < bits_.size() && bits_[c] != 0; }
  bool insert(Color c) {
    if (c >= bits_.size()) throw UsageError("ColorSet: color out of range");
    if (bits_[c]) return false;
    bits_[c] = 1;
    ++count_;
    return true;
  }
  bool erase(Color c) {
    if (!contains(c)) return false;
    bits_[c] = 0;
    --count_;
    return true;
  }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] Color capacity() const noexcept { return bits_.empty() ? 0 : static_cast<Color>(bits_.size() - 1); }

  void merge(const ColorSet& other) {
    for (Color c = 1; c < other.bits_.size(); ++c) {
      if (other.bits_[c]) insert(c);
    }
  }

  [[nodiscard]] std::vector<Color> to_vector() const {
    std::vector<Color> out;
    out.reserve(count_);
    for (Color c = 1; c < bits_.size(); ++c) {
      if (bits_[c]) out.push_back(c);
    }
    return out;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Exact multiplicity of each color over an edge list.
inline std::map<Color, std::size_t> color_census(const GeometricGraph& graph, const EdgeColoring& coloring,
                                                 std::span<const Edge> edges) {
  std::map<Color, std::size_t> census;
  for (const Edge& e : edges) ++census[edge_color(graph, coloring, e.u, e.v)];
  return census;
}

inline bool is_rainbow(const GeometricGraph& graph, const EdgeColoring& coloring, std::span<const Edge> edges) {
  std::vector<Color> seen;
  seen.reserve(edges.size());
  for (const Edge& e : edges) seen.push_back(edge_color(graph, coloring, e.u, e.v));
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

/// Vertex paths; consecutive entries are edges of the graph.
struct PathCover {
  std::vector<std::vector<Vertex>> paths;
  std::vector<std::uint32_t> anchors;  // per-path anchor cell id (ugly cover only)

  [[nodiscard]] std::size_t psi() const noexcept { return paths.size(); }
  [[nodiscard]] std::size_t num_vertices() const {
    std::size_t total = 0;
    for (const auto& p : paths) total += p.size();
    return total;
  }
  [[nodiscard]] std::size_t num_edges() const {
    std::size_t total = 0;
    for (const auto& p : paths) total += p.empty() ? 0 : p.size() - 1;
    return total;
  }
};

inline std::vector<Edge> path_edges(std::span<const Vertex> path) {
  std::vector<Edge> out;
  for (std::size_t i = 1; i < path.size(); ++i) out.emplace_back(path[i - 1], path[i]);
  return out;
}

/// B1: colors on edges with an endpoint flagged in `outside_good` (vertices
/// of bad or ugly cells), plus colors on edges of the cover paths.
inline ColorSet forbidden_b1(const GeometricGraph& graph, const EdgeColoring& coloring,
                             std::span<const std::uint8_t> outside_good, const PathCover& cover) {
  ColorSet b1(coloring.num_colors());
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (!outside_good[v]) continue;
    for (EdgeId id : graph.incident_edges(v)) b1.insert(coloring[id]);
  }
  for (const auto& path : cover.paths) {
    for (std::size_t i = 1; i < path.size(); ++i) b1.insert(edge_color(graph, coloring, path[i - 1], path[i]));
  }
  return b1;
}

}  // namespace rrgg
