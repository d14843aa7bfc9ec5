#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/geometry.hpp"

namespace rrgg {

enum class Stage : std::uint8_t { GoodPhase, BadPhase, UglyPhase, Done };

/// The growing cycle H. Each vertex stores its (at most two) cycle
/// neighbours without orientation, so splicing is O(1) per edge. Colour
/// multiplicities are kept exactly; a colour of multiplicity >= 2 is a
/// duplicate and only exists while a repair is pending.
class CycleState {
 public:
  CycleState(const GeometricGraph& graph, const EdgeColoring& coloring, const Palette& palette)
      : graph_(&graph),
        coloring_(&coloring),
        palette_(&palette),
        links_(graph.num_vertices(), {kNoVertex, kNoVertex}),
        multiplicity_(static_cast<std::size_t>(coloring.num_colors()) + 1, 0),
        q1_seen_(coloring.num_colors()) {}

  [[nodiscard]] const GeometricGraph& graph() const noexcept { return *graph_; }
  [[nodiscard]] const EdgeColoring& coloring() const noexcept { return *coloring_; }
  [[nodiscard]] const Palette& palette() const noexcept { return *palette_; }

  [[nodiscard]] Stage stage() const noexcept { return stage_; }
  void set_stage(Stage s) noexcept { stage_ = s; }

  /// Counts edges added during the good phase whose colour lies in `b1`.
  void watch_forbidden(const ColorSet* b1) noexcept { watched_ = b1; }
  [[nodiscard]] std::size_t forbidden_hits() const noexcept { return forbidden_hits_; }

  /// Tracks, per cell, the number of cycle edges with exactly one endpoint in it.
  void track_cells(const std::vector<CellId>* cell_of, std::size_t num_cells) {
    cell_of_ = cell_of;
    crossing_.assign(num_cells, 0);
  }
  [[nodiscard]] std::uint32_t crossing_max() const noexcept { return crossing_max_; }

  [[nodiscard]] bool contains(Vertex v) const noexcept { return links_[v][0] != kNoVertex; }
  [[nodiscard]] const std::array<Vertex, 2>& links(Vertex v) const noexcept { return links_[v]; }
  [[nodiscard]] bool has_cycle_edge(Vertex u, Vertex v) const noexcept {
    return links_[u][0] == v || links_[u][1] == v;
  }
  [[nodiscard]] std::size_t num_edges() const noexcept { return num_edges_; }
  [[nodiscard]] std::size_t num_vertices() const noexcept { return num_vertices_; }

  [[nodiscard]] std::uint32_t multiplicity(Color c) const noexcept { return multiplicity_[c]; }
  [[nodiscard]] bool uses(Color c) const noexcept { return multiplicity_[c] != 0; }
  [[nodiscard]] std::size_t duplicates() const noexcept { return duplicates_; }
  [[nodiscard]] std::size_t distinct_colors() const noexcept { return distinct_; }
  [[nodiscard]] std::size_t q1_consumed() const noexcept { return q1_seen_.size(); }
  [[nodiscard]] std::uint32_t max_multiplicity() const noexcept {
    return duplicated_.empty() ? (num_edges_ ? 1 : 0) : max_mult_of_duplicated();
  }
  [[nodiscard]] const std::set<Color>& duplicated_colors() const noexcept { return duplicated_; }

  [[nodiscard]] Color color(Vertex u, Vertex v) const { return edge_color(*graph_, *coloring_, u, v); }

  void add_edge(Vertex u, Vertex v) {
    const Color c = color(u, v);
    attach(u, v);
    attach(v, u);
    ++num_edges_;
    bump(c, +1);
    if (stage_ == Stage::GoodPhase && watched_ && watched_->contains(c)) ++forbidden_hits_;
    if (palette_->in_q1(c)) q1_seen_.insert(c);
    cross(u, v, +1);
  }

  void remove_edge(Vertex u, Vertex v) {
    if (!has_cycle_edge(u, v)) throw std::logic_error("remove_edge: not a cycle edge");
    const Color c = color(u, v);
    detach(u, v);
    detach(v, u);
    --num_edges_;
    bump(c, -1);
    cross(u, v, -1);
  }

  /// Adds the closed cycle (c_0, ..., c_{k-1}) on vertices not yet present.
  void load_cycle(std::span<const Vertex> cycle) {
    for (std::size_t i = 0; i < cycle.size(); ++i) add_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
  }

  /// Duplicate count after hypothetically removing and adding edges of the
  /// given colours. The state is unchanged on return.
  [[nodiscard]] std::size_t duplicates_after(std::span<const Color> removed, std::span<const Color> added) {
    long dup = static_cast<long>(duplicates_);
    for (Color c : removed) {
      if (multiplicity_[c] >= 2) --dup;
      --multiplicity_[c];
    }
    for (Color c : added) {
      if (multiplicity_[c] >= 1) ++dup;
      ++multiplicity_[c];
    }
    for (Color c : added) --multiplicity_[c];
    for (Color c : removed) ++multiplicity_[c];
    return static_cast<std::size_t>(std::max(0L, dup));
  }
  [[nodiscard]] std::size_t duplicates_after(std::initializer_list<Color> removed, std::initializer_list<Color> added) {
    return duplicates_after(std::span<const Color>(removed.begin(), removed.size()),
                            std::span<const Color>(added.begin(), added.size()));
  }

  /// Vertices in cycle order starting from the smallest vertex, heading to
  /// its smaller cycle neighbour. Empty if the state is not a single cycle.
  [[nodiscard]] std::vector<Vertex> sequence() const {
    std::vector<Vertex> out;
    Vertex start = kNoVertex;
    for (Vertex v = 0; v < links_.size(); ++v) {
      if (contains(v)) {
        start = v;
        break;
      }
    }
    if (start == kNoVertex) return out;
    Vertex prev = start;
    Vertex cur = std::min(links_[start][0], links_[start][1]);
    out.push_back(start);
    while (cur != start && cur != kNoVertex && out.size() <= num_vertices_) {
      out.push_back(cur);
      const auto& l = links_[cur];
      const Vertex next = l[0] == prev ? l[1] : l[0];
      prev = cur;
      cur = next;
    }
    if (cur != start || out.size() != num_vertices_) out.clear();
    return out;
  }

  /// Walks a Hamilton path from endpoint `from`; returns position per vertex
  /// (kNoVertex for vertices off the path).
  [[nodiscard]] std::vector<Vertex> path_positions(Vertex from) const {
    std::vector<Vertex> pos(links_.size(), kNoVertex);
    Vertex prev = kNoVertex;
    Vertex cur = from;
    Vertex idx = 0;
    while (cur != kNoVertex && pos[cur] == kNoVertex) {
      pos[cur] = idx++;
      const auto& l = links_[cur];
      const Vertex next = l[0] != prev && l[0] != kNoVertex ? l[0] : (l[1] != prev ? l[1] : kNoVertex);
      prev = cur;
      cur = next;
    }
    return pos;
  }

  /// Structural self-check: a single simple cycle whose vertex set is
  /// exactly `expected` (sorted), colour counts consistent with the edges.
  [[nodiscard]] bool audit(std::span<const Vertex> expected, std::string* why = nullptr) const {
    auto fail = [&](const std::string& msg) {
      if (why) *why = msg;
      return false;
    };
    if (expected.size() != num_vertices_) return fail("vertex count mismatch");
    for (Vertex v : expected) {
      const auto& l = links_[v];
      if (l[0] == kNoVertex || l[1] == kNoVertex) return fail("vertex " + std::to_string(v) + " lacks two links");
      for (Vertex w : l) {
        if (!has_cycle_edge(w, v)) return fail("asymmetric link at " + std::to_string(v));
        if (!graph_->has_edge(v, w)) return fail("cycle pair is not a graph edge");
      }
    }
    const auto seq = sequence();
    if (seq.size() != expected.size()) return fail("not a single cycle");
    std::vector<Vertex> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    if (!std::equal(sorted.begin(), sorted.end(), expected.begin())) return fail("vertex set mismatch");
    std::vector<std::uint32_t> count(multiplicity_.size(), 0);
    for (std::size_t i = 0; i < seq.size(); ++i) ++count[color(seq[i], seq[(i + 1) % seq.size()])];
    if (count != multiplicity_) return fail("colour multiplicities out of sync");
    return true;
  }

 private:
  void attach(Vertex a, Vertex b) {
    auto& l = links_[a];
    if (l[0] == kNoVertex) {
      l[0] = b;
      ++num_vertices_;
    } else if (l[1] == kNoVertex) {
      l[1] = b;
    } else {
      throw std::logic_error("attach: vertex already has two cycle neighbours");
    }
  }

  void detach(Vertex a, Vertex b) {
    auto& l = links_[a];
    if (l[0] == b) {
      l[0] = l[1];
      l[1] = kNoVertex;
    } else {
      l[1] = kNoVertex;
    }
    if (l[0] == kNoVertex) --num_vertices_;
  }

  void bump(Color c, int delta) {
    std::uint32_t& m = multiplicity_[c];
    if (delta > 0) {
      if (m == 0) ++distinct_;
      if (m >= 1) ++duplicates_;
      ++m;
      if (m == 2) duplicated_.insert(c);
    } else {
      if (m >= 2) --duplicates_;
      --m;
      if (m == 0) --distinct_;
      if (m == 1) duplicated_.erase(c);
    }
  }

  void cross(Vertex u, Vertex v, int delta) {
    if (!cell_of_) return;
    const CellId cu = (*cell_of_)[u];
    const CellId cv = (*cell_of_)[v];
    if (cu == cv) return;
    for (CellId c : {cu, cv}) {
      crossing_[c] = static_cast<std::uint32_t>(static_cast<long>(crossing_[c]) + delta);
      crossing_max_ = std::max(crossing_max_, crossing_[c]);
    }
  }

  [[nodiscard]] std::uint32_t max_mult_of_duplicated() const {
    std::uint32_t best = 0;
    for (Color c : duplicated_) best = std::max(best, multiplicity_[c]);
    return best;
  }

  const GeometricGraph* graph_;
  const EdgeColoring* coloring_;
  const Palette* palette_;
  std::vector<std::array<Vertex, 2>> links_;
  std::vector<std::uint32_t> multiplicity_;
  std::set<Color> duplicated_;
  ColorSet q1_seen_;
  std::size_t num_edges_ = 0;
  std::size_t num_vertices_ = 0;
  std::size_t duplicates_ = 0;
  std::size_t distinct_ = 0;
  Stage stage_ = Stage::GoodPhase;
  const ColorSet* watched_ = nullptr;
  std::size_t forbidden_hits_ = 0;
  const std::vector<CellId>* cell_of_ = nullptr;
  std::vector<std::uint32_t> crossing_;
  std::uint32_t crossing_max_ = 0;
};

}  // namespace rrgg
