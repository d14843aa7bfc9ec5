#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/cycle_state.hpp"

namespace rrgg {

enum class SpliceStatus : std::uint8_t { Ok, PatchFailure, AbsorbFailure, RepairFailure, Multiplicity3 };

inline const char* to_string(SpliceStatus s) {
  switch (s) {
    case SpliceStatus::Ok: return "OK";
    case SpliceStatus::PatchFailure: return "PATCH_FAILURE";
    case SpliceStatus::AbsorbFailure: return "ABSORB_FAILURE";
    case SpliceStatus::RepairFailure: return "REPAIR_FAILURE";
    case SpliceStatus::Multiplicity3: return "COLOR_MULTIPLICITY_3";
  }
  return "?";
}

/// Counters shared by the splice operations over one pipeline run.
struct SpliceStats {
  std::size_t patches = 0;
  std::size_t patch_failures = 0;
  std::size_t absorptions = 0;
  std::size_t absorb_fallbacks = 0;
  std::size_t repair_invocations = 0;
  std::size_t repair_stages = 0;
  std::size_t repair_max_stages = 0;
  bool duplicates_nonincreasing = true;
  std::vector<std::vector<std::size_t>> repair_logs;  // duplicate count before each stage, per invocation
  std::vector<std::uint32_t> claim_b_usage;           // per cell: occurrences as C_x or C_y
  std::uint32_t claim_b_max = 0;
};

struct SpliceOptions {
  std::function<bool(Color)> forbidden;  // empty: nothing forbidden
  bool patch_requires_q1 = true;
  std::size_t repair_stage_cap = 16;
  std::size_t retry_budget = 3;
  const std::vector<CellId>* cell_of = nullptr;  // per-cell colour usage bookkeeping
  SpliceStats* stats = nullptr;

  [[nodiscard]] bool blocked(Color c) const { return forbidden && forbidden(c); }
};

namespace detail {

inline SpliceStats& sink(const SpliceOptions& opts) {
  static thread_local SpliceStats dummy;
  return opts.stats ? *opts.stats : dummy;
}

}  // namespace detail

/// Merges the vertex-disjoint cycle `d_cycle` into the state: deletes an
/// edge {a,b} of D and an edge {c,d} of H inside the parent cell and adds
/// {a,c}, {b,d}. The two new edges need distinct colours from Q1 that are
/// unused by H and D and not forbidden. Each candidate chord is evaluated
/// once. On failure the state is left untouched.
inline SpliceStatus patch_cycle(CycleState& state, std::span<const Vertex> d_cycle,
                                std::span<const Vertex> parent_vertices, const SpliceOptions& opts) {
  SpliceStats& stats = detail::sink(opts);
  const GeometricGraph& graph = state.graph();
  std::vector<Vertex> parent(parent_vertices.begin(), parent_vertices.end());
  std::sort(parent.begin(), parent.end());
  auto in_parent = [&](Vertex v) { return std::binary_search(parent.begin(), parent.end(), v); };

  std::vector<Edge> targets;
  for (Vertex c : parent) {
    if (!state.contains(c)) continue;
    for (Vertex d : state.links(c)) {
      if (d != kNoVertex && c < d && in_parent(d)) targets.emplace_back(c, d);
    }
  }
  std::sort(targets.begin(), targets.end());
  if (targets.empty() || d_cycle.size() < 3) {
    ++stats.patch_failures;
    return SpliceStatus::PatchFailure;
  }

  state.load_cycle(d_cycle);
  std::unordered_map<EdgeId, bool> chord_ok;
  auto acceptable = [&](Vertex x, Vertex y, Color& col) {
    const auto id = graph.find_edge(x, y);
    if (!id) return false;
    col = state.coloring()[*id];
    auto [it, fresh] = chord_ok.try_emplace(*id, false);
    if (fresh) {
      it->second = (!opts.patch_requires_q1 || state.palette().in_q1(col)) && !opts.blocked(col) && !state.uses(col);
    }
    return it->second;
  };

  const std::size_t len = d_cycle.size();
  for (std::size_t i = 0; i < len; ++i) {
    for (int orient = 0; orient < 2; ++orient) {
      const Vertex a = orient == 0 ? d_cycle[i] : d_cycle[(i + 1) % len];
      const Vertex b = orient == 0 ? d_cycle[(i + 1) % len] : d_cycle[i];
      for (const Edge& e2 : targets) {
        Color c1 = kNoColor;
        Color c2 = kNoColor;
        if (!acceptable(a, e2.u, c1) || !acceptable(b, e2.v, c2) || c1 == c2) continue;
        state.remove_edge(a, b);
        state.remove_edge(e2.u, e2.v);
        state.add_edge(a, e2.u);
        state.add_edge(b, e2.v);
        ++stats.patches;
        return SpliceStatus::Ok;
      }
    }
  }
  for (std::size_t i = 0; i < len; ++i) state.remove_edge(d_cycle[i], d_cycle[(i + 1) % len]);
  ++stats.patch_failures;
  return SpliceStatus::PatchFailure;
}

/// Removes duplicated colours stage by stage. Each stage deletes one edge
/// g = {x,y} carrying a duplicated colour, leaving a Hamilton path from y
/// to x, then closes it again through a path edge {u,v} (u before v when
/// walking from y) with u ~ x and v ~ y:  P + {u,x} + {v,y} - {u,v}.
/// Reconnections never raise the duplicate count; Q1 colours are preferred.
inline SpliceStatus repair_repeats(CycleState& state, const SpliceOptions& opts) {
  SpliceStats& stats = detail::sink(opts);
  if (state.duplicates() == 0) return SpliceStatus::Ok;
  ++stats.repair_invocations;
  auto& log = stats.repair_logs.emplace_back();
  const GeometricGraph& graph = state.graph();
  const Palette& pal = state.palette();

  for (std::size_t stage = 0; state.duplicates() > 0; ++stage) {
    log.push_back(state.duplicates());
    if (log.size() >= 2 && log[log.size() - 1] > log[log.size() - 2]) stats.duplicates_nonincreasing = false;
    if (state.max_multiplicity() >= 3) return SpliceStatus::Multiplicity3;
    if (stage >= opts.repair_stage_cap) return SpliceStatus::RepairFailure;

    const Color target = *state.duplicated_colors().begin();
    std::vector<Edge> carriers;
    for (Vertex v = 0; v < graph.num_vertices(); ++v) {
      if (!state.contains(v)) continue;
      for (Vertex w : state.links(v)) {
        if (w != kNoVertex && v < w && state.color(v, w) == target) carriers.emplace_back(v, w);
      }
    }
    std::sort(carriers.begin(), carriers.end());

    struct Move {
      Vertex x, y, u, v;
      std::size_t dup;
      int non_q1;
    };
    bool have = false;
    Move best{};
    const std::size_t current = state.duplicates();
    for (const Edge& g : carriers) {
      for (int orient = 0; orient < 2; ++orient) {
        const Vertex x = orient == 0 ? g.u : g.v;
        const Vertex y = orient == 0 ? g.v : g.u;
        state.remove_edge(x, y);
        const auto pos = state.path_positions(y);
        for (Vertex u : graph.neighbors(x)) {
          if (!state.contains(u) || u == y || pos[u] == kNoVertex) continue;
          Vertex v = kNoVertex;
          for (Vertex w : state.links(u)) {
            if (w != kNoVertex && pos[w] != kNoVertex && pos[w] == pos[u] + 1) v = w;
          }
          if (v == kNoVertex || v == x || !graph.has_edge(v, y)) continue;
          const Color cux = state.color(u, x);
          const Color cvy = state.color(v, y);
          if (opts.blocked(cux) || opts.blocked(cvy)) continue;
          const Color cuv = state.color(u, v);
          const std::size_t dup = state.duplicates_after({cuv}, {cux, cvy});
          const int non_q1 = (pal.in_q1(cux) ? 0 : 1) + (pal.in_q1(cvy) ? 0 : 1);
          const bool better = !have || dup < best.dup || (dup == best.dup && non_q1 < best.non_q1);
          if (better) {
            best = {x, y, u, v, dup, non_q1};
            have = true;
          }
        }
        state.add_edge(x, y);
      }
    }
    if (!have || best.dup > current) return SpliceStatus::RepairFailure;
    state.remove_edge(best.x, best.y);
    state.remove_edge(best.u, best.v);
    state.add_edge(best.u, best.x);
    state.add_edge(best.v, best.y);
    ++stats.repair_stages;
    if (opts.cell_of) {
      for (Vertex w : {best.x, best.y}) {
        const CellId c = (*opts.cell_of)[w];
        if (stats.claim_b_usage.size() <= c) stats.claim_b_usage.resize(c + 1, 0);
        stats.claim_b_max = std::max(stats.claim_b_max, ++stats.claim_b_usage[c]);
      }
    }
  }
  log.push_back(0);
  stats.repair_max_stages = std::max(stats.repair_max_stages, log.size() - 1);
  return SpliceStatus::Ok;
}

/// Splices the vertex-disjoint path (c ... d) into the cycle by deleting a
/// cycle edge {c_l, d_l} and adding {c, c_l}, {d, d_l}. The first swap that
/// keeps the cycle rainbow wins. If none does, feasible swaps are tried in
/// order of fewest resulting duplicates and handed to repair_repeats, up to
/// the retry budget; the state is restored after each failed attempt.
inline SpliceStatus absorb_path(CycleState& state, std::span<const Vertex> path, const SpliceOptions& opts) {
  SpliceStats& stats = detail::sink(opts);
  if (path.empty()) return SpliceStatus::Ok;
  const GeometricGraph& graph = state.graph();
  const Vertex c = path.front();
  const Vertex d = path.back();

  std::vector<Color> path_colors;
  for (std::size_t i = 1; i < path.size(); ++i) path_colors.push_back(state.color(path[i - 1], path[i]));

  struct Swap {
    Vertex cl, dl;
    std::size_t dup;
  };
  std::vector<Swap> feasible;
  std::vector<Color> added(path_colors);
  added.resize(path_colors.size() + 2);

  auto apply = [&](const Swap& s) {
    state.remove_edge(s.cl, s.dl);
    for (std::size_t i = 1; i < path.size(); ++i) state.add_edge(path[i - 1], path[i]);
    state.add_edge(c, s.cl);
    state.add_edge(d, s.dl);
  };

  for (Vertex cl : graph.neighbors(c)) {
    if (!state.contains(cl)) continue;
    std::array<Vertex, 2> nb = state.links(cl);
    std::sort(nb.begin(), nb.end());
    for (Vertex dl : nb) {
      if (dl == kNoVertex || !graph.has_edge(d, dl)) continue;
      if (c == d && dl == cl) continue;
      const Color c1 = state.color(c, cl);
      const Color c2 = state.color(d, dl);
      if (opts.blocked(c1) || opts.blocked(c2)) continue;
      const Color fc = state.color(cl, dl);
      added[path_colors.size()] = c1;
      added[path_colors.size() + 1] = c2;
      const Color removed[] = {fc};
      const std::size_t dup = state.duplicates_after(removed, added);
      if (dup == 0) {
        apply({cl, dl, 0});
        ++stats.absorptions;
        return SpliceStatus::Ok;
      }
      feasible.push_back({cl, dl, dup});
    }
  }
  if (feasible.empty()) return SpliceStatus::AbsorbFailure;

  std::stable_sort(feasible.begin(), feasible.end(), [](const Swap& a, const Swap& b) { return a.dup < b.dup; });
  SpliceStatus last = SpliceStatus::RepairFailure;
  const std::size_t tries = std::min(std::max<std::size_t>(1, opts.retry_budget), feasible.size());
  for (std::size_t t = 0; t < tries; ++t) {
    CycleState snapshot = state;
    apply(feasible[t]);
    ++stats.absorb_fallbacks;
    last = repair_repeats(state, opts);
    if (last == SpliceStatus::Ok) {
      ++stats.absorptions;
      return SpliceStatus::Ok;
    }
    state = std::move(snapshot);
  }
  return last;
}

}  // namespace rrgg
