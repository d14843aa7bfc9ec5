#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rrgg/cell_search.hpp"
#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/cycle_state.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/oracle.hpp"
#include "rrgg/properties.hpp"
#include "rrgg/rng.hpp"
#include "rrgg/splice.hpp"
#include "rrgg/ugly_cover.hpp"
#include "rrgg/walecki.hpp"

namespace rrgg {

enum class Phase : std::uint8_t { None, Precheck, Classify, Cover, Good, Bad, Ugly, Verify };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::None: return "NONE";
    case Phase::Precheck: return "PRECHECK";
    case Phase::Classify: return "CLASSIFY";
    case Phase::Cover: return "COVER";
    case Phase::Good: return "GOOD_PHASE";
    case Phase::Bad: return "BAD_PHASE";
    case Phase::Ugly: return "UGLY_PHASE";
    case Phase::Verify: return "VERIFY";
  }
  return "?";
}

inline std::size_t default_psi0(double epsilon, double eta) {
  return static_cast<std::size_t>(std::ceil(5.0 / (epsilon * epsilon * epsilon * eta)));
}
inline std::size_t default_k0(double epsilon) { return static_cast<std::size_t>(std::ceil(20.0 / epsilon)); }
inline std::size_t default_repair_cap(double epsilon, double eta) {
  const double xi0 = eta * eta * epsilon / 8.0;
  return static_cast<std::size_t>(std::clamp(std::ceil(2.0 / xi0), 4.0, 64.0));
}

struct PipelineParams {
  double eta = 0.2;
  double epsilon = 0.05;
  std::size_t psi0 = 0;              // 0: 5 / (eps^3 eta)
  std::size_t k0 = 0;                // 0: 20 / eps
  std::size_t repair_stage_cap = 0;  // 0: 2 / xi0 clamped to [4, 64]
  std::size_t retry_budget = 3;
  std::size_t dense_min = 0;  // 0: max(4, eps^3 ln n)
  SearchBudget budget;
  std::uint64_t seed = 0;
  bool audit = false;  // re-check the cycle after every good cell
  bool properties = true;
  double separation = 3.0;

  void validate() const {
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
    if (retry_budget == 0) throw ConfigError("retry_budget must be positive");
  }
  [[nodiscard]] std::size_t psi0_or_default() const { return psi0 ? psi0 : default_psi0(epsilon, eta); }
  [[nodiscard]] std::size_t k0_or_default() const { return k0 ? k0 : default_k0(epsilon); }
  [[nodiscard]] std::size_t cap_or_default() const {
    return repair_stage_cap ? repair_stage_cap : default_repair_cap(epsilon, eta);
  }
};

struct Diagnostics {
  Phase phase = Phase::None;  // failing phase; None on success
  std::string reason = "OK";
  std::string witness;

  std::size_t num_cells = 0;
  std::size_t good_cells = 0;
  std::size_t bad_cells = 0;
  std::size_t ugly_cells = 0;
  std::size_t demoted_cells = 0;
  std::size_t dense_min = 0;
  std::size_t cover_paths = 0;
  std::size_t cover_vertices = 0;
  std::size_t b1_size = 0;

  std::size_t cell_cycles = 0;
  std::size_t cover_cells = 0;  // good cells handled by a path cover
  std::size_t psi_max = 0;
  std::size_t psi_overflows = 0;
  std::size_t reseeds = 0;
  std::size_t walecki_cells = 0;
  std::size_t good_b1_hits = 0;
  std::size_t q1_used = 0;
  std::size_t q1_size = 0;
  std::uint32_t claim_a_max = 0;
  std::uint32_t claim_b_max = 0;
  std::size_t audits = 0;
  SpliceStats splice;
  PropertyReport properties;
  std::vector<std::pair<std::string, double>> timings_ms;
  double ms_total = 0.0;
};

struct PipelineResult {
  bool success = false;
  std::vector<Vertex> cycle;
  Diagnostics diag;
};

namespace detail {

class Pipeline {
  using Clock = std::chrono::steady_clock;

 public:
  Pipeline(const GeometricGraph& graph, const EdgeColoring& coloring, const Palette& palette,
           const PipelineParams& params)
      : graph_(graph),
        coloring_(coloring),
        palette_(palette),
        params_(params),
        rng_(Rng(params.seed).split("pipeline")),
        state_(graph, coloring, palette),
        placed_(graph.num_vertices(), 0),
        covered_(graph.num_vertices(), 0),
        cover_colors_(coloring.num_colors()),
        pending_(coloring.num_colors()) {}

  PipelineResult run() {
    const auto start = Clock::now();
    params_.validate();
    const bool ok = precheck() && classify() && cover() && good_phase() && bad_phase() && ugly_phase() && verify();
    result_.success = ok;
    finish(start);
    return std::move(result_);
  }

 private:
  bool fail(Phase phase, std::string reason, std::string witness = {}) {
    auto& d = result_.diag;
    d.phase = phase;
    d.reason = std::move(reason);
    d.witness = std::move(witness);
    return false;
  }

  void lap(const char* name) {
    const auto now = Clock::now();
    result_.diag.timings_ms.emplace_back(name, std::chrono::duration<double, std::milli>(now - lap_).count());
    lap_ = now;
  }

  void finish(Clock::time_point start) {
    auto& d = result_.diag;
    d.good_b1_hits = state_.forbidden_hits();
    d.q1_used = state_.q1_consumed();
    d.q1_size = palette_.q1.size();
    d.claim_a_max = state_.crossing_max();
    d.claim_b_max = stats_.claim_b_max;
    d.splice = std::move(stats_);
    d.ms_total = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }

  bool precheck() {
    lap_ = Clock::now();
    const std::size_t n = graph_.num_vertices();
    if (n < 3) return fail(Phase::Precheck, "TOO_FEW_VERTICES", std::to_string(n));
    if (palette_.m < n) {
      return fail(Phase::Precheck, "PIGEONHOLE", std::to_string(palette_.m) + " colours for " + std::to_string(n) + " edges");
    }
    for (Vertex v = 0; v < n; ++v) {
      if (graph_.degree(v) < 2) return fail(Phase::Precheck, "MIN_DEGREE", "vertex " + std::to_string(v));
    }
    lap("precheck");
    return true;
  }

  bool classify() {
    grid_.emplace(graph_.points(), graph_.radius(), params_.epsilon);
    cg_ = build_cell_graph(*grid_, graph_.radius(), graph_.p_norm());
    const std::size_t n = graph_.num_vertices();
    const std::size_t dense_min = params_.dense_min ? params_.dense_min : default_dense_min(params_.epsilon, n);
    auto& d = result_.diag;
    d.num_cells = grid_->num_cells();
    d.dense_min = dense_min;
    try {
      classify_cells(*grid_, cg_, graph_, coloring_, dense_min);
    } catch (const ClassificationError& e) {
      return fail(Phase::Classify, "NO_GIANT", e.what());
    }
    d.good_cells = cg_.count(CellClass::Good);
    d.bad_cells = cg_.count(CellClass::Bad);
    d.ugly_cells = cg_.count(CellClass::Ugly);
    d.demoted_cells = static_cast<std::size_t>(std::count(cg_.demoted.begin(), cg_.demoted.end(), 1));
    order_ = dfs_order(cg_);
    state_.track_cells(&grid_->cell_of_points(), grid_->num_cells());
    stats_.claim_b_usage.assign(grid_->num_cells(), 0);
    lap("classify");
    return true;
  }

  bool cover() {
    auto uc = cover_ugly(graph_, coloring_, *grid_, cg_);
    cover_ = std::move(uc.cover);
    auto& d = result_.diag;
    d.cover_paths = cover_.psi();
    d.cover_vertices = cover_.num_vertices();
    if (!uc.ok) return fail(Phase::Cover, "COVER_FAILURE", "ugly vertex " + std::to_string(uc.witness));
    for (const auto& path : cover_.paths) {
      for (Vertex v : path) covered_[v] = 1;
      for (std::size_t i = 1; i < path.size(); ++i) {
        if (!cover_colors_.insert(state_.color(path[i - 1], path[i]))) {
          return fail(Phase::Cover, "COVER_NOT_RAINBOW", "vertex " + std::to_string(path[i]));
        }
      }
    }
    b1_ = forbidden_b1(graph_, coloring_, outside_good_mask(*grid_, cg_), cover_);
    d.b1_size = b1_.size();
    lap("cover");
    if (params_.properties) {
      d.properties = check_properties(graph_, *grid_, cg_, coloring_, cover_,
                                      {params_.epsilon, params_.k0_or_default(), params_.separation});
      lap("properties");
    }
    return true;
  }

  [[nodiscard]] std::vector<Vertex> members(CellId c) const {
    std::vector<Vertex> out;
    for (Vertex v : grid_->points_of(c)) {
      if (!covered_[v]) out.push_back(v);
    }
    return out;
  }

  SpliceOptions options(bool good) {
    SpliceOptions o;
    if (good) {
      o.forbidden = [this](Color c) { return b1_.contains(c) || pending_.contains(c); };
    } else {
      o.forbidden = [this](Color c) { return pending_.contains(c); };
    }
    o.repair_stage_cap = params_.cap_or_default();
    o.retry_budget = params_.retry_budget;
    o.cell_of = &grid_->cell_of_points();
    o.stats = &stats_;
    return o;
  }

  void place(std::span<const Vertex> vs) {
    for (Vertex v : vs) placed_[v] = 1;
  }

  bool audit(CellId cell) {
    if (!params_.audit) return true;
    ++result_.diag.audits;
    std::vector<Vertex> expected;
    for (Vertex v = 0; v < placed_.size(); ++v) {
      if (placed_[v]) expected.push_back(v);
    }
    std::string why;
    if (!state_.audit(expected, &why) || state_.duplicates() != 0) {
      return fail(Phase::Good, "AUDIT_FAILURE", "after cell " + std::to_string(cell) + ": " + why);
    }
    return true;
  }

  template <typename Allowed>
  std::optional<std::vector<Vertex>> find_cycle(const std::vector<Vertex>& vs, Allowed&& allowed) {
    if (vs.size() < 3) return std::nullopt;
    for (std::size_t attempt = 0; attempt < params_.retry_budget; ++attempt) {
      if (attempt > 0) ++result_.diag.reseeds;
      if (auto found = cell_cycle(vs, graph_, coloring_, allowed, rng_, params_.budget)) return found;
    }
    return std::nullopt;
  }

  bool good_phase() {
    state_.watch_forbidden(&b1_);
    state_.set_stage(Stage::GoodPhase);
    const SpliceOptions opts = options(true);
    const std::size_t psi0 = params_.psi0_or_default();
    auto allowed = [this](Color c) { return palette_.in_q0(c) && !state_.uses(c) && !b1_.contains(c); };
    auto& d = result_.diag;

    for (std::size_t i = 0; i < order_.order.size(); ++i) {
      const CellId cell = order_.order[i];
      const auto vs = members(cell);
      if (vs.empty()) continue;

      if (state_.num_vertices() == 0) {
        auto first = find_cycle(vs, allowed);
        if (!first) return fail(Phase::Good, "BOOTSTRAP_FAILURE", "cell " + std::to_string(cell));
        ++d.cell_cycles;
        state_.load_cycle(*first);
        place(vs);
        if (!audit(cell)) return false;
        continue;
      }

      bool done = false;
      if (auto cyc = find_cycle(vs, allowed)) {
        ++d.cell_cycles;
        const CellId parent = order_.parent[i];
        SpliceStatus st = SpliceStatus::PatchFailure;
        if (parent != kNoCell) st = patch_cycle(state_, *cyc, grid_->points_of(parent), opts);
        // An unpatchable D_i is still a rainbow path through the cell.
        if (st != SpliceStatus::Ok) st = absorb_path(state_, *cyc, opts);
        done = st == SpliceStatus::Ok;
      }
      if (!done) {
        const PathCover pc = path_cover(vs, graph_, coloring_, allowed, rng_, params_.budget);
        ++d.cover_cells;
        d.psi_max = std::max(d.psi_max, pc.psi());
        if (pc.psi() > psi0) ++d.psi_overflows;
        if (!absorb_all(pc, opts, Phase::Good, cell)) return false;
      }
      place(vs);
      if (!audit(cell)) return false;
    }
    if (state_.num_vertices() == 0) return fail(Phase::Good, "BOOTSTRAP_FAILURE", "no good vertices");
    lap("good");
    return true;
  }

  bool absorb_all(const PathCover& pc, const SpliceOptions& opts, Phase phase, CellId cell) {
    for (const auto& path : pc.paths) {
      for (std::size_t k = 1; k < path.size(); ++k) pending_.insert(state_.color(path[k - 1], path[k]));
    }
    for (const auto& path : pc.paths) {
      for (std::size_t k = 1; k < path.size(); ++k) pending_.erase(state_.color(path[k - 1], path[k]));
      const SpliceStatus st = absorb_path(state_, path, opts);
      if (st != SpliceStatus::Ok) {
        return fail(phase, to_string(st), "cell " + std::to_string(cell) + ", path from vertex " + std::to_string(path.front()));
      }
    }
    return true;
  }

  // Colours on edges touching non-good cells other than `cell`, or on the cover.
  [[nodiscard]] std::vector<std::uint8_t> b1_without(CellId cell) const {
    std::vector<std::uint8_t> in(static_cast<std::size_t>(coloring_.num_colors()) + 1, 0);
    auto foreign = [&](Vertex v) {
      const CellId c = grid_->cell_of(v);
      return c != cell && cg_.cls[c] != CellClass::Good;
    };
    for (Vertex v = 0; v < graph_.num_vertices(); ++v) {
      if (!foreign(v)) continue;
      for (EdgeId id : graph_.incident_edges(v)) in[coloring_[id]] = 1;
    }
    for (Color c : cover_colors_.to_vector()) in[c] = 1;
    return in;
  }

  // A big bad cell is a clique: pick one of its edge-disjoint Hamilton
  // cycles whose colours are fresh and least entangled with B1 of the
  // other non-good cells, then patch it through a good neighbour.
  bool insert_clique(CellId cell, const std::vector<Vertex>& vs, const SpliceOptions& opts) {
    const std::size_t k0 = params_.k0_or_default();
    auto cycles = walecki_cycles(vs.size());
    if (cycles.size() > k0) cycles.resize(k0);
    const auto b1c = b1_without(cell);
    std::optional<std::vector<Vertex>> best;
    std::size_t best_score = SIZE_MAX;
    for (const auto& local : cycles) {
      std::vector<Vertex> cyc;
      for (std::size_t a : local) cyc.push_back(vs[a]);
      std::vector<Color> cols;
      bool usable = true;
      for (std::size_t j = 0; j < cyc.size() && usable; ++j) {
        const auto id = graph_.find_edge(cyc[j], cyc[(j + 1) % cyc.size()]);
        if (!id) {
          usable = false;  // cell is not a clique in G
          break;
        }
        const Color c = coloring_[*id];
        usable = !state_.uses(c) && !cover_colors_.contains(c);
        cols.push_back(c);
      }
      if (!usable) continue;
      std::sort(cols.begin(), cols.end());
      if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) continue;
      std::size_t score = 0;
      for (Color c : cols) score += b1c[c];
      if (score < best_score) {
        best_score = score;
        best = std::move(cyc);
      }
    }
    if (!best) return false;
    SpliceOptions loose = opts;
    loose.patch_requires_q1 = false;
    for (CellId g : cg_.neighbors(cell)) {
      if (cg_.cls[g] != CellClass::Good) continue;
      if (patch_cycle(state_, *best, grid_->points_of(g), loose) == SpliceStatus::Ok) return true;
    }
    return false;
  }

  bool bad_phase() {
    state_.set_stage(Stage::BadPhase);
    pending_ = cover_colors_;
    const SpliceOptions opts = options(false);
    const std::size_t big = 2 * params_.k0_or_default() + 1;
    std::vector<Vertex> singles;
    for (CellId c = 0; c < grid_->num_cells(); ++c) {
      if (cg_.cls[c] != CellClass::Bad) continue;
      const auto vs = members(c);
      if (vs.size() > big && insert_clique(c, vs, opts)) {
        ++result_.diag.walecki_cells;
        place(vs);
        continue;
      }
      singles.insert(singles.end(), vs.begin(), vs.end());
    }
    // One-by-one insertion, repeated while some vertex still gets in.
    bool progress = true;
    while (progress && !singles.empty()) {
      progress = false;
      std::vector<Vertex> rest;
      for (Vertex v : singles) {
        const Vertex one[] = {v};
        if (absorb_path(state_, one, opts) == SpliceStatus::Ok) {
          placed_[v] = 1;
          progress = true;
        } else {
          rest.push_back(v);
        }
      }
      singles = std::move(rest);
    }
    if (!singles.empty()) return fail(Phase::Bad, "BAD_PHASE_FAILURE", "vertex " + std::to_string(singles.front()));
    lap("bad");
    return true;
  }

  bool ugly_phase() {
    state_.set_stage(Stage::UglyPhase);
    pending_ = cover_colors_;
    const SpliceOptions opts = options(false);
    std::vector<std::size_t> left(cover_.psi());
    for (std::size_t i = 0; i < left.size(); ++i) left[i] = i;
    bool progress = true;
    while (progress && !left.empty()) {
      progress = false;
      std::vector<std::size_t> rest;
      for (std::size_t i : left) {
        const auto& path = cover_.paths[i];
        for (std::size_t k = 1; k < path.size(); ++k) pending_.erase(state_.color(path[k - 1], path[k]));
        if (absorb_path(state_, path, opts) == SpliceStatus::Ok) {
          place(path);
          progress = true;
        } else {
          for (std::size_t k = 1; k < path.size(); ++k) pending_.insert(state_.color(path[k - 1], path[k]));
          rest.push_back(i);
        }
      }
      left = std::move(rest);
    }
    if (!left.empty()) {
      return fail(Phase::Ugly, "UGLY_PHASE_FAILURE", "path " + std::to_string(left.front()));
    }
    lap("ugly");
    return true;
  }

  bool verify() {
    state_.set_stage(Stage::Done);
    auto seq = state_.sequence();
    const auto report = verify_cycle(graph_, coloring_, seq);
    lap("verify");
    if (!report.passes() || state_.distinct_colors() != graph_.num_vertices()) {
      return fail(Phase::Verify, "VERIFY_FAILURE", std::to_string(report.missing_vertices.size()) + " missing, " +
                                                       std::to_string(report.duplicate_colors.size()) + " repeats");
    }
    result_.cycle = std::move(seq);
    return true;
  }

  const GeometricGraph& graph_;
  const EdgeColoring& coloring_;
  const Palette& palette_;
  PipelineParams params_;
  Rng rng_;
  CycleState state_;
  std::optional<CellGrid> grid_;
  CellGraph cg_;
  CellOrder order_;
  PathCover cover_;
  ColorSet b1_{0};
  std::vector<std::uint8_t> placed_;
  std::vector<std::uint8_t> covered_;
  ColorSet cover_colors_;
  ColorSet pending_;
  SpliceStats stats_;
  PipelineResult result_;
  Clock::time_point lap_;
};

}  // namespace detail

/// Classify, cover the ugly cells, grow the cycle over good cells, insert
/// bad cells, absorb the ugly paths, verify. Deterministic given the seed.
inline PipelineResult find_rainbow_hamilton(const GeometricGraph& graph, const EdgeColoring& coloring,
                                            const Palette& palette, const PipelineParams& params) {
  return detail::Pipeline(graph, coloring, palette, params).run();
}

}  // namespace rrgg
