#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rrgg/coloring.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/io.hpp"
#include "rrgg/oracle.hpp"
#include "rrgg/pipeline.hpp"
#include "rrgg/rng.hpp"

namespace rrgg {

enum class RadiusMode : std::uint8_t { Fixed, Eq1, Hitting };

inline const char* to_string(RadiusMode m) {
  switch (m) {
    case RadiusMode::Fixed: return "fixed";
    case RadiusMode::Eq1: return "eq1";
    case RadiusMode::Hitting: return "hitting";
  }
  return "?";
}

inline RadiusMode parse_radius_mode(const std::string& s) {
  if (s == "fixed") return RadiusMode::Fixed;
  if (s == "eq1") return RadiusMode::Eq1;
  if (s == "hitting") return RadiusMode::Hitting;
  throw ConfigError("radius mode must be fixed, eq1 or hitting (got '" + s + "')");
}

inline PaletteMode parse_palette_mode(const std::string& s) {
  if (s == "construction" || s == "paper-construction") return PaletteMode::PaperConstruction;
  if (s == "strict") return PaletteMode::Strict;
  throw ConfigError("palette must be construction or strict (got '" + s + "')");
}

struct TrialConfig {
  std::size_t n = 1000;
  int d = 2;
  double p_norm = 2.0;
  double eta = 0.2;
  double epsilon = 0.05;
  std::optional<double> omega;  // unset: max(0, ln ln ln n)
  RadiusMode mode = RadiusMode::Eq1;
  double radius = 0.0;  // fixed mode
  double radius_scale = 1.0;
  PaletteMode palette = PaletteMode::PaperConstruction;
  Color colors = 0;  // nonzero: palette total override, Q1 keeps the share eta/(1+2 eta)
  std::size_t dense_min = 0;
  bool audit = false;

  [[nodiscard]] double omega_value() const { return omega ? *omega : default_omega(n); }

  /// Everything checkable before sampling.
  void validate() const {
    RggConfig{n, d, p_norm, 0}.validate();
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon * 2.0 * d < 1.0)) throw ConfigError("epsilon must lie in (0, 1/(2d))");
    if (!(radius_scale > 0.0) || !std::isfinite(radius_scale)) throw ConfigError("radius scale must be positive");
    if (mode == RadiusMode::Hitting && radius_scale < 1.0) throw ConfigError("hitting mode needs scale >= 1");
    if (mode == RadiusMode::Fixed) {
      if (!(radius > 0.0)) throw ConfigError("fixed mode needs a positive --radius");
      if (!(epsilon * radius * radius_scale < 1.0)) throw ConfigError("epsilon * r must be below 1");
    }
    if (mode == RadiusMode::Eq1) {
      const double r = threshold_radius(n, d, p_norm, omega_value()) * radius_scale;
      if (!(epsilon * r < 1.0)) throw ConfigError("epsilon * r must be below 1");
    }
    if (mode == RadiusMode::Hitting && n <= 2) throw ConfigError("hitting mode needs n >= 3");
    (void)make_trial_palette();
  }

  [[nodiscard]] Palette make_trial_palette() const {
    if (colors == 0) return make_palette(n, eta, palette);
    const double share = palette == PaletteMode::Strict ? (eta / 2) / (1 + eta) : eta / (1 + 2 * eta);
    const auto reserve = static_cast<Color>(std::max<std::size_t>(1, round_half_up(share * colors)));
    return make_palette_with_total(n, colors, reserve);
  }
};

struct TrialRecord {
  TrialConfig config;
  std::uint64_t seed = 0;
  double radius = 0.0;
  std::optional<double> r_hat;
  bool success = false;
  Diagnostics diag;
  std::vector<Vertex> cycle;
};

/// Sample, build, colour, run the pipeline, and re-check any success with
/// the oracle before recording it.
inline TrialRecord run_trial(const TrialConfig& cfg, std::uint64_t seed, PipelineParams* override_params = nullptr) {
  cfg.validate();
  TrialRecord rec;
  rec.config = cfg;
  rec.seed = seed;
  const PointSet points = sample_points(RggConfig{cfg.n, cfg.d, cfg.p_norm, seed});
  switch (cfg.mode) {
    case RadiusMode::Fixed: rec.radius = cfg.radius * cfg.radius_scale; break;
    case RadiusMode::Eq1: rec.radius = threshold_radius(cfg.n, cfg.d, cfg.p_norm, cfg.omega_value()) * cfg.radius_scale; break;
    case RadiusMode::Hitting:
      rec.r_hat = hitting_radius(points, cfg.p_norm, 2);
      rec.radius = *rec.r_hat * cfg.radius_scale;
      break;
  }
  const GeometricGraph graph = build_rgg(points, rec.radius, cfg.p_norm);
  const Palette palette = cfg.make_trial_palette();
  Rng color_rng = Rng(seed).split("colors");
  const EdgeColoring coloring = color_edges(graph, palette, color_rng);

  PipelineParams params = override_params ? *override_params : PipelineParams{};
  params.eta = cfg.eta;
  params.epsilon = cfg.epsilon;
  params.seed = seed;
  params.audit = params.audit || cfg.audit;
  if (cfg.dense_min) params.dense_min = cfg.dense_min;
  if (!(cfg.epsilon * rec.radius < 1.0)) {
    rec.diag.phase = Phase::Classify;
    rec.diag.reason = "GRID_TOO_COARSE";
    rec.diag.witness = "epsilon * r >= 1";
    return rec;
  }
  auto result = find_rainbow_hamilton(graph, coloring, palette, params);
  rec.diag = std::move(result.diag);
  if (result.success) {
    const auto report = verify_cycle(graph, coloring, result.cycle);
    if (report.passes()) {
      rec.success = true;
      rec.cycle = std::move(result.cycle);
    } else {
      rec.diag.phase = Phase::Verify;
      rec.diag.reason = "ORACLE_REJECTED";
    }
  }
  return rec;
}

inline constexpr const char* kCsvHeader =
    "n,d,p,eta,epsilon,omega,mode,seed,radius,r_hat,outcome,phase,q1_used,repair_stages,psi_overflows,claimA_max,"
    "claimB_max,ms_total";

inline std::string csv_row(const TrialRecord& r) {
  const auto& c = r.config;
  std::ostringstream os;
  os << c.n << ',' << c.d << ',' << format_norm(c.p_norm) << ',' << format_double(c.eta) << ','
     << format_double(c.epsilon) << ',' << format_double(c.omega_value()) << ',' << to_string(c.mode) << ',' << r.seed
     << ',' << format_double(r.radius) << ',' << (r.r_hat ? format_double(*r.r_hat) : "") << ','
     << (r.success ? "success" : "failure") << ',' << to_string(r.diag.phase) << ',' << r.diag.q1_used << ','
     << r.diag.splice.repair_stages << ',' << r.diag.psi_overflows << ',' << r.diag.claim_a_max << ','
     << r.diag.claim_b_max << ',' << format_double(r.diag.ms_total);
  return os.str();
}

inline nlohmann::json to_json(const TrialRecord& r) {
  const auto& c = r.config;
  nlohmann::json j;
  j["n"] = c.n;
  j["d"] = c.d;
  j["p"] = format_norm(c.p_norm);
  j["eta"] = c.eta;
  j["epsilon"] = c.epsilon;
  j["omega"] = c.omega_value();
  j["mode"] = to_string(c.mode);
  j["palette"] = to_string(c.palette);
  if (c.colors) j["colors"] = c.colors;
  j["seed"] = r.seed;
  j["radius"] = r.radius;
  j["r_hat"] = r.r_hat ? nlohmann::json(*r.r_hat) : nlohmann::json();
  j["outcome"] = r.success ? "success" : "failure";
  j["diagnostics"] = to_json(r.diag);
  return j;
}

enum class OutputFormat : std::uint8_t { Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("format must be csv or json");
}

/// One row per record; JSON rows are single-line objects (JSON Lines).
inline std::string format_row(const TrialRecord& r, OutputFormat f) {
  return f == OutputFormat::Csv ? csv_row(r) : to_json(r).dump();
}

/// Sub-seed of trial t at grid point g.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return combine_seeds(combine_seeds(master, point), trial);
}

/// Master seed from RRGG_SEED, or `fallback` when unset.
inline std::uint64_t master_seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("RRGG_SEED");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError("RRGG_SEED must be an unsigned integer");
  return v;
}

struct PointSummary {
  std::size_t point = 0;
  TrialConfig config;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_q1_used = 0.0;
  double mean_repair_stages = 0.0;
  double mean_psi_overflows = 0.0;
  double ms_p50 = 0.0;
  double ms_p90 = 0.0;

  [[nodiscard]] double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  [[nodiscard]] double std_error() const {
    return trials ? std::sqrt(rate() * (1.0 - rate()) / static_cast<double>(trials)) : 0.0;
  }
};

struct SweepResult {
  std::vector<TrialRecord> records;  // ordered by (point, trial)
  std::vector<PointSummary> points;
};

inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline std::vector<PointSummary> summarize(const std::vector<TrialConfig>& grid, const std::vector<TrialRecord>& rows,
                                           std::size_t trials) {
  std::vector<PointSummary> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto& s = out[g];
    s.point = g;
    s.config = grid[g];
    std::vector<double> ms;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& r = rows[g * trials + t];
      ++s.trials;
      s.successes += r.success ? 1 : 0;
      s.mean_q1_used += static_cast<double>(r.diag.q1_used);
      s.mean_repair_stages += static_cast<double>(r.diag.splice.repair_stages);
      s.mean_psi_overflows += static_cast<double>(r.diag.psi_overflows);
      ms.push_back(r.diag.ms_total);
    }
    if (s.trials) {
      const auto k = static_cast<double>(s.trials);
      s.mean_q1_used /= k;
      s.mean_repair_stages /= k;
      s.mean_psi_overflows /= k;
    }
    s.ms_p50 = quantile(ms, 0.5);
    s.ms_p90 = quantile(ms, 0.9);
  }
  return out;
}

/// Runs `trials` seeds at every grid point on `jobs` worker threads. Each
/// finished row goes to `sink` under a lock, so a crash leaves every row
/// written so far intact.
inline SweepResult sweep(const std::vector<TrialConfig>& grid, std::size_t trials, std::uint64_t master,
                         std::size_t jobs, const std::function<void(const TrialRecord&)>& sink = {},
                         const PipelineParams* params = nullptr) {
  for (const auto& c : grid) c.validate();
  const std::size_t total = grid.size() * trials;
  SweepResult out;
  out.records.resize(total);
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t g = job / trials;
      const std::size_t t = job % trials;
      PipelineParams local = params ? *params : PipelineParams{};
      TrialRecord rec = run_trial(grid[g], trial_seed(master, g, t), &local);
      rec.cycle.clear();
      rec.cycle.shrink_to_fit();
      std::lock_guard<std::mutex> guard(lock);
      if (sink) sink(rec);
      out.records[job] = std::move(rec);
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, total));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.points = summarize(grid, out.records, trials);
  return out;
}

struct HittingSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::vector<double> r_hat;
  std::vector<double> scaled;  // r_hat^d n / ln n
  double rate = 0.0;
  double ci_low = 0.0;  // Wilson 95%
  double ci_high = 0.0;
  double scaled_mean = 0.0;
  double scaled_sd = 0.0;
};

inline std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Builds G at exactly r_hat (minimum degree 2) with the strict palette
/// q = (1+eta) n and records the pipeline outcome per seed.
inline HittingSummary hitting_experiment(std::size_t n, int d, double p, double eta, double epsilon,
                                         std::size_t trials, std::uint64_t master, std::size_t jobs,
                                         const std::function<void(const TrialRecord&)>& sink = {}) {
  TrialConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.p_norm = p;
  cfg.eta = eta;
  cfg.epsilon = epsilon;
  cfg.mode = RadiusMode::Hitting;
  cfg.radius_scale = 1.0;
  cfg.palette = PaletteMode::Strict;
  const auto res = sweep({cfg}, trials, master, jobs, sink);
  HittingSummary s;
  s.n = n;
  s.trials = trials;
  const double ln_n = std::log(static_cast<double>(n));
  for (const auto& r : res.records) {
    s.successes += r.success ? 1 : 0;
    s.r_hat.push_back(*r.r_hat);
    s.scaled.push_back(std::pow(*r.r_hat, d) * static_cast<double>(n) / ln_n);
  }
  s.rate = trials ? static_cast<double>(s.successes) / static_cast<double>(trials) : 0.0;
  std::tie(s.ci_low, s.ci_high) = wilson_interval(s.successes, trials);
  if (!s.scaled.empty()) {
    double sum = 0.0;
    for (double x : s.scaled) sum += x;
    s.scaled_mean = sum / static_cast<double>(s.scaled.size());
    double ss = 0.0;
    for (double x : s.scaled) ss += (x - s.scaled_mean) * (x - s.scaled_mean);
    s.scaled_sd = s.scaled.size() > 1 ? std::sqrt(ss / static_cast<double>(s.scaled.size() - 1)) : 0.0;
  }
  return s;
}

}  // namespace rrgg
