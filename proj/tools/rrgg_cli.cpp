// rrgg_cli: single trials, sweeps, hitting-radius experiments and cycle
// verification from the command line.
//
// Numeric flags of `sweep` accept comma-separated lists; the grid is their
// Cartesian product in flag order. A JSON file given with --config supplies
// any flag not set on the command line (keys are flag names without dashes).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrgg.hpp"

using namespace rrgg;

namespace {

struct Options {
  std::map<std::string, std::string> values;  // flag name -> raw text
  std::string config_path;
  std::string out_path;
  std::string graph_path;
  std::string cycle_path;
  std::string dump_prefix;
  bool audit = false;
};

const std::vector<std::string> kValueFlags = {"n",      "d",      "p-norm",  "eta",       "epsilon",      "omega",
                                              "radius-mode", "radius-scale", "radius", "palette", "colors",
                                              "dense-min", "seed", "trials", "jobs", "format"};

void add_common(CLI::App* app, Options& o) {
  for (const auto& name : kValueFlags) {
    app->add_option("--" + name, o.values[name]);
  }
  app->add_option("--config", o.config_path, "JSON file mirroring the flags");
  app->add_option("--out", o.out_path, "output file (default stdout)");
  app->add_flag("--audit", o.audit, "audit the cycle invariant after every splice");
}

std::string json_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_text(e);
    return s;
  }
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void merge_config(Options& o, CLI::App* app) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw ConfigError("cannot open config " + o.config_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "audit") {
      if (app->count("--audit") == 0) o.audit = val.get<bool>();
      continue;
    }
    if (key == "out") {
      if (o.out_path.empty()) o.out_path = val.get<std::string>();
      continue;
    }
    if (!o.values.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (app->count("--" + key) == 0) o.values[key] = json_text(val);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::uint64_t to_uint(const std::string& flag, const std::string& tok) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty() || tok[0] == '-') throw ConfigError("--" + flag + " expects an unsigned integer");
  return v;
}

double to_real(const std::string& flag, const std::string& tok) {
  try {
    return parse_double(tok);
  } catch (const ParseError&) {
    throw ConfigError("--" + flag + " expects a number");
  }
}

std::vector<std::string> list_of(const Options& o, const std::string& flag, const std::string& fallback) {
  const auto& raw = o.values.at(flag);
  auto items = split(raw.empty() ? fallback : raw);
  if (items.empty()) throw ConfigError("--" + flag + " is empty");
  return items;
}

// Expands the option lists into the experiment grid.
std::vector<TrialConfig> build_grid(const Options& o, bool allow_lists) {
  std::vector<TrialConfig> grid(1);
  auto expand = [&](const std::string& flag, const std::string& fallback, auto apply) {
    const auto items = list_of(o, flag, fallback);
    if (!allow_lists && items.size() > 1) throw ConfigError("--" + flag + " takes a single value here");
    std::vector<TrialConfig> next;
    for (const auto& base : grid) {
      for (const auto& tok : items) {
        TrialConfig c = base;
        apply(c, tok);
        next.push_back(c);
      }
    }
    grid = std::move(next);
  };
  expand("n", "1000", [&](TrialConfig& c, const std::string& t) { c.n = to_uint("n", t); });
  expand("d", "2", [&](TrialConfig& c, const std::string& t) { c.d = static_cast<int>(to_uint("d", t)); });
  expand("p-norm", "2", [&](TrialConfig& c, const std::string& t) { c.p_norm = to_real("p-norm", t); });
  expand("eta", "0.2", [&](TrialConfig& c, const std::string& t) { c.eta = to_real("eta", t); });
  expand("epsilon", "0.05", [&](TrialConfig& c, const std::string& t) { c.epsilon = to_real("epsilon", t); });
  expand("omega", "auto", [&](TrialConfig& c, const std::string& t) {
    if (t == "auto") {
      c.omega.reset();
    } else {
      c.omega = to_real("omega", t);
    }
  });
  expand("radius-mode", "eq1", [&](TrialConfig& c, const std::string& t) { c.mode = parse_radius_mode(t); });
  expand("radius-scale", "1", [&](TrialConfig& c, const std::string& t) { c.radius_scale = to_real("radius-scale", t); });
  expand("radius", "0", [&](TrialConfig& c, const std::string& t) { c.radius = to_real("radius", t); });
  expand("palette", "construction", [&](TrialConfig& c, const std::string& t) { c.palette = parse_palette_mode(t); });
  expand("colors", "0", [&](TrialConfig& c, const std::string& t) { c.colors = static_cast<Color>(to_uint("colors", t)); });
  expand("dense-min", "0", [&](TrialConfig& c, const std::string& t) { c.dense_min = to_uint("dense-min", t); });
  for (auto& c : grid) {
    // A fixed radius given without a mode means the caller wants it used.
    if (o.values.at("radius-mode").empty() && !o.values.at("radius").empty()) c.mode = RadiusMode::Fixed;
    c.audit = o.audit;
    c.validate();
  }
  return grid;
}

std::uint64_t master_seed(const Options& o) {
  const auto& s = o.values.at("seed");
  return s.empty() ? master_seed_from_env(1) : to_uint("seed", s);
}

std::size_t scalar(const Options& o, const std::string& flag, std::size_t fallback) {
  const auto& s = o.values.at(flag);
  return s.empty() ? fallback : to_uint(flag, s);
}

OutputFormat format_of(const Options& o) {
  const auto& s = o.values.at("format");
  return parse_format(s.empty() ? "csv" : s);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::app);
      if (!*file_) throw ConfigError("cannot open --out " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  // Header only for a fresh CSV target.
  [[nodiscard]] bool empty_target(const std::string& path) const {
    if (path.empty()) return true;
    std::ifstream probe(path, std::ios::ate);
    return !probe || probe.tellg() == 0;
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void dump_instance(const std::string& prefix, const TrialRecord& rec) {
  const auto& c = rec.config;
  const auto graph = build_rgg(sample_points(RggConfig{c.n, c.d, c.p_norm, rec.seed}), rec.radius, c.p_norm);
  Rng rng = Rng(rec.seed).split("colors");
  const auto col = color_edges(graph, c.make_trial_palette(), rng);
  {
    std::ofstream g(prefix + ".graph");
    write_graph(g, graph, rec.seed);
    write_coloring(g, graph, col);
  }
  if (c.epsilon * rec.radius < 1.0) {
    const CellGrid grid(graph.points(), rec.radius, c.epsilon);
    auto cells = build_cell_graph(grid, rec.radius, c.p_norm);
    classify_cells(grid, cells, graph, col, c.dense_min ? c.dense_min : default_dense_min(c.epsilon, c.n));
    std::ofstream k(prefix + ".cells");
    write_classification(k, grid, cells);
  }
  if (rec.success) {
    std::ofstream y(prefix + ".cycle");
    write_cycle(y, graph, col, rec.cycle);
  } else {
    std::ofstream f(prefix + ".failure.json");
    f << to_json(rec).dump(2) << '\n';
  }
}

int run_trial_cmd(const Options& o) {
  const auto grid = build_grid(o, false);
  const auto rec = run_trial(grid[0], master_seed(o));
  const auto fmt = format_of(o);
  Output out(o.out_path);
  if (fmt == OutputFormat::Csv && out.empty_target(o.out_path)) out.stream() << kCsvHeader << '\n';
  out.stream() << format_row(rec, fmt) << '\n';
  if (!o.dump_prefix.empty()) dump_instance(o.dump_prefix, rec);
  if (!rec.success) std::cerr << to_json(rec.diag).dump(2) << '\n';
  return rec.success ? 0 : 2;
}

int run_sweep_cmd(const Options& o) {
  const auto grid = build_grid(o, true);
  const auto fmt = format_of(o);
  Output out(o.out_path);
  if (fmt == OutputFormat::Csv && out.empty_target(o.out_path)) out.stream() << kCsvHeader << '\n';
  auto& os = out.stream();
  const auto res = sweep(grid, scalar(o, "trials", 10), master_seed(o), scalar(o, "jobs", 1), [&](const TrialRecord& r) {
    os << format_row(r, fmt) << '\n';
    os.flush();
  });
  for (const auto& p : res.points) {
    std::fprintf(stderr, "point %zu n=%zu mode=%s: %zu/%zu successes, p50 %.2f ms, p90 %.2f ms\n", p.point, p.config.n,
                 to_string(p.config.mode), p.successes, p.trials, p.ms_p50, p.ms_p90);
  }
  return 0;
}

int run_hitting_cmd(const Options& o) {
  auto grid = build_grid(o, true);
  const auto fmt = format_of(o);
  Output out(o.out_path);
  if (fmt == OutputFormat::Csv && out.empty_target(o.out_path)) out.stream() << kCsvHeader << '\n';
  auto& os = out.stream();
  const auto master = master_seed(o);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& c = grid[g];
    const auto s = hitting_experiment(c.n, c.d, c.p_norm, c.eta, c.epsilon, scalar(o, "trials", 10),
                                      combine_seeds(master, g), scalar(o, "jobs", 1), [&](const TrialRecord& r) {
                                        os << format_row(r, fmt) << '\n';
                                        os.flush();
                                      });
    std::fprintf(stderr, "n=%zu: %zu/%zu successes, 95%% CI [%.3f, %.3f], r_hat^d n/ln n mean %.4f sd %.4f\n", s.n,
                 s.successes, s.trials, s.ci_low, s.ci_high, s.scaled_mean, s.scaled_sd);
  }
  return 0;
}

int run_verify_cmd(const Options& o) {
  std::ifstream gin(o.graph_path);
  if (!gin) throw ConfigError("cannot open " + o.graph_path);
  const auto dump = read_graph_dump(gin);
  if (!dump.coloring) throw ParseError("graph dump carries no coloring");
  std::ifstream cin_(o.cycle_path);
  if (!cin_) throw ConfigError("cannot open " + o.cycle_path);
  const auto cycle = read_cycle(cin_);
  const auto rep = verify_cycle(dump.graph, *dump.coloring, cycle);
  Output out(o.out_path);
  out.stream() << to_json(rep).dump(2) << '\n';
  return rep.passes() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rainbow Hamilton cycles in randomly coloured random geometric graphs"};
  app.require_subcommand(1);
  Options trial_o, sweep_o, hitting_o, verify_o;

  auto* trial = app.add_subcommand("trial", "run one seeded trial");
  add_common(trial, trial_o);
  trial->add_option("--dump", trial_o.dump_prefix, "write PREFIX.graph, .cells, .cycle or .failure.json");

  auto* sw = app.add_subcommand("sweep", "run a grid of configurations");
  add_common(sw, sweep_o);

  auto* hit = app.add_subcommand("hitting", "run at the hitting radius with the strict palette");
  add_common(hit, hitting_o);

  auto* ver = app.add_subcommand("verify", "check a cycle against a graph+coloring dump");
  ver->add_option("graph", verify_o.graph_path, "graph dump with coloring")->required();
  ver->add_option("cycle", verify_o.cycle_path, "cycle file (u v color lines)")->required();
  ver->add_option("--out", verify_o.out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*trial) {
      merge_config(trial_o, trial);
      return run_trial_cmd(trial_o);
    }
    if (*sw) {
      merge_config(sweep_o, sw);
      return run_sweep_cmd(sweep_o);
    }
    if (*hit) {
      merge_config(hitting_o, hit);
      return run_hitting_cmd(hitting_o);
    }
    return run_verify_cmd(verify_o);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
}
