#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/oracle.hpp"
#include "rrgg/pipeline.hpp"

namespace rrgg {

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& tok) {
  if (tok == "inf" || tok == "Inf" || tok == "INF") return kInfNorm;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("not a number: '" + tok + "'");
  return x;
}

/// Header `n d p radius seed`, n point lines, then one `i j` line per edge.
inline void write_graph(std::ostream& os, const GeometricGraph& g, std::uint64_t seed) {
  os << g.num_vertices() << ' ' << g.dim() << ' ' << format_norm(g.p_norm()) << ' ' << format_double(g.radius())
     << ' ' << seed << '\n';
  for (std::size_t i = 0; i < g.num_vertices(); ++i) {
    const auto x = g.points()[i];
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? " " : "") << format_double(x[k]);
    os << '\n';
  }
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

/// One `i j color` line per edge; meant to follow write_graph in the same file.
inline void write_coloring(std::ostream& os, const GeometricGraph& g, const EdgeColoring& col) {
  for (EdgeId id = 0; id < g.num_edges(); ++id) os << g.edge(id).u << ' ' << g.edge(id).v << ' ' << col[id] << '\n';
}

/// One line per nonempty cell: `i_1 ... i_d class point_count`.
inline void write_classification(std::ostream& os, const CellGrid& grid, const CellGraph& cg) {
  for (CellId c = 0; c < grid.num_cells(); ++c) {
    for (long i : grid.index_of(c)) os << i << ' ';
    os << to_string(cg.cls[c]) << ' ' << grid.points_of(c).size() << '\n';
  }
}

/// One `u v color` line per cycle edge, in cycle order.
inline void write_cycle(std::ostream& os, const GeometricGraph& g, const EdgeColoring& col,
                        std::span<const Vertex> cycle) {
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vertex u = cycle[i];
    const Vertex v = cycle[(i + 1) % cycle.size()];
    os << u << ' ' << v << ' ' << edge_color(g, col, u, v) << '\n';
  }
}

struct GraphDump {
  std::uint64_t seed = 0;
  GeometricGraph graph;
  std::optional<EdgeColoring> coloring;
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::uint64_t parse_uint(const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("not an unsigned integer: '" + tok + "'");
  }
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw ParseError("integer out of range: '" + tok + "'");
  }
}

// Next line that is neither blank nor a '#' comment.
inline bool next_line(std::istream& is, std::vector<std::string>& toks, std::size_t& lineno) {
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    toks = tokens(line);
    if (!toks.empty() && toks.front().front() != '#') return true;
  }
  return false;
}

}  // namespace detail

/// Reads a graph dump, optionally followed by coloring lines. Edge lines may
/// be `i j`, `i j color`, or both kinds; colours must cover every edge or none.
inline GraphDump read_graph_dump(std::istream& is) {
  std::vector<std::string> t;
  std::size_t lineno = 0;
  auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
  if (!detail::next_line(is, t, lineno)) throw ParseError("empty dump");
  if (t.size() != 5) throw ParseError("header must be `n d p radius seed`" + where());
  const auto n = detail::parse_uint(t[0]);
  const auto d = detail::parse_uint(t[1]);
  const double p = parse_double(t[2]);
  const double radius = parse_double(t[3]);
  GraphDump dump;
  dump.seed = detail::parse_uint(t[4]);
  if (d < 1 || d > 64) throw ParseError("bad dimension" + where());

  std::vector<double> coords;
  coords.reserve(n * d);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!detail::next_line(is, t, lineno)) throw ParseError("missing point lines");
    if (t.size() != d) throw ParseError("point needs " + std::to_string(d) + " coordinates" + where());
    for (const auto& tok : t) coords.push_back(parse_double(tok));
  }

  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, Color> colors;
  auto key = [](Vertex a, Vertex b) { return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b); };
  while (detail::next_line(is, t, lineno)) {
    if (t.size() != 2 && t.size() != 3) throw ParseError("edge line must be `i j` or `i j color`" + where());
    const auto a = detail::parse_uint(t[0]);
    const auto b = detail::parse_uint(t[1]);
    if (a >= n || b >= n || a == b) throw ParseError("bad edge endpoints" + where());
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    if (t.size() == 3) {
      const auto c = detail::parse_uint(t[2]);
      if (c == 0 || c > std::numeric_limits<Color>::max()) throw ParseError("colour out of range" + where());
      colors[key(static_cast<Vertex>(a), static_cast<Vertex>(b))] = static_cast<Color>(c);
    }
  }
  try {
    dump.graph = GeometricGraph(PointSet(static_cast<int>(d), std::move(coords)), radius, p, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
  if (!colors.empty()) {
    std::vector<Color> per_edge;
    Color m = 0;
    for (const Edge& e : dump.graph.edges()) {
      const auto it = colors.find(key(e.u, e.v));
      if (it == colors.end()) throw ParseError("edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " has no colour");
      per_edge.push_back(it->second);
      m = std::max(m, it->second);
    }
    dump.coloring = EdgeColoring(m, std::move(per_edge));
  }
  return dump;
}

/// Reads `u v color` lines (the colour column is informational) into a
/// vertex sequence; consecutive lines must chain.
inline std::vector<Vertex> read_cycle(std::istream& is) {
  std::vector<Vertex> seq;
  std::vector<std::string> t;
  std::size_t lineno = 0;
  Vertex expect = kNoVertex;
  while (detail::next_line(is, t, lineno)) {
    if (t.size() != 2 && t.size() != 3) throw ParseError("cycle line must be `u v color`");
    const auto u = static_cast<Vertex>(detail::parse_uint(t[0]));
    const auto v = static_cast<Vertex>(detail::parse_uint(t[1]));
    if (expect != kNoVertex && u != expect) {
      throw ParseError("cycle lines do not chain at line " + std::to_string(lineno));
    }
    seq.push_back(u);
    expect = v;
  }
  if (!seq.empty() && expect != seq.front()) throw ParseError("cycle does not close");
  return seq;
}

inline nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["passes"] = rep.passes();
  j["is_hamiltonian"] = rep.is_hamiltonian;
  j["is_rainbow"] = rep.is_rainbow;
  j["missing_vertices"] = rep.missing_vertices;
  j["repeated_vertices"] = rep.repeated_vertices;
  j["invalid_vertices"] = rep.invalid_vertices;
  j["non_edges"] = nlohmann::json::array();
  for (const auto& [a, b] : rep.non_edges) j["non_edges"].push_back({a, b});
  j["duplicate_colors"] = nlohmann::json::array();
  for (const auto& dc : rep.duplicate_colors) {
    j["duplicate_colors"].push_back(
        {{"color", dc.color}, {"first", {dc.first.u, dc.first.v}}, {"second", {dc.second.u, dc.second.v}}});
  }
  return j;
}

inline nlohmann::json to_json(const PropertyReport& rep) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& c : rep.checks) {
    nlohmann::json e{{"pass", c.pass}, {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(format_double(c.value))},
                     {"bound", c.bound}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    j[c.name] = e;
  }
  return j;
}

/// Structured failure (or success) record of one pipeline run.
inline nlohmann::json to_json(const Diagnostics& d) {
  nlohmann::json j;
  j["phase"] = to_string(d.phase);
  j["reason"] = d.reason;
  if (!d.witness.empty()) j["witness"] = d.witness;
  j["cells"] = {{"total", d.num_cells}, {"good", d.good_cells},       {"bad", d.bad_cells},
                {"ugly", d.ugly_cells}, {"demoted", d.demoted_cells}, {"dense_min", d.dense_min}};
  j["cover"] = {{"paths", d.cover_paths}, {"vertices", d.cover_vertices}};
  j["b1_size"] = d.b1_size;
  j["counters"] = {{"cell_cycles", d.cell_cycles},
                   {"cover_cells", d.cover_cells},
                   {"psi_max", d.psi_max},
                   {"psi_overflows", d.psi_overflows},
                   {"reseeds", d.reseeds},
                   {"walecki_cells", d.walecki_cells},
                   {"patches", d.splice.patches},
                   {"patch_failures", d.splice.patch_failures},
                   {"absorptions", d.splice.absorptions},
                   {"absorb_fallbacks", d.splice.absorb_fallbacks},
                   {"repair_invocations", d.splice.repair_invocations},
                   {"repair_stages", d.splice.repair_stages},
                   {"repair_max_stages", d.splice.repair_max_stages},
                   {"duplicates_nonincreasing", d.splice.duplicates_nonincreasing},
                   {"good_phase_b1_hits", d.good_b1_hits},
                   {"q1_used", d.q1_used},
                   {"q1_size", d.q1_size},
                   {"claimA_max", d.claim_a_max},
                   {"claimB_max", d.claim_b_max},
                   {"audits", d.audits}};
  j["properties"] = to_json(d.properties);
  j["timings_ms"] = nlohmann::json::object();
  for (const auto& [name, ms] : d.timings_ms) j["timings_ms"][name] = ms;
  j["ms_total"] = d.ms_total;
  return j;
}

}  // namespace rrgg
