// Builds one instance in the dense regime, finds a rainbow Hamilton cycle and
// prints it with the per-phase timings.

#include <cmath>
#include <cstdio>
#include <iostream>

#include "rrgg.hpp"

int main() {
  using namespace rrgg;
  const std::size_t n = 400;
  const double r = std::sqrt(200.0 / n);
  const auto graph = build_rgg(sample_points(RggConfig{n, 2, 2.0, 42}), r, 2.0);
  const auto palette = make_palette_with_total(n, 200 * n, 20 * n);
  Rng rng = Rng(42).split("colors");
  const auto coloring = color_edges(graph, palette, rng);

  PipelineParams params;
  params.epsilon = 0.2;
  params.seed = 42;
  const auto res = find_rainbow_hamilton(graph, coloring, palette, params);
  std::printf("n=%zu edges=%zu min degree=%zu\n", n, graph.num_edges(), graph.min_degree());
  if (!res.success) {
    std::cout << to_json(res.diag).dump(2) << '\n';
    return 1;
  }
  std::printf("cycle found, verifier says %s, %zu Q1 colours used\n",
              verify_cycle(graph, coloring, res.cycle).passes() ? "ok" : "BROKEN", res.diag.q1_used);
  for (const auto& [phase, ms] : res.diag.timings_ms) std::printf("  %-10s %8.2f ms\n", phase.c_str(), ms);
  for (std::size_t i = 0; i < 10 && i < res.cycle.size(); ++i) {
    const Vertex u = res.cycle[i], v = res.cycle[(i + 1) % n];
    std::printf("%u %u %u\n", static_cast<unsigned>(u), static_cast<unsigned>(v),
                static_cast<unsigned>(edge_color(graph, coloring, u, v)));
  }
  std::printf("...\n");
  return 0;
}
