#pragma once

#include <cstddef>
#include <vector>

namespace rrgg {

/// floor((k-1)/2) pairwise edge-disjoint Hamilton cycles of K_k on local
/// labels 0..k-1 (round-robin construction). Odd k = 2m+1: hub 2m plus
/// the zigzag i, i+1, i-1, i+2, ... on Z_2m. Even k = 2m+2: hub 2m+1 plus
/// the full zigzag on Z_{2m+1}.
inline std::vector<std::vector<std::size_t>> walecki_cycles(std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k < 3) return out;
  const std::size_t m = (k - 1) / 2;
  const std::size_t ring = k - 1;  // zigzag modulus; the hub is label k-1
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> cyc{k - 1, i};
    for (std::size_t t = 1; cyc.size() < k; ++t) {
      cyc.push_back((i + t) % ring);
      if (cyc.size() < k) cyc.push_back((i + ring - t % ring) % ring);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

}  // namespace rrgg
