#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rrgg/errors.hpp"
#include "rrgg/rng.hpp"

namespace rrgg {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Unordered vertex pair, normalized so that u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct RggConfig {
  std::size_t n = 0;
  int d = 2;
  double p_norm = 2.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n == 0) throw ConfigError("n must be at least 1");
    if (d < 2) throw ConfigError("dimension d must be at least 2");
    if (!(p_norm > 1.0)) throw ConfigError("p_norm must satisfy 1 < p <= inf");
  }
};

/// Points of [0,1]^d stored row-major.
class PointSet {
 public:
  PointSet() = default;

  PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ < 1) throw UsageError("PointSet dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0) {
      throw UsageError("coordinate count is not a multiple of the dimension");
    }
    for (double c : coords_) {
      if (!(c >= 0.0 && c <= 1.0)) throw UsageError("coordinate outside [0,1]");
    }
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept {
    return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_);
  }
  [[nodiscard]] std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

inline PointSet sample_points(const RggConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<double> coords(cfg.n * static_cast<std::size_t>(cfg.d));
  for (double& c : coords) c = rng.uniform();
  return PointSet(cfg.d, std::move(coords));
}

inline PointSet sample_points(const RggConfig& cfg) {
  Rng rng = Rng(cfg.seed).split("points");
  return sample_points(cfg, rng);
}

/// For finite p: sum |x_k - y_k|^p. For p = inf: max |x_k - y_k|.
inline double lp_power_sum(std::span<const double> x, std::span<const double> y, double p) {
  double acc = 0.0;
  if (std::isinf(p)) {
    for (std::size_t k = 0; k < x.size(); ++k) acc = std::max(acc, std::abs(x[k] - y[k]));
  } else if (p == 2.0) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double t = x[k] - y[k];
      acc += t * t;
    }
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::pow(std::abs(x[k] - y[k]), p);
  }
  return acc;
}

inline double lp_distance(std::span<const double> x, std::span<const double> y, double p) {
  if (x.size() != y.size()) throw UsageError("lp_distance: dimension mismatch");
  const double s = lp_power_sum(x, y, p);
  if (std::isinf(p)) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

/// Closed-ball membership |x - y|_p <= r. Decided on p-th powers away from
/// the threshold; inside a narrow band around it the true distance decides,
/// so the predicate agrees exactly with lp_distance(x, y, p) <= r.
class WithinRadius {
 public:
  WithinRadius(double radius, double p) : radius_(radius), p_(p) {
    if (std::isinf(p_)) {
      threshold_ = radius_;
    } else {
      threshold_ = p_ == 2.0 ? radius_ * radius_ : std::pow(radius_, p_);
    }
    lo_ = threshold_ * (1.0 - 1e-9);
    hi_ = threshold_ * (1.0 + 1e-9);
  }

  bool operator()(std::span<const double> x, std::span<const double> y) const {
    const double s = lp_power_sum(x, y, p_);
    if (std::isinf(p_)) return s <= radius_;
    if (s < lo_) return true;
    if (s > hi_) return false;
    return lp_distance(x, y, p_) <= radius_;
  }

 private:
  double radius_;
  double p_;
  double threshold_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// theta(d, p): volume of the unit l_p ball in R^d.
inline double unit_ball_volume(int d, double p) {
  if (d < 1) throw DomainError("unit_ball_volume: d must be positive");
  if (std::isinf(p)) return std::pow(2.0, d);
  if (!(p > 0.0)) throw DomainError("unit_ball_volume: p must be positive");
  const double log_vol = d * (std::numbers::ln2 + std::lgamma(1.0 + 1.0 / p)) -
                         std::lgamma(1.0 + static_cast<double>(d) / p);
  return std::exp(log_vol);
}

/// Connectivity-scale radius:
///   r^d = ((2/d) ln n + (4 - d - 2/d) ln ln n + omega) / (2^(2-d) theta n).
inline double threshold_radius(std::size_t n, int d, double p, double omega) {
  if (n < 3) throw DomainError("threshold_radius: n must be at least 3");
  if (d < 1) throw DomainError("threshold_radius: d must be positive");
  const double dd = static_cast<double>(d);
  const double ln_n = std::log(static_cast<double>(n));
  const double numerator = (2.0 / dd) * ln_n + (4.0 - dd - 2.0 / dd) * std::log(ln_n) + omega;
  if (!(numerator > 0.0)) throw DomainError("threshold_radius: nonpositive numerator");
  const double denominator = std::pow(2.0, 2.0 - dd) * unit_ball_volume(d, p) * static_cast<double>(n);
  return std::pow(numerator / denominator, 1.0 / dd);
}

/// ln ln ln n clamped at zero (and zero where undefined).
inline double default_omega(std::size_t n) {
  const double ln_n = std::log(static_cast<double>(n));
  if (ln_n <= 1.0) return 0.0;
  const double lll = std::log(std::log(ln_n));
  return std::isfinite(lll) && lll > 0.0 ? lll : 0.0;
}

/// Simple graph over a point set with CSR adjacency. Neighbor lists are
/// sorted ascending; edges are sorted lexicographically and indexed by EdgeId.
class GeometricGraph {
 public:
  GeometricGraph() = default;

  /// Builds the adjacency from an explicit edge list (deduplicated, loops rejected).
  GeometricGraph(PointSet points, double radius, double p_norm, std::vector<Edge> edges)
      : points_(std::move(points)), radius_(radius), p_norm_(p_norm), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    const std::size_t n = points_.size();
    for (const Edge& e : edges_) {
      if (e.u == e.v) throw UsageError("self-loop in edge list");
      if (e.v >= n) throw UsageError("edge endpoint out of range");
    }
    if (edges_.size() >= std::numeric_limits<EdgeId>::max()) throw CapacityError("too many edges");
    offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    neighbors_.resize(offsets_[n]);
    incident_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Lexicographic edge order makes every neighbor list come out sorted.
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const Edge& e = edges_[id];
      neighbors_[fill[e.u]] = e.v;
      incident_[fill[e.u]++] = id;
      neighbors_[fill[e.v]] = e.u;
      incident_[fill[e.v]++] = id;
    }
  }

  [[nodiscard]] const PointSet& points() const noexcept { return points_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] double p_norm() const noexcept { return p_norm_; }
  [[nodiscard]] int dim() const noexcept { return points_.dim(); }
  [[nodiscard]] std::size_t num_vertices() const noexcept { return points_.size(); }
  [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId id) const { return edges_[id]; }

  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  [[nodiscard]] std::span<const EdgeId> incident_edges(Vertex v) const {
    return {incident_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  [[nodiscard]] std::optional<EdgeId> find_edge(Vertex a, Vertex b) const {
    if (a >= num_vertices() || b >= num_vertices() || a == b) return std::nullopt;
    if (degree(a) > degree(b)) std::swap(a, b);
    const auto nb = neighbors(a);
    const auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return std::nullopt;
    return incident_[offsets_[a] + static_cast<std::size_t>(it - nb.begin())];
  }
  [[nodiscard]] bool has_edge(Vertex a, Vertex b) const { return find_edge(a, b).has_value(); }

  [[nodiscard]] std::size_t min_degree() const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Vertex v = 0; v < num_vertices(); ++v) best = std::min(best, degree(v));
    return num_vertices() == 0 ? 0 : best;
  }
  [[nodiscard]] std::size_t max_degree() const {
    std::size_t best = 0;
    for (Vertex v = 0; v < num_vertices(); ++v) best = std::max(best, degree(v));
    return best;
  }

 private:
  PointSet points_;
  double radius_ = 0.0;
  double p_norm_ = 2.0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
  std::vector<EdgeId> incident_;
};

namespace detail {

/// Uniform bucket grid over [0,1]^d with `per_axis` buckets per axis.
class BucketGrid {
 public:
  BucketGrid(const PointSet& points, std::size_t per_axis)
      : dim_(points.dim()), per_axis_(std::max<std::size_t>(1, per_axis)) {
    total_ = 1;
    for (int k = 0; k < dim_; ++k) total_ *= per_axis_;
    const std::size_t n = points.size();
    home_.resize(n);
    start_.assign(total_ + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      home_[i] = bucket_of(points[i]);
      ++start_[home_[i] + 1];
    }
    for (std::size_t b = 0; b < total_; ++b) start_[b + 1] += start_[b];
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[home_[i]]++] = static_cast<Vertex>(i);
  }

  [[nodiscard]] std::size_t per_axis() const noexcept { return per_axis_; }
  [[nodiscard]] double side() const noexcept { return 1.0 / static_cast<double>(per_axis_); }
  [[nodiscard]] std::size_t home(std::size_t i) const { return home_[i]; }

  [[nodiscard]] std::span<const Vertex> members(std::size_t bucket) const {
    return {members_.data() + start_[bucket], start_[bucket + 1] - start_[bucket]};
  }

  [[nodiscard]] std::vector<long> coords_of(std::size_t bucket) const {
    std::vector<long> c(static_cast<std::size_t>(dim_));
    for (int k = dim_ - 1; k >= 0; --k) {
      c[static_cast<std::size_t>(k)] = static_cast<long>(bucket % per_axis_);
      bucket /= per_axis_;
    }
    return c;
  }

  /// Calls f(bucket) for every in-range bucket whose Chebyshev offset from
  /// `center` is exactly `ring` (ring 0 is the center itself).
  template <typename F>
  void for_each_in_ring(const std::vector<long>& center, long ring, F&& f) const {
    std::vector<long> off(static_cast<std::size_t>(dim_), -ring);
    const long axis = static_cast<long>(per_axis_);
    while (true) {
      bool on_shell = ring == 0;
      bool in_range = true;
      std::size_t flat = 0;
      for (int k = 0; k < dim_; ++k) {
        const long o = off[static_cast<std::size_t>(k)];
        if (o == ring || o == -ring) on_shell = true;
        const long c = center[static_cast<std::size_t>(k)] + o;
        if (c < 0 || c >= axis) in_range = false;
        flat = flat * per_axis_ + static_cast<std::size_t>(std::max(0L, c));
      }
      if (on_shell && in_range) f(flat);
      int k = dim_ - 1;
      while (k >= 0 && off[static_cast<std::size_t>(k)] == ring) {
        off[static_cast<std::size_t>(k)] = -ring;
        --k;
      }
      if (k < 0) break;
      ++off[static_cast<std::size_t>(k)];
    }
  }

 private:
  [[nodiscard]] std::size_t bucket_of(std::span<const double> x) const {
    std::size_t flat = 0;
    for (int k = 0; k < dim_; ++k) {
      auto c = static_cast<std::size_t>(x[static_cast<std::size_t>(k)] * static_cast<double>(per_axis_));
      c = std::min(c, per_axis_ - 1);
      flat = flat * per_axis_ + c;
    }
    return flat;
  }

  int dim_;
  std::size_t per_axis_;
  std::size_t total_ = 1;
  std::vector<std::size_t> home_;
  std::vector<std::size_t> start_;
  std::vector<Vertex> members_;
};

inline std::size_t axis_cap_for(std::size_t n, int d) {
  // Keep roughly one to two points per bucket at most.
  const double cap = std::floor(std::pow(2.0 * static_cast<double>(std::max<std::size_t>(n, 1)), 1.0 / d));
  return std::max<std::size_t>(1, static_cast<std::size_t>(cap));
}

}  // namespace detail

/// Random geometric graph with the closed condition |X_i - X_j|_p <= radius.
/// Candidate pairs come from buckets of side >= radius, so only neighboring
/// buckets are scanned.
inline GeometricGraph build_rgg(const PointSet& points, double radius, double p_norm) {
  if (!(radius >= 0.0)) throw UsageError("build_rgg: radius must be nonnegative");
  const std::size_t n = points.size();
  const int d = points.dim();
  std::size_t per_axis = detail::axis_cap_for(n, d);
  if (radius > 0.0) {
    const double fit = std::floor(1.0 / radius);
    if (fit < static_cast<double>(per_axis)) per_axis = std::max<std::size_t>(1, static_cast<std::size_t>(fit));
  }
  const detail::BucketGrid grid(points, per_axis);
  const WithinRadius within(radius, p_norm);

  std::vector<Edge> edges;
  std::vector<Vertex> local;
  for (std::size_t i = 0; i < n; ++i) {
    local.clear();
    const auto center = grid.coords_of(grid.home(i));
    grid.for_each_in_ring(center, 1, [&](std::size_t b) {
      for (Vertex j : grid.members(b)) {
        if (j > i && within(points[i], points[j])) local.push_back(j);
      }
    });
    for (Vertex j : grid.members(grid.home(i))) {
      if (j > i && within(points[i], points[j])) local.push_back(j);
    }
    std::sort(local.begin(), local.end());
    for (Vertex j : local) edges.emplace_back(static_cast<Vertex>(i), j);
  }
  return GeometricGraph(points, radius, p_norm, std::move(edges));
}

/// Distance from every point to its k-th nearest other point.
inline std::vector<double> kth_neighbor_distances(const PointSet& points, double p_norm, std::size_t k) {
  const std::size_t n = points.size();
  if (k == 0) throw DomainError("kth_neighbor_distances: k must be positive");
  if (n <= k) throw DomainError("kth_neighbor_distances: need more than k points");
  const std::size_t per_axis = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n) / 2.0, 1.0 / points.dim()))));
  const detail::BucketGrid grid(points, per_axis);
  const double side = grid.side();

  std::vector<double> out(n);
  std::vector<double> best;  // ascending, at most k entries
  for (std::size_t i = 0; i < n; ++i) {
    best.clear();
    const auto center = grid.coords_of(grid.home(i));
    for (long ring = 0;; ++ring) {
      grid.for_each_in_ring(center, ring, [&](std::size_t b) {
        for (Vertex j : grid.members(b)) {
          if (j == i) continue;
          const double dist = lp_distance(points[i], points[j], p_norm);
          if (best.size() < k || dist < best.back()) {
            best.insert(std::upper_bound(best.begin(), best.end(), dist), dist);
            if (best.size() > k) best.pop_back();
          }
        }
      });
      // Unscanned points differ from x_i by at least ring * side in some coordinate.
      if (best.size() == k && best.back() <= static_cast<double>(ring) * side) break;
      if (static_cast<std::size_t>(ring) >= grid.per_axis()) break;
    }
    out[i] = best.back();
  }
  return out;
}

/// Smallest radius at which the graph has minimum degree >= k.
inline double hitting_radius(const PointSet& points, double p_norm, std::size_t k = 2) {
  if (points.size() <= k) throw DomainError("hitting_radius: need n > k");
  const auto dist = kth_neighbor_distances(points, p_norm, k);
  return *std::max_element(dist.begin(), dist.end());
}

inline std::string format_norm(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p;
  return os.str();
}

}  // namespace rrgg
