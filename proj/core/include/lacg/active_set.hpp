#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lacg/polytope.hpp"

namespace lacg {

/// Weights at or below this are treated as zero and their vertex removed.
inline constexpr double kPruneThreshold = 1e-12;

/// A point stored as a convex combination of distinct polytope vertices.
/// Invariants: weights >= 0 and sum to one, every stored vertex has positive
/// weight, keys are distinct, and point == sum_i weight_i * vertex_i.
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(Vertex start);

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const Vector& point() const { return point_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<double>& weights() const { return weights_; }

  std::optional<std::size_t> find(const VertexKey& key) const;
  bool contains(const VertexKey& key) const { return find(key).has_value(); }

  /// x <- (1 - gamma) x + gamma s.
  void move_toward(const Vertex& s, double gamma);
  /// x <- (1 + gamma) x - gamma v_i (v_i already active).
  void move_away(std::size_t i, double gamma);
  /// Moves gamma of weight from active vertex `from` to vertex s.
  void transfer(std::size_t from, const Vertex& s, double gamma);

  /// Replaces the contents with explicit weights (pruned and renormalized).
  void assign(std::vector<Vertex> vertices, std::vector<double> weights);

  /// Empty string when every invariant holds, otherwise a description.
  std::string check_invariants(double tol = 1e-9) const;

  /// Rebuilds point from the weights.
  void refresh_point();

 private:
  std::size_t add_or_find(const Vertex& s);
  /// Drops weights <= kPruneThreshold, renormalizes, and refreshes the point
  /// when anything was removed.
  void prune();

  std::vector<Vertex> vertices_;
  std::vector<double> weights_;
  Vector point_;
  int updates_since_refresh_ = 0;
};

}  // namespace lacg
