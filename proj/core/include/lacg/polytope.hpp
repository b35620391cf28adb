#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lacg/layered_dag.hpp"
#include "lacg/objective.hpp"

namespace lacg {

inline constexpr double kMembershipTol = 1e-9;

/// Exact identity of a polytope vertex. Simplex: {i}; l1-ball: {i, sign};
/// Birkhoff: the permutation (row -> column); DAG flow: sorted edge indices.
struct VertexKey {
  std::vector<std::int64_t> code;

  friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& key) const noexcept;
};

std::string to_string(const VertexKey& key);

struct Vertex {
  Vector point;
  VertexKey key;
};

/// Linear minimization access to a polytope, plus the optional extras some
/// algorithms need (membership, affine-hull projection, vertex enumeration).
/// Implementations are stateless after construction.
class Polytope {
 public:
  virtual ~Polytope() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index dim() const = 0;

  /// argmin over vertices of <c, v>, ties broken deterministically.
  virtual Vertex lmo(const Vector& c) const = 0;

  virtual bool has_membership() const { return false; }
  /// nullopt when no membership test exists.
  virtual std::optional<bool> contains(const Vector& x, double tol = kMembershipTol) const;

  /// Orthogonal projection onto the direction space of the affine hull.
  virtual bool has_tangent_projection() const { return false; }
  virtual Vector project_tangent(const Vector& g) const;

  /// All vertices, or nullopt when there are more than `limit`.
  virtual std::optional<std::vector<Vertex>> enumerate_vertices(std::size_t limit) const;

  /// Deterministic starting vertex (the LMO answer for the zero cost).
  Vertex initial_vertex() const { return lmo(Vector::Zero(dim())); }
};

Vertex lmo_simplex(const Vector& c);
Vertex lmo_l1ball(const Vector& c, double tau);
/// c is an n*n cost matrix in row-major order.
Vertex lmo_birkhoff(const Vector& c);
Vertex lmo_dag_flow(const Vector& c, const LayeredDAG& graph);

bool membership_simplex(const Vector& x, double tol = kMembershipTol);
bool membership_l1ball(const Vector& x, double tau, double tol = kMembershipTol);
bool membership_birkhoff(const Vector& x, double tol = kMembershipTol);
bool membership_dag_flow(const Vector& x, const LayeredDAG& graph, double tol = kMembershipTol);

class ProbabilitySimplex final : public Polytope {
 public:
  explicit ProbabilitySimplex(Eigen::Index n);
  std::string name() const override { return "simplex"; }
  Eigen::Index dim() const override { return n_; }
  Vertex lmo(const Vector& c) const override;
  bool has_membership() const override { return true; }
  std::optional<bool> contains(const Vector& x, double tol) const override;
  bool has_tangent_projection() const override { return true; }
  Vector project_tangent(const Vector& g) const override;
  std::optional<std::vector<Vertex>> enumerate_vertices(std::size_t limit) const override;

 private:
  Eigen::Index n_;
};

class L1Ball final : public Polytope {
 public:
  L1Ball(Eigen::Index n, double tau);
  std::string name() const override { return "l1ball"; }
  Eigen::Index dim() const override { return n_; }
  double tau() const { return tau_; }
  Vertex lmo(const Vector& c) const override;
  bool has_membership() const override { return true; }
  std::optional<bool> contains(const Vector& x, double tol) const override;
  bool has_tangent_projection() const override { return true; }
  Vector project_tangent(const Vector& g) const override { return g; }
  std::optional<std::vector<Vertex>> enumerate_vertices(std::size_t limit) const override;

 private:
  Eigen::Index n_;
  double tau_;
};

/// Doubly stochastic n x n matrices, vectorized row-major (dimension n^2).
class BirkhoffPolytope final : public Polytope {
 public:
  explicit BirkhoffPolytope(int n);
  std::string name() const override { return "birkhoff"; }
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(n_) * n_; }
  int side() const { return n_; }
  Vertex lmo(const Vector& c) const override;
  bool has_membership() const override { return true; }
  std::optional<bool> contains(const Vector& x, double tol) const override;
  bool has_tangent_projection() const override { return true; }
  Vector project_tangent(const Vector& g) const override;
  std::optional<std::vector<Vertex>> enumerate_vertices(std::size_t limit) const override;

 private:
  int n_;
};

/// Unit source-sink flows on a DAG; vertices are source-sink paths.
class FlowPolytope final : public Polytope {
 public:
  explicit FlowPolytope(LayeredDAG graph);
  std::string name() const override { return "dag_flow"; }
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(graph_.edges.size()); }
  const LayeredDAG& graph() const { return graph_; }
  Vertex lmo(const Vector& c) const override;
  bool has_membership() const override { return true; }
  std::optional<bool> contains(const Vector& x, double tol) const override;
  std::optional<std::vector<Vertex>> enumerate_vertices(std::size_t limit) const override;

 private:
  LayeredDAG graph_;
  DagIndex index_;
};

}  // namespace lacg
