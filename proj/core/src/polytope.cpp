#include "lacg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lacg/hungarian.hpp"

namespace lacg {

std::size_t VertexKeyHash::operator()(const VertexKey& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto c : key.code) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string to_string(const VertexKey& key) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < key.code.size(); ++i) {
    if (i) out << ',';
    out << key.code[i];
  }
  out << ')';
  return out.str();
}

std::optional<bool> Polytope::contains(const Vector&, double) const { return std::nullopt; }

Vector Polytope::project_tangent(const Vector&) const {
  throw std::logic_error(name() + ": affine hull projection is not available");
}

std::optional<std::vector<Vertex>> Polytope::enumerate_vertices(std::size_t) const {
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free-standing oracles

Vertex lmo_simplex(const Vector& c) {
  if (c.size() < 1) throw std::invalid_argument("lmo_simplex: empty cost");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (c[i] < c[best]) best = i;
  Vertex v{Vector::Zero(c.size()), VertexKey{{best}}};
  v.point[best] = 1.0;
  return v;
}

Vertex lmo_l1ball(const Vector& c, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("lmo_l1ball: tau must be positive");
  if (c.size() < 1) throw std::invalid_argument("lmo_l1ball: empty cost");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[best])) best = i;
  const double sign = c[best] >= 0.0 ? -1.0 : 1.0;
  Vertex v{Vector::Zero(c.size()), VertexKey{{best, sign > 0 ? 1 : -1}}};
  v.point[best] = sign * tau;
  return v;
}

namespace {

int birkhoff_side(Eigen::Index dim) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(dim))));
  if (n < 1 || n * n != dim) {
    throw std::invalid_argument("Birkhoff polytope: dimension " + std::to_string(dim) +
                                " is not a perfect square");
  }
  return static_cast<int>(n);
}

Vertex permutation_vertex(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Vertex v{Vector::Zero(n * n), VertexKey{}};
  v.key.code.reserve(perm.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    v.point[r * n + perm[r]] = 1.0;
    v.key.code.push_back(perm[r]);
  }
  return v;
}

Vertex path_vertex(const std::vector<int>& edges, Eigen::Index dim) {
  Vertex v{Vector::Zero(dim), VertexKey{}};
  v.key.code.reserve(edges.size());
  for (int e : edges) {
    v.point[e] = 1.0;
    v.key.code.push_back(e);
  }
  return v;
}

}  // namespace

Vertex lmo_birkhoff(const Vector& c) {
  const int n = birkhoff_side(c.size());
  const Eigen::MatrixXd cost =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          c.data(), n, n);
  return permutation_vertex(min_cost_assignment(cost));
}

Vertex lmo_dag_flow(const Vector& c, const LayeredDAG& graph) {
  const auto index = DagIndex::build(graph);
  return path_vertex(shortest_path_edges(graph, index, c), c.size());
}

bool membership_simplex(const Vector& x, double tol) {
  if (x.size() == 0) return false;
  if (!x.allFinite()) return false;
  return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

bool membership_l1ball(const Vector& x, double tau, double tol) {
  return x.allFinite() && x.lpNorm<1>() <= tau + tol;
}

bool membership_birkhoff(const Vector& x, double tol) {
  const int n = birkhoff_side(x.size());
  if (!x.allFinite() || x.minCoeff() < -tol) return false;
  const auto m =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          x.data(), n, n);
  const Vector rows = m.rowwise().sum();
  const Vector cols = m.colwise().sum().transpose();
  return (rows.array() - 1.0).abs().maxCoeff() <= tol &&
         (cols.array() - 1.0).abs().maxCoeff() <= tol;
}

bool membership_dag_flow(const Vector& x, const LayeredDAG& graph, double tol) {
  if (x.size() != static_cast<Eigen::Index>(graph.edges.size())) return false;
  if (!x.allFinite() || x.minCoeff() < -tol) return false;
  std::vector<double> net(graph.num_nodes, 0.0);  // outflow - inflow
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    net[graph.edges[e].first] += x[static_cast<Eigen::Index>(e)];
    net[graph.edges[e].second] -= x[static_cast<Eigen::Index>(e)];
  }
  for (int v = 0; v < graph.num_nodes; ++v) {
    double expected = 0.0;
    if (v == graph.source) expected = 1.0;
    if (v == graph.sink) expected = -1.0;
    if (std::abs(net[v] - expected) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Probability simplex

ProbabilitySimplex::ProbabilitySimplex(Eigen::Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("ProbabilitySimplex: n must be >= 1");
}

Vertex ProbabilitySimplex::lmo(const Vector& c) const {
  if (c.size() != n_) throw std::invalid_argument("simplex lmo: dimension mismatch");
  return lmo_simplex(c);
}

std::optional<bool> ProbabilitySimplex::contains(const Vector& x, double tol) const {
  return x.size() == n_ && membership_simplex(x, tol);
}

Vector ProbabilitySimplex::project_tangent(const Vector& g) const {
  return (g.array() - g.mean()).matrix();
}

std::optional<std::vector<Vertex>> ProbabilitySimplex::enumerate_vertices(std::size_t limit) const {
  if (static_cast<std::size_t>(n_) > limit) return std::nullopt;
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(n_));
  for (Eigen::Index i = 0; i < n_; ++i) {
    Vertex v{Vector::Zero(n_), VertexKey{{i}}};
    v.point[i] = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// l1 ball

L1Ball::L1Ball(Eigen::Index n, double tau) : n_(n), tau_(tau) {
  if (n < 1) throw std::invalid_argument("L1Ball: n must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("L1Ball: tau must be positive");
}

Vertex L1Ball::lmo(const Vector& c) const {
  if (c.size() != n_) throw std::invalid_argument("l1 lmo: dimension mismatch");
  return lmo_l1ball(c, tau_);
}

std::optional<bool> L1Ball::contains(const Vector& x, double tol) const {
  return x.size() == n_ && membership_l1ball(x, tau_, tol);
}

std::optional<std::vector<Vertex>> L1Ball::enumerate_vertices(std::size_t limit) const {
  if (2 * static_cast<std::size_t>(n_) > limit) return std::nullopt;
  std::vector<Vertex> out;
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (int sign : {1, -1}) {
      Vertex v{Vector::Zero(n_), VertexKey{{i, sign}}};
      v.point[i] = sign * tau_;
      out.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Birkhoff polytope

BirkhoffPolytope::BirkhoffPolytope(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("BirkhoffPolytope: n must be >= 1");
}

Vertex BirkhoffPolytope::lmo(const Vector& c) const {
  if (c.size() != dim()) throw std::invalid_argument("birkhoff lmo: dimension mismatch");
  return lmo_birkhoff(c);
}

std::optional<bool> BirkhoffPolytope::contains(const Vector& x, double tol) const {
  return x.size() == dim() && membership_birkhoff(x, tol);
}

Vector BirkhoffPolytope::project_tangent(const Vector& g) const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto m = Eigen::Map<const RowMajor>(g.data(), n_, n_);
  const Vector row_mean = m.rowwise().mean();
  const Vector col_mean = m.colwise().mean().transpose();
  const double total_mean = m.mean();
  RowMajor p = m;
  p.colwise() -= row_mean;
  p.rowwise() -= col_mean.transpose();
  p.array() += total_mean;
  return Eigen::Map<const Vector>(p.data(), dim());
}

std::optional<std::vector<Vertex>> BirkhoffPolytope::enumerate_vertices(std::size_t limit) const {
  std::size_t count = 1;
  for (int k = 2; k <= n_; ++k) {
    count *= static_cast<std::size_t>(k);
    if (count > limit) return std::nullopt;
  }
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Vertex> out;
  out.reserve(count);
  do {
    out.push_back(permutation_vertex(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------------------
// DAG flow polytope

FlowPolytope::FlowPolytope(LayeredDAG graph)
    : graph_(std::move(graph)), index_(DagIndex::build(graph_)) {}

Vertex FlowPolytope::lmo(const Vector& c) const {
  return path_vertex(shortest_path_edges(graph_, index_, c), dim());
}

std::optional<bool> FlowPolytope::contains(const Vector& x, double tol) const {
  return membership_dag_flow(x, graph_, tol);
}

std::optional<std::vector<Vertex>> FlowPolytope::enumerate_vertices(std::size_t limit) const {
  auto paths = enumerate_paths(graph_, index_, limit);
  if (paths.size() > limit) return std::nullopt;
  std::vector<Vertex> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(path_vertex(p, dim()));
  return out;
}

}  // namespace lacg
