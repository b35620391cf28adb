#include "lacg/polytope.hpp"

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "lacg/hungarian.hpp"
#include "lacg/layered_dag.hpp"
#include "oracles.hpp"

namespace lacg {
namespace {

double brute_min(const std::vector<Vertex>& vertices, const Vector& c) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::min(best, c.dot(v.point));
  return best;
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = g(rng);
  return c;
}

TEST(SimplexLmo, Examples) {
  const Vertex v = lmo_simplex(Vector{{3.0, -1.0, 2.0}});
  EXPECT_EQ(v.key.code, std::vector<std::int64_t>{1});
  EXPECT_EQ(v.point, Vector::Unit(3, 1));
  EXPECT_EQ(lmo_simplex(Vector::Zero(3)).key.code, std::vector<std::int64_t>{0});
}

TEST(SimplexLmo, MatchesEnumeration) {
  ProbabilitySimplex simplex(5);
  const auto vertices = *simplex.enumerate_vertices(100);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector c = gaussian(rng, 5);
    EXPECT_DOUBLE_EQ(c.dot(simplex.lmo(c).point), brute_min(vertices, c));
  }
}

TEST(L1Lmo, Examples) {
  const Vertex v = lmo_l1ball(Vector{{0.0, -4.0, 1.0}}, 2.0);
  EXPECT_EQ(v.point, (2.0 * Vector::Unit(3, 1)).eval());
  const Vertex z = lmo_l1ball(Vector::Zero(3), 2.0);
  EXPECT_EQ(z.point, (-2.0 * Vector::Unit(3, 0)).eval());
  EXPECT_THROW(lmo_l1ball(Vector::Zero(3), 0.0), std::invalid_argument);
}

TEST(L1Lmo, MatchesSignedVertexEnumeration) {
  L1Ball ball(6, 1.5);
  const auto vertices = *ball.enumerate_vertices(100);
  ASSERT_EQ(vertices.size(), 12u);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Vector c = gaussian(rng, 6);
    EXPECT_DOUBLE_EQ(c.dot(ball.lmo(c).point), brute_min(vertices, c));
  }
}

TEST(BirkhoffLmo, TwoByTwo) {
  const Vertex v = lmo_birkhoff(Vector{{1.0, 2.0, 3.0, 1.0}});
  EXPECT_EQ(v.key.code, (std::vector<std::int64_t>{0, 1}));
  EXPECT_DOUBLE_EQ(v.point.dot(Vector{{1.0, 2.0, 3.0, 1.0}}), 2.0);
}

TEST(BirkhoffLmo, ThreeByThree) {
  const Vector c{{1, 2, 3, 2, 1, 3, 3, 2, 1}};
  const Vertex v = lmo_birkhoff(c);
  EXPECT_EQ(v.key.code, (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(c.dot(v.point), 3.0);
  Eigen::Matrix3d m;
  m << 1, 2, 3, 2, 1, 3, 3, 2, 1;
  EXPECT_DOUBLE_EQ(oracle::min_assignment_brute(m), 3.0);
}

TEST(BirkhoffLmo, ConstantCostIsDeterministic) {
  const Vector c = Vector::Constant(16, 2.5);
  const Vertex a = lmo_birkhoff(c);
  const Vertex b = lmo_birkhoff(c);
  EXPECT_EQ(a.key, b.key);
  EXPECT_DOUBLE_EQ(c.dot(a.point), 4 * 2.5);
}

TEST(BirkhoffLmo, RejectsNonSquare) {
  EXPECT_THROW(lmo_birkhoff(Vector::Zero(5)), std::invalid_argument);
  EXPECT_THROW(min_cost_assignment(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(BirkhoffLmo, MatchesPermutationBruteForce) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      const Vector c = gaussian(rng, n * n);
      const Eigen::MatrixXd m =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
              c.data(), n, n);
      EXPECT_NEAR(c.dot(lmo_birkhoff(c).point), oracle::min_assignment_brute(m), 1e-12);
    }
  }
}

TEST(BirkhoffPolytope, VerticesArePermutationMatrices) {
  BirkhoffPolytope p(4);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Vertex v = p.lmo(gaussian(rng, 16));
    for (Eigen::Index i = 0; i < 16; ++i) EXPECT_TRUE(v.point[i] == 0.0 || v.point[i] == 1.0);
    EXPECT_TRUE(*p.contains(v.point, 0.0));
  }
}

TEST(DagLmo, DiamondPicksCheapPath) {
  LayeredDAG g{4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 0, 3};
  const Vertex v = lmo_dag_flow(Vector{{1.0, 1.0, 2.0, 2.0}}, g);
  EXPECT_EQ(v.key.code, (std::vector<std::int64_t>{0, 1}));
  const Vertex w = lmo_dag_flow(Vector{{2.0, 2.0, 1.0, 1.0}}, g);
  EXPECT_EQ(w.key.code, (std::vector<std::int64_t>{2, 3}));
}

TEST(DagLmo, MatchesPathEnumeration) {
  const LayeredDAG g = make_layered_dag(3, 2);
  ASSERT_EQ(g.edges.size(), 12u);
  const auto paths = oracle::all_paths(g.num_nodes, g.edges, g.source, g.sink);
  ASSERT_EQ(paths.size(), 8u);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Vector c = gaussian(rng, 12);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : paths) {
      double v = 0.0;
      for (int e : p) v += c[e];
      best = std::min(best, v);
    }
    EXPECT_DOUBLE_EQ(c.dot(lmo_dag_flow(c, g).point), best);
  }
}

TEST(DagLmo, ZeroCostGivesValidPath) {
  FlowPolytope p(make_layered_dag(3, 3));
  const Vertex v = p.lmo(Vector::Zero(p.dim()));
  EXPECT_TRUE(*p.contains(v.point, kMembershipTol));
}

TEST(DagLmo, DisconnectedSinkIsStructuralError) {
  LayeredDAG g{4, {{0, 1}, {2, 3}}, 0, 3};
  EXPECT_THROW(lmo_dag_flow(Vector::Zero(2), g), StructuralError);
  LayeredDAG cycle{3, {{0, 1}, {1, 0}, {1, 2}}, 0, 2};
  EXPECT_THROW(FlowPolytope{cycle}, StructuralError);
}

TEST(LayeredDag, VideoTopologySize) {
  const LayeredDAG g = make_layered_dag(15, 15);
  EXPECT_EQ(g.num_nodes, 227);
  EXPECT_EQ(g.edges.size(), 3180u);
}

TEST(LayeredDag, JsonRoundTrip) {
  const LayeredDAG g = make_layered_dag(2, 3);
  const LayeredDAG back = layered_dag_from_json(to_json(g));
  EXPECT_EQ(back.num_nodes, g.num_nodes);
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.source, g.source);
  EXPECT_EQ(back.sink, g.sink);
}

TEST(Membership, SimplexExamples) {
  EXPECT_TRUE(membership_simplex(Vector{{0.2, 0.3, 0.5}}, 1e-9));
  EXPECT_FALSE(membership_simplex(Vector{{1.1, -0.1, 0.0}}, 1e-9));
  EXPECT_TRUE(membership_simplex(Vector::Unit(3, 0)));
}

TEST(Membership, OtherPolytopes) {
  EXPECT_TRUE(membership_l1ball(Vector{{0.5, -0.5}}, 1.0));
  EXPECT_FALSE(membership_l1ball(Vector{{0.6, -0.5}}, 1.0));
  EXPECT_TRUE(membership_birkhoff(Vector::Constant(9, 1.0 / 3.0)));
  EXPECT_FALSE(membership_birkhoff(Vector{{1.0, 0.0, 1.0, 0.0}}));
  LayeredDAG g{4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 0, 3};
  EXPECT_TRUE(membership_dag_flow(Vector{{0.5, 0.5, 0.5, 0.5}}, g));
  EXPECT_FALSE(membership_dag_flow(Vector{{1.0, 0.0, 0.0, 0.0}}, g));
}

TEST(TangentProjection, StaysInDirectionSpace) {
  std::mt19937_64 rng(6);
  ProbabilitySimplex s(7);
  EXPECT_NEAR(s.project_tangent(gaussian(rng, 7)).sum(), 0.0, 1e-12);

  BirkhoffPolytope b(4);
  const Vector p = b.project_tangent(gaussian(rng, 16));
  const auto m = Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>>(p.data());
  EXPECT_LE(m.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(m.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  // Idempotent.
  EXPECT_LE((b.project_tangent(p) - p).norm(), 1e-12);

  FlowPolytope f(make_layered_dag(2, 2));
  EXPECT_FALSE(f.has_tangent_projection());
  EXPECT_THROW(f.project_tangent(Vector::Zero(f.dim())), std::logic_error);
}

TEST(VertexKey, OrderingAndHash) {
  const VertexKey a{{1, 2}}, b{{1, 3}}, c{{1, 2}};
  EXPECT_LT(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(VertexKeyHash{}(a), VertexKeyHash{}(c));
  EXPECT_EQ(to_string(a), "(1,2)");
}

}  // namespace
}  // namespace lacg
