#include "lacg/accel.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "lacg/instance.hpp"
#include "lacg/warmup.hpp"
#include "oracles.hpp"

namespace lacg {
namespace {

Vertex e(int i, int n) { return {Vector::Unit(n, i), VertexKey{{i}}}; }

std::vector<Vertex> all_simplex(int n) {
  std::vector<Vertex> out;
  for (int i = 0; i < n; ++i) out.push_back(e(i, n));
  return out;
}

TEST(RestartPeriod, KnownValue) {
  // (2/theta) log(99) with theta = sqrt(1/200), evaluated in high precision.
  const RestartPeriod h = compute_H(1.0, 100.0);
  EXPECT_FALSE(h.degenerate);
  EXPECT_NEAR(h.value, 129.96961625580322, 1e-10);
  EXPECT_NEAR(restart_period_from_theta(accel_theta(1.0, 100.0)), h.value, 1e-9);
}

TEST(RestartPeriod, SmallAndDegenerateConditioning) {
  EXPECT_EQ(compute_H(1.0, 2.0).value, 0.0);
  EXPECT_FALSE(compute_H(1.0, 2.0).degenerate);
  EXPECT_EQ(compute_H(1.0, 1.5).value, 0.0);
  EXPECT_TRUE(compute_H(1.0, 1.0).degenerate);
  EXPECT_TRUE(compute_H(2.0, 1.0).degenerate);
  EXPECT_THROW(compute_H(0.0, 1.0), std::invalid_argument);
}

TEST(RestartPeriod, GrowsWithConditioning) {
  double prev = 0.0;
  for (double kappa : {3.0, 10.0, 100.0, 1e4, 1e6}) {
    const double h = compute_H(1.0, kappa).value;
    EXPECT_GT(h, prev);
    EXPECT_NEAR(h, restart_period_from_theta(accel_theta(1.0, kappa)), 1e-9 * h);
    prev = h;
  }
}

TEST(Theta, CappedAtOneHalf) {
  EXPECT_DOUBLE_EQ(accel_theta(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(accel_theta(1.0, 200.0), 0.05);
}

TEST(AccState, FreshStateAndWeights) {
  const QuadraticObjective q = generate_spectrum_quadratic(4, 1.0, 50.0, 1);
  AccState s = make_acc_state(q, e(2, 4));
  EXPECT_EQ(s.x, Vector::Unit(4, 2));
  EXPECT_EQ(s.w, Vector::Unit(4, 2));
  EXPECT_LE((s.z_scaled - (50.0 * s.x - q.grad(s.x))).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(s.mu0, 49.0);
  advance_weights(s);
  EXPECT_DOUBLE_EQ(s.A, 1.0 / (1.0 - s.theta));
  EXPECT_DOUBLE_EQ(s.a, s.theta * s.A);
  EXPECT_DOUBLE_EQ(subproblem_tolerance(s, 1e-8), std::max(s.theta * 1e-8 / 8.0, 1e-14));
  EXPECT_DOUBLE_EQ(subproblem_tolerance(s, 1e-20), 1e-14);
}

TEST(AccStep, SingleVertexHullKeepsW) {
  const QuadraticObjective q = generate_spectrum_quadratic(3, 1.0, 10.0, 2);
  AccState s = make_acc_state(q, e(0, 3));
  advance_weights(s);
  const AccStepResult r = acc_step(s, q, 1e-12);
  EXPECT_EQ(s.w, Vector::Unit(3, 0));
  EXPECT_LE((r.x_hat - Vector::Unit(3, 0)).norm(), 1e-15);
}

// The normalized accumulator must reproduce the textbook recursion
// z <- z - a grad f(y) + mu a y, w = argmin -<z,u> + (mu A + mu0)/2 |u|^2.
TEST(AccStep, MatchesUnnormalizedRecursion) {
  const int n = 6;
  const QuadraticObjective q = generate_spectrum_quadratic(n, 1.0, 40.0, 3);
  AccState s = make_acc_state(q, e(0, n));
  s.set_hull(all_simplex(n));

  Vector z = q.L() * s.x - q.grad(s.x);
  Vector w = s.x;
  double A = 1.0;
  const double theta = s.theta;
  for (int k = 0; k < 40; ++k) {
    advance_weights(s);
    acc_step(s, q, 1e-14);

    A = A / (1.0 - theta);
    const double a = theta * A;
    const Vector y = (s.x + theta * w) / (1.0 + theta);
    z = z - a * q.grad(y) + q.mu() * a * y;
    w = oracle::project_simplex_sort(z / (q.mu() * A + s.mu0));

    EXPECT_LE((s.w - w).norm(), 1e-9) << "k=" << k;
    EXPECT_LE((s.z_scaled * A - z).norm(), 1e-8 * z.norm()) << "k=" << k;
  }
}

TEST(Restart, ResetsWeightsAndCounter) {
  const QuadraticObjective q = generate_spectrum_quadratic(4, 1.0, 20.0, 4);
  AccState s = make_acc_state(q, e(0, 4));
  advance_weights(s);
  advance_weights(s);
  s.restart_flag = true;
  s.restart_counter = 17;
  const Vector y{{0.25, 0.25, 0.5, 0.0}};
  const HullSolution sol = restart(s, q, y, {e(0, 4), e(1, 4), e(2, 4)}, 1e-13);
  EXPECT_EQ(s.A, 1.0);
  EXPECT_EQ(s.a, 1.0);
  EXPECT_FALSE(s.restart_flag);
  EXPECT_EQ(s.restart_counter, 0);
  EXPECT_EQ(s.hull.size(), 3u);
  const Vector z = q.L() * y - q.grad(y);
  const Vector expect = oracle::project_simplex_sort(Vector{{z[0], z[1], z[2]}} / q.L());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sol.point[i], expect[i], 1e-12);
  EXPECT_EQ(sol.point[3], 0.0);
  EXPECT_EQ(s.w, sol.point);
}

TEST(HullProjector, RebuildsOnlyOnKeyChange) {
  HullProjector h;
  EXPECT_TRUE(h.set_vertices({e(0, 3), e(1, 3)}));
  EXPECT_FALSE(h.set_vertices({e(0, 3), e(1, 3)}));
  EXPECT_EQ(h.rebuild_count(), 1);
  EXPECT_TRUE(h.uses_fast_path());
  EXPECT_TRUE(h.set_vertices({e(1, 3), e(0, 3)}));
  EXPECT_EQ(h.rebuild_count(), 2);
  EXPECT_THROW(h.set_vertices({}), std::invalid_argument);
}

TEST(HullProjector, RemapByKey) {
  HullProjector h;
  h.set_vertices({e(1, 4), e(2, 4), e(3, 4)});
  const auto m = h.remap({e(0, 4), e(1, 4), e(2, 4)}, Vector{{0.5, 0.1, 0.4}});
  ASSERT_TRUE(m);
  EXPECT_NEAR((*m)[0], 0.2, 1e-15);
  EXPECT_NEAR((*m)[1], 0.8, 1e-15);
  EXPECT_EQ((*m)[2], 0.0);
  EXPECT_FALSE(h.remap({e(0, 4)}, Vector::Ones(1)));
}

TEST(Culling, DropsTinyWeights) {
  const QuadraticObjective q = generate_spectrum_quadratic(4, 1.0, 20.0, 5);
  AccState s = make_acc_state(q, e(0, 4));
  s.set_hull({e(0, 4), e(1, 4), e(2, 4)});
  s.lambda_w = Vector{{0.6, 1e-14, 0.4}};
  EXPECT_EQ(cull_active_set(s, 1e-12), 1u);
  EXPECT_EQ(s.hull.size(), 2u);
  EXPECT_NEAR(s.w[0], 0.6, 1e-12);
  EXPECT_NEAR(s.w[2], 0.4, 1e-12);
  EXPECT_EQ(cull_active_set(s, 1e-12), 0u);

  s.lambda_w = Vector{{1e-20, 2e-20}};
  EXPECT_EQ(cull_active_set(s, 1e-12), 1u);
  EXPECT_EQ(s.hull.vertices()[0].key, VertexKey{{2}});
}

TEST(Culling, ExactZerosLeaveOneVertex) {
  const QuadraticObjective q = generate_spectrum_quadratic(3, 1.0, 20.0, 5);
  AccState s = make_acc_state(q, e(0, 3));
  s.set_hull(all_simplex(3));
  s.lambda_w = Vector{{1.0, 0.0, 0.0}};
  EXPECT_EQ(cull_active_set(s, 1e-12), 2u);
  EXPECT_EQ(s.hull.size(), 1u);
  EXPECT_EQ(s.w, Vector::Unit(3, 0));
}

TEST(Culling, ThresholdBoundary) {
  const QuadraticObjective q = generate_spectrum_quadratic(3, 1.0, 20.0, 5);
  AccState s = make_acc_state(q, e(0, 3));
  s.set_hull(all_simplex(3));
  s.lambda_w = Vector{{0.5, 0.5 - 1e-13, 1e-13}};
  EXPECT_EQ(cull_active_set(s, 1e-12), 1u);
  ASSERT_EQ(s.hull.size(), 2u);
  EXPECT_NEAR(s.lambda_w.sum(), 1.0, 1e-15);
  EXPECT_NEAR(s.lambda_w[0], 0.5 / (1.0 - 1e-13), 1e-15);
}

TEST(Culling, ReducedHullGivesSameW) {
  // Project a point close to the edge e0-e1 of the triangle: the weight on
  // e2 is below 1e-10 and dropping it leaves the solution in place.
  const QuadraticObjective q = generate_spectrum_quadratic(3, 1.0, 20.0, 5);
  AccState s = make_acc_state(q, e(0, 3));
  s.set_hull(all_simplex(3));
  const Vector z{{0.7, 0.3, -2.0}};
  const HullSolution full = s.hull.solve(z, 1.0, 1e-14);
  ASSERT_LT(full.lambda[2], 1e-10);
  s.lambda_w = full.lambda;
  s.w = full.point;
  cull_active_set(s, 1e-10);
  ASSERT_EQ(s.hull.size(), 2u);
  const HullSolution reduced = s.hull.solve(z, 1.0, 1e-14);
  EXPECT_LE((reduced.point - full.point).norm(), 1e-7);
}

TEST(HullWolfeGap, Definition) {
  const QuadraticObjective q = generate_spectrum_quadratic(3, 1.0, 5.0, 6);
  AccState s = make_acc_state(q, e(0, 3));
  s.set_hull({e(0, 3), e(2, 3)});
  const Vector g{{3.0, -5.0, 1.0}};
  const Vector p{{0.5, 0.0, 0.5}};
  EXPECT_DOUBLE_EQ(hull_wolfe_gap(s, g, p), 2.0 - 1.0);
}

TEST(Warmup, RequiresMembershipAndAffineHull) {
  const QuadraticObjective q = generate_sparse_gram_quadratic(8, 0.5, 1);
  FlowPolytope flow(make_layered_dag(2, 2));
  ASSERT_EQ(flow.dim(), 8);
  EXPECT_THROW(make_warmup_state(q, flow, flow.initial_vertex().point), std::invalid_argument);
}

TEST(Warmup, ConvergesOnInteriorOptimum) {
  const int n = 20;
  Vector c = Vector::Constant(n, 1.0 / n);
  const QuadraticObjective q = interior_optimum_quadratic(c, 1.0, 10.0, 7);
  ProbabilitySimplex simplex(n);
  WarmupState s = make_warmup_state(q, simplex, simplex.initial_vertex().point);
  double f = q.eval(s.x);
  int accel = 0;
  for (int k = 0; k < 400; ++k) {
    const WarmupReport r = warmup_iteration(s, q, simplex);
    EXPECT_LE(r.f, f + 1e-12);
    f = r.f;
    accel += r.took_accel ? 1 : 0;
    ASSERT_TRUE(membership_simplex(s.x));
  }
  EXPECT_GT(accel, 0);
  EXPECT_LE(q.eval(s.x) - q.eval(c), 1e-9);
}

TEST(Warmup, InfeasibleAcceleratedPointFallsBackToFw) {
  const QuadraticObjective q = generate_spectrum_quadratic(5, 1.0, 100.0, 8);
  ProbabilitySimplex simplex(5);
  WarmupState s = make_warmup_state(q, simplex, simplex.initial_vertex().point);
  bool saw_reject = false;
  for (int k = 0; k < 50 && !saw_reject; ++k) {
    const Vector before = s.x;
    const WarmupReport r = warmup_iteration(s, q, simplex);
    if (!r.accepted) {
      saw_reject = true;
      EXPECT_EQ(s.w, s.x);
    }
    EXPECT_TRUE(membership_simplex(s.x));
  }
  EXPECT_TRUE(saw_reject);
}

}  // namespace
}  // namespace lacg
