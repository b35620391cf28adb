#pragma once

#include <optional>
#include <vector>

#include "lacg/objective.hpp"
#include "lacg/polytope.hpp"
#include "lacg/projection.hpp"

namespace lacg {

/// Owns a vertex set C and its gram matrix so that repeated projections
/// onto conv(C) only recompute V'z. The gram matrix and its spectrum bounds
/// are rebuilt only when the set of vertex keys changes.
class HullProjector {
 public:
  HullProjector() = default;

  /// Replaces C; returns false (and does nothing) when the keys are unchanged.
  bool set_vertices(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool same_keys(const std::vector<Vertex>& other) const;
  bool uses_fast_path() const { return identity_gram_; }
  int rebuild_count() const { return rebuilds_; }

  /// argmin over u in conv(C) of -<z, u> + sigma/2 |u|^2.
  HullSolution solve(const Vector& z, double sigma, double eps,
                     const std::optional<Vector>& warm_start = std::nullopt);

  Vector combine(const Vector& lambda) const { return sub_.vertices * lambda; }

  /// Carries barycentric weights from `old_vertices` onto the current C by
  /// key; vertices absent from C lose their weight. nullopt when nothing
  /// carries over.
  std::optional<Vector> remap(const std::vector<Vertex>& old_vertices, const Vector& lambda) const;

 private:
  std::vector<Vertex> vertices_;
  HullSubproblem sub_;
  GramSpectrum spectrum_;
  bool identity_gram_ = false;
  int rebuilds_ = 0;
};

/// State of the coupled accelerated sequence.
///
/// The dual accumulator is stored divided by A (`z_scaled` = z / A), so the
/// hull subproblem is solved as min -<z_scaled, u> + (mu + mu0 / A)/2 |u|^2,
/// which has the same minimizer as the unscaled form and stays finite when A
/// grows geometrically.
struct AccState {
  Vector x;         // monotone output the sequence is coupled to
  Vector w;         // last hull solution, w in conv(C)
  Vector lambda_w;  // barycentric coordinates of w over C
  Vector z_scaled;
  double a = 1.0;
  double A = 1.0;
  double theta = 0.0;  // sqrt(mu / (2L)), at most 0.5
  double mu = 0.0;
  double L = 0.0;
  double mu0 = 0.0;  // L - mu
  HullProjector hull;
  bool restart_flag = false;
  int restart_counter = 0;
  double H = 0.0;

  const std::vector<Vertex>& hull_vertices() const { return hull.vertices(); }
  /// Replaces C and carries lambda_w over by vertex key.
  void set_hull(std::vector<Vertex> vertices);
};

struct RestartPeriod {
  double value = 0.0;
  bool degenerate = false;  // mu >= L: returned 0
};

/// Minimum number of iterations between flag-triggered restarts,
/// (2 / theta) log(L/mu - 1) with theta = sqrt(mu / (2L)); 0 when L/mu <= 2.
RestartPeriod compute_H(double mu, double L);
/// Same quantity written as (2/theta) log(1/(2 theta^2) - 1).
double restart_period_from_theta(double theta);

double accel_theta(double mu, double L);

/// Fresh state at y0 with C = {start}: y = w = x = y0, a = A = 1,
/// z = L y0 - grad f(y0).
AccState make_acc_state(const QuadraticObjective& obj, const Vertex& start);

struct AccStepResult {
  Vector x_hat;
  HullSolution hull;
};

/// Advances A <- A / (1 - theta), a <- theta A.
void advance_weights(AccState& state);

/// One coupled accelerated step over the current C (A and a already
/// advanced):
///   y  = x/(1+theta) + theta w/(1+theta)
///   z <- z - a grad f(y) + mu a y
///   w  = eps-approximate argmin_{u in conv C} -<z, u> + (mu A + mu0)/2 |u|^2
///   x_hat = (1 - theta) x + theta w
/// eps_m is the accuracy demanded on the A-normalized subproblem. The step
/// does not touch state.x.
AccStepResult acc_step(AccState& state, const QuadraticObjective& obj, double eps_m);

/// Restarts at y onto C = new_hull: a = A = 1, z = L y - grad f(y),
/// w = argmin_{u in conv C} -<z, u> + L/2 |u|^2, counter and flag cleared.
/// Returns the hull solve (w = x_hat = solution.point).
HullSolution restart(AccState& state, const QuadraticObjective& obj, const Vector& y,
                     std::vector<Vertex> new_hull, double eps_m,
                     const std::optional<Vector>& warm_start = std::nullopt);

/// Accuracy schedule for the normalized subproblem: (a/A) eps_target / 8
/// with a floor of 1e-14.
double subproblem_tolerance(const AccState& state, double eps_target);

/// Drops vertices of C whose weight in lambda_w is below `threshold`
/// (keeping the heaviest one if all are), renormalizes lambda_w and
/// rebuilds w from the reduced representation. Returns the number dropped.
std::size_t cull_active_set(AccState& state, double threshold);

/// max over u in C of <grad f(p), p - u>.
double hull_wolfe_gap(const AccState& state, const Vector& grad, const Vector& p);

}  // namespace lacg
