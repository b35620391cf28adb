#pragma once

#include <optional>
#include <span>

#include "lacg/objective.hpp"
#include "lacg/polytope.hpp"

namespace lacg {

/// Euclidean projection onto the probability simplex (sort and threshold).
/// The result is nonnegative and renormalized to sum to one.
Vector project_simplex(const Vector& y);

/// min over lambda in the unit simplex of
///   g(lambda) = -<linear, lambda> + sigma/2 lambda' gram lambda,
/// the barycentric form of min_{u in conv(V)} -<z, u> + sigma/2 |u|^2 with
/// gram = V'V and linear = V'z.
struct HullSubproblem {
  DenseMatrix vertices;  // n x m, one vertex per column
  DenseMatrix gram;      // m x m
  Vector linear;         // m
  double sigma = 1.0;

  static HullSubproblem build(std::span<const Vertex> hull, const Vector& z, double sigma);

  Eigen::Index size() const { return linear.size(); }
  double value(const Vector& lambda) const;
  Vector gradient(const Vector& lambda) const;
  /// max_i <grad g, lambda - e_i>, an upper bound on g(lambda) - min g.
  double wolfe_gap(const Vector& lambda) const;
};

enum class SolveStatus { converged, iteration_limit };

struct HullSolution {
  Vector lambda;
  Vector point;
  double certified_gap = 0.0;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
};

/// Bounds on the extreme eigenvalues of a gram matrix: upper >= lambda_max,
/// 0 <= lower <= lambda_min (lower = 0 when the matrix is treated as singular).
struct GramSpectrum {
  double upper = 0.0;
  double lower = 0.0;
};

GramSpectrum estimate_gram_spectrum(const DenseMatrix& gram);

/// Projected accelerated gradient on the barycentric problem until the Wolfe
/// gap certificate drops to target_eps (cap: 10 m + 1000 iterations). Uses
/// the constant-momentum scheme when the gram matrix is nonsingular and the
/// FISTA scheme with adaptive restart otherwise. The returned lambda has the
/// lowest g seen, and certified_gap is the smallest certificate seen.
HullSolution solve_hull_subproblem(const HullSubproblem& sub, double target_eps,
                                   const std::optional<Vector>& warm_start = std::nullopt,
                                   const GramSpectrum* spectrum = nullptr);

/// When gram is the identity (distinct simplex vertices) the problem is a
/// single simplex projection of linear / sigma. Falls back to the general
/// solver otherwise.
HullSolution solve_hull_subproblem_simplex_fastpath(
    const HullSubproblem& sub, double target_eps,
    const std::optional<Vector>& warm_start = std::nullopt,
    const GramSpectrum* spectrum = nullptr);

bool gram_is_identity(const DenseMatrix& gram);

}  // namespace lacg
