#include "lacg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lacg {

Vector project_simplex(const Vector& y) {
  const Eigen::Index m = y.size();
  if (m < 1) throw std::invalid_argument("project_simplex: empty input");
  std::vector<double> sorted(y.data(), y.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double threshold = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  Vector x = (y.array() - threshold).max(0.0).matrix();
  const double total = x.sum();
  if (total > 0.0) {
    x /= total;
  } else {
    // Only reachable with non-finite input; fall back to the top coordinate.
    x.setZero();
    Eigen::Index best = 0;
    y.maxCoeff(&best);
    x[best] = 1.0;
  }
  return x;
}

HullSubproblem HullSubproblem::build(std::span<const Vertex> hull, const Vector& z, double sigma) {
  if (hull.empty()) throw std::invalid_argument("HullSubproblem: empty vertex set");
  if (!(sigma > 0.0)) throw std::invalid_argument("HullSubproblem: sigma must be positive");
  const Eigen::Index n = z.size();
  const auto m = static_cast<Eigen::Index>(hull.size());
  HullSubproblem sub;
  sub.vertices.resize(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (hull[j].point.size() != n) {
      throw std::invalid_argument("HullSubproblem: vertex dimension mismatch");
    }
    sub.vertices.col(j) = hull[j].point;
  }
  sub.gram = sub.vertices.transpose() * sub.vertices;
  sub.linear = sub.vertices.transpose() * z;
  sub.sigma = sigma;
  return sub;
}

double HullSubproblem::value(const Vector& lambda) const {
  return -linear.dot(lambda) + 0.5 * sigma * lambda.dot(gram * lambda);
}

Vector HullSubproblem::gradient(const Vector& lambda) const {
  // With more vertices than coordinates, going through V is cheaper than the gram.
  if (vertices.cols() > 2 * vertices.rows()) {
    const Vector u = vertices * lambda;
    return sigma * (vertices.transpose() * u) - linear;
  }
  return sigma * (gram * lambda) - linear;
}

double HullSubproblem::wolfe_gap(const Vector& lambda) const {
  const Vector g = gradient(lambda);
  return std::max(0.0, lambda.dot(g) - g.minCoeff());
}

bool gram_is_identity(const DenseMatrix& gram) {
  return gram.rows() == gram.cols() && gram.isIdentity(0.0);
}

GramSpectrum estimate_gram_spectrum(const DenseMatrix& gram) {
  GramSpectrum s;
  s.upper = 1.01 * power_iteration_lmax(gram, 50, 0.0);
  if (gram.rows() <= 300) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    s.upper = std::max(s.upper, hi);
    s.lower = lo > 1e-10 * hi ? 0.99 * lo : 0.0;
  }
  if (!(s.upper > 0.0)) s.upper = 1.0;
  return s;
}

namespace {

Vector initial_lambda(const HullSubproblem& sub, const std::optional<Vector>& warm_start) {
  const Eigen::Index m = sub.size();
  if (warm_start && warm_start->size() == m && warm_start->allFinite()) {
    if (warm_start->minCoeff() >= 0.0 && std::abs(warm_start->sum() - 1.0) <= 1e-12) {
      return *warm_start / warm_start->sum();
    }
    return project_simplex(*warm_start);
  }
  // Best single vertex: g(e_i) = -linear_i + sigma/2 gram_ii.
  Eigen::Index best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = -sub.linear[i] + 0.5 * sub.sigma * sub.gram(i, i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  Vector lambda = Vector::Zero(m);
  lambda[best] = 1.0;
  return lambda;
}

HullSolution finish(const HullSubproblem& sub, Vector lambda, double certified, SolveStatus status,
                    int iterations) {
  HullSolution out;
  out.point = sub.vertices * lambda;
  out.lambda = std::move(lambda);
  out.certified_gap = certified;
  out.status = status;
  out.iterations = iterations;
  return out;
}

}  // namespace

HullSolution solve_hull_subproblem(const HullSubproblem& sub, double target_eps,
                                   const std::optional<Vector>& warm_start,
                                   const GramSpectrum* spectrum) {
  if (!(target_eps > 0.0)) throw std::invalid_argument("solve_hull_subproblem: eps must be > 0");
  const Eigen::Index m = sub.size();
  if (m == 1) return finish(sub, Vector::Ones(1), 0.0, SolveStatus::converged, 0);

  Vector lambda = initial_lambda(sub, warm_start);
  Vector grad = sub.gradient(lambda);
  double value = -sub.linear.dot(lambda) + 0.5 * lambda.dot(grad + sub.linear);
  double gap = std::max(0.0, lambda.dot(grad) - grad.minCoeff());
  if (gap <= target_eps) return finish(sub, std::move(lambda), gap, SolveStatus::converged, 0);

  const GramSpectrum bounds = spectrum ? *spectrum : estimate_gram_spectrum(sub.gram);
  const double smooth = sub.sigma * bounds.upper;
  const double strong = sub.sigma * bounds.lower;
  const bool strongly_convex = strong > 0.0;
  const double momentum =
      strongly_convex ? (std::sqrt(smooth) - std::sqrt(strong)) / (std::sqrt(smooth) + std::sqrt(strong))
                      : 0.0;

  Vector best = lambda;
  double best_value = value;
  double certified = gap;

  // The gradient is affine and the momentum weights sum to one, so the
  // gradient at y is extrapolated instead of recomputed.
  Vector y = lambda;
  Vector grad_y = grad;
  double t = 1.0;
  const int cap = static_cast<int>(10 * m + 1000);
  int it = 0;
  SolveStatus status = SolveStatus::iteration_limit;
  while (it < cap) {
    ++it;
    Vector next = project_simplex(y - grad_y / smooth);
    Vector grad_next = sub.gradient(next);
    double beta = momentum;
    if (!strongly_convex) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      beta = (t - 1.0) / t_next;
      t = t_next;
    }
    y = next + beta * (next - lambda);
    grad_y = grad_next + beta * (grad_next - grad);
    lambda = std::move(next);
    grad = std::move(grad_next);

    const double next_value = -sub.linear.dot(lambda) + 0.5 * lambda.dot(grad + sub.linear);
    if (next_value > value) {
      // Momentum overshoot: restart from the current point.
      y = lambda;
      grad_y = grad;
      t = 1.0;
    }
    value = next_value;
    gap = std::max(0.0, lambda.dot(grad) - grad.minCoeff());
    certified = std::min(certified, gap);
    if (value < best_value) {
      best_value = value;
      best = lambda;
    }
    if (gap <= target_eps) {
      status = SolveStatus::converged;
      break;
    }
  }
  if (certified <= target_eps) status = SolveStatus::converged;
  return finish(sub, std::move(best), certified, status, it);
}

HullSolution solve_hull_subproblem_simplex_fastpath(const HullSubproblem& sub, double target_eps,
                                                    const std::optional<Vector>& warm_start,
                                                    const GramSpectrum* spectrum) {
  if (!gram_is_identity(sub.gram)) {
    return solve_hull_subproblem(sub, target_eps, warm_start, spectrum);
  }
  Vector lambda = project_simplex(sub.linear / sub.sigma);
  return finish(sub, std::move(lambda), 0.0, SolveStatus::converged, 0);
}

}  // namespace lacg
