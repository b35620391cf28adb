#include "lacg/accel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace lacg {

// ---------------------------------------------------------------------------
// HullProjector

bool HullProjector::same_keys(const std::vector<Vertex>& other) const {
  if (other.size() != vertices_.size()) return false;
  for (std::size_t i = 0; i < other.size(); ++i) {
    if (other[i].key != vertices_[i].key) return false;
  }
  return true;
}

bool HullProjector::set_vertices(std::vector<Vertex> vertices) {
  if (vertices.empty()) throw std::invalid_argument("HullProjector: empty vertex set");
  if (same_keys(vertices)) return false;
  vertices_ = std::move(vertices);
  const Eigen::Index n = vertices_.front().point.size();
  const auto m = static_cast<Eigen::Index>(vertices_.size());
  sub_.vertices.resize(n, m);
  for (Eigen::Index j = 0; j < m; ++j) sub_.vertices.col(j) = vertices_[j].point;
  sub_.gram = sub_.vertices.transpose() * sub_.vertices;
  sub_.linear = Vector::Zero(m);
  identity_gram_ = gram_is_identity(sub_.gram);
  spectrum_ = (identity_gram_ || m == 1) ? GramSpectrum{1.0, 1.0} : estimate_gram_spectrum(sub_.gram);
  ++rebuilds_;
  return true;
}

HullSolution HullProjector::solve(const Vector& z, double sigma, double eps,
                                  const std::optional<Vector>& warm_start) {
  if (vertices_.empty()) throw std::logic_error("HullProjector: no vertices set");
  sub_.linear.noalias() = sub_.vertices.transpose() * z;
  sub_.sigma = sigma;
  if (identity_gram_) return solve_hull_subproblem_simplex_fastpath(sub_, eps, warm_start);
  return solve_hull_subproblem(sub_, eps, warm_start, &spectrum_);
}

std::optional<Vector> HullProjector::remap(const std::vector<Vertex>& old_vertices,
                                           const Vector& lambda) const {
  if (static_cast<Eigen::Index>(old_vertices.size()) != lambda.size()) return std::nullopt;
  std::unordered_map<VertexKey, double, VertexKeyHash> by_key;
  for (std::size_t i = 0; i < old_vertices.size(); ++i) by_key[old_vertices[i].key] = lambda[i];
  Vector out = Vector::Zero(static_cast<Eigen::Index>(vertices_.size()));
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    auto it = by_key.find(vertices_[i].key);
    if (it != by_key.end()) out[i] = std::max(0.0, it->second);
  }
  const double total = out.sum();
  if (!(total > 0.0)) return std::nullopt;
  return out / total;
}

void AccState::set_hull(std::vector<Vertex> vertices) {
  const std::vector<Vertex> previous = hull.vertices();
  if (!hull.set_vertices(std::move(vertices))) return;
  auto carried = hull.remap(previous, lambda_w);
  if (carried) {
    lambda_w = std::move(*carried);
  } else {
    lambda_w = Vector::Constant(static_cast<Eigen::Index>(hull.size()),
                                1.0 / static_cast<double>(hull.size()));
  }
}

// ---------------------------------------------------------------------------
// Restart period and parameters

double accel_theta(double mu, double L) { return std::min(0.5, std::sqrt(mu / (2.0 * L))); }

RestartPeriod compute_H(double mu, double L) {
  if (!(mu > 0.0) || !(L > 0.0)) throw std::invalid_argument("compute_H: mu and L must be positive");
  if (mu >= L) return {0.0, true};
  const double ratio = L / mu;
  if (ratio <= 2.0) return {0.0, false};
  const double theta = std::sqrt(mu / (2.0 * L));
  return {(2.0 / theta) * std::log(ratio - 1.0), false};
}

double restart_period_from_theta(double theta) {
  const double arg = 1.0 / (2.0 * theta * theta) - 1.0;
  if (arg <= 1.0) return 0.0;
  return (2.0 / theta) * std::log(arg);
}

AccState make_acc_state(const QuadraticObjective& obj, const Vertex& start) {
  AccState s;
  s.mu = obj.mu();
  s.L = obj.L();
  s.mu0 = s.L - s.mu;
  s.theta = accel_theta(s.mu, s.L);
  s.H = compute_H(s.mu, s.L).value;
  s.x = start.point;
  s.w = start.point;
  s.z_scaled = s.L * start.point - obj.grad(start.point);
  s.a = 1.0;
  s.A = 1.0;
  s.hull.set_vertices({start});
  s.lambda_w = Vector::Ones(1);
  return s;
}

void advance_weights(AccState& state) {
  state.A = state.A / (1.0 - state.theta);
  state.a = state.theta * state.A;
}

namespace {

double step_ratio(const AccState& state) {
  if (std::isfinite(state.a) && std::isfinite(state.A) && state.A > 0.0) return state.a / state.A;
  return state.theta;
}

}  // namespace

double subproblem_tolerance(const AccState& state, double eps_target) {
  return std::max(step_ratio(state) * eps_target / 8.0, 1e-14);
}

AccStepResult acc_step(AccState& state, const QuadraticObjective& obj, double eps_m) {
  const double theta = step_ratio(state);
  const Vector y = (state.x + theta * state.w) / (1.0 + theta);
  const Vector g = obj.grad(y);
  state.z_scaled = (1.0 - theta) * state.z_scaled + theta * (state.mu * y - g);
  const double sigma = state.mu + (std::isfinite(state.A) ? state.mu0 / state.A : 0.0);

  AccStepResult out;
  out.hull = state.hull.solve(state.z_scaled, sigma, eps_m,
                              state.lambda_w.size() == static_cast<Eigen::Index>(state.hull.size())
                                  ? std::optional<Vector>(state.lambda_w)
                                  : std::nullopt);
  state.w = out.hull.point;
  state.lambda_w = out.hull.lambda;
  out.x_hat = (1.0 - theta) * state.x + theta * state.w;
  return out;
}

HullSolution restart(AccState& state, const QuadraticObjective& obj, const Vector& y,
                     std::vector<Vertex> new_hull, double eps_m,
                     const std::optional<Vector>& warm_start) {
  if (new_hull.empty()) throw std::invalid_argument("restart: empty hull");
  state.a = 1.0;
  state.A = 1.0;
  state.z_scaled = state.L * y - obj.grad(y);
  state.set_hull(std::move(new_hull));
  std::optional<Vector> warm = warm_start;
  if (!warm && state.lambda_w.size() == static_cast<Eigen::Index>(state.hull.size())) {
    warm = state.lambda_w;
  }
  HullSolution sol = state.hull.solve(state.z_scaled, state.L, eps_m, warm);
  state.w = sol.point;
  state.lambda_w = sol.lambda;
  state.restart_counter = 0;
  state.restart_flag = false;
  return sol;
}

std::size_t cull_active_set(AccState& state, double threshold) {
  const auto& current = state.hull.vertices();
  if (state.lambda_w.size() != static_cast<Eigen::Index>(current.size())) {
    throw std::logic_error("cull_active_set: lambda_w does not match C");
  }
  std::vector<Vertex> kept;
  std::vector<double> weights;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (state.lambda_w[static_cast<Eigen::Index>(i)] >= threshold) {
      kept.push_back(current[i]);
      weights.push_back(state.lambda_w[static_cast<Eigen::Index>(i)]);
    }
  }
  if (kept.empty()) {
    Eigen::Index heaviest = 0;
    state.lambda_w.maxCoeff(&heaviest);
    kept.push_back(current[static_cast<std::size_t>(heaviest)]);
    weights.push_back(1.0);
  }
  const std::size_t dropped = current.size() - kept.size();
  if (dropped == 0) return 0;

  Vector lambda = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  lambda /= lambda.sum();
  state.hull.set_vertices(std::move(kept));
  state.lambda_w = lambda;
  state.w = state.hull.combine(lambda);
  return dropped;
}

double hull_wolfe_gap(const AccState& state, const Vector& grad, const Vector& p) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& v : state.hull.vertices()) lowest = std::min(lowest, grad.dot(v.point));
  return grad.dot(p) - lowest;
}

}  // namespace lacg
