#include "lacg/warmup.hpp"

#include <cmath>
#include <stdexcept>

namespace lacg {

WarmupState make_warmup_state(const QuadraticObjective& obj, const Polytope& polytope,
                              const Vector& x0) {
  if (!polytope.has_membership()) {
    throw std::invalid_argument("warm-up needs a membership oracle for " + polytope.name());
  }
  if (!polytope.has_tangent_projection()) {
    throw std::invalid_argument("warm-up needs the affine hull of " + polytope.name());
  }
  if (x0.size() != obj.dim()) throw std::invalid_argument("warm-up: dimension mismatch");
  WarmupState s;
  s.x = x0;
  s.w = x0;
  s.theta = std::sqrt(obj.mu() / obj.L());
  return s;
}

WarmupReport warmup_iteration(WarmupState& state, const QuadraticObjective& obj,
                              const Polytope& polytope, const FwProbe* pre) {
  const FwProbe p = pre ? *pre : probe(obj, polytope, state.x);
  const Vector d = p.fw_vertex.point - state.x;
  const double gamma = step_size(obj, p.grad, d, 1.0, StepRule::short_step);
  const Vector x_fw = state.x + gamma * d;

  const double theta = state.theta;
  const Vector y = (state.x + theta * state.w) / (1.0 + theta);
  const Vector step = polytope.project_tangent(obj.grad(y)) / obj.mu();
  const Vector w_next = (1.0 - theta) * state.w + theta * (y - step);
  const Vector x_hat = (1.0 - theta) * state.x + theta * w_next;

  WarmupReport r;
  r.fw_gap = p.wolfe_gap;
  const double f_fw = obj.eval(x_fw);
  r.accepted = x_hat.allFinite() && polytope.contains(x_hat).value_or(false);
  if (r.accepted) {
    const double f_hat = obj.eval(x_hat);
    r.took_accel = f_hat < f_fw;
    state.x = r.took_accel ? x_hat : x_fw;
    state.w = w_next;
    r.f = r.took_accel ? f_hat : f_fw;
  } else {
    state.x = x_fw;
    state.w = x_fw;
    r.f = f_fw;
  }
  return r;
}

}  // namespace lacg
