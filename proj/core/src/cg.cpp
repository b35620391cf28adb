#include "lacg/cg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lacg {

std::string_view to_string(StepType type) {
  switch (type) {
    case StepType::FW:
      return "FW";
    case StepType::Away:
      return "Away";
    case StepType::Drop:
      return "Drop";
    case StepType::Pairwise:
      return "Pairwise";
  }
  return "?";
}

FwProbe probe(const QuadraticObjective& obj, const Polytope& polytope, const Vector& x) {
  FwProbe p;
  p.f = obj.eval_with_grad(x, p.grad);
  p.fw_vertex = polytope.lmo(p.grad);
  p.wolfe_gap = p.grad.dot(x - p.fw_vertex.point);
  return p;
}

double step_size(const QuadraticObjective& obj, const Vector& grad, const Vector& d,
                 double gamma_max, StepRule rule) {
  const double slope = -grad.dot(d);
  if (slope <= 0.0) return 0.0;
  double denom = 0.0;
  if (rule == StepRule::exact) {
    denom = obj.curvature(d);
  } else {
    denom = obj.L() * d.squaredNorm();
  }
  if (!(denom > 0.0)) return gamma_max;
  return std::clamp(slope / denom, 0.0, gamma_max);
}

double step_size_at(const QuadraticObjective& obj, const Vector& x, const Vector& d,
                    double gamma_max, StepRule rule) {
  return step_size(obj, obj.grad(x), d, gamma_max, rule);
}

FwStepResult fw_step(const QuadraticObjective& obj, const Polytope& polytope, const Vector& x,
                     StepRule rule) {
  const FwProbe p = probe(obj, polytope, x);
  const Vector d = p.fw_vertex.point - x;
  FwStepResult out;
  out.report.step_type = StepType::FW;
  out.report.fw_gap = p.wolfe_gap;
  out.report.gamma_max = 1.0;
  out.report.gamma = step_size(obj, p.grad, d, 1.0, rule);
  out.x = x + out.report.gamma * d;
  return out;
}

namespace {

const FwProbe& ensure_probe(const QuadraticObjective& obj, const Polytope& polytope,
                            const ActiveSet& as, const FwProbe* pre, FwProbe& storage) {
  if (pre) return *pre;
  storage = probe(obj, polytope, as.point());
  return storage;
}

// Active vertex maximizing <grad, u>; lowest position wins ties.
std::size_t away_index(const ActiveSet& as, const Vector& grad) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double v = grad.dot(as.vertices()[i].point);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

void apply_fw(const QuadraticObjective& obj, ActiveSet& as, const FwProbe& p, StepRule rule,
              CGStepReport& report) {
  const Vector d = p.fw_vertex.point - as.point();
  report.step_type = StepType::FW;
  report.gamma_max = 1.0;
  report.gamma = step_size(obj, p.grad, d, 1.0, rule);
  const bool was_active = as.contains(p.fw_vertex.key);
  const std::size_t before = as.size();
  as.move_toward(p.fw_vertex, report.gamma);
  report.vertex_added = !was_active && as.contains(p.fw_vertex.key);
  report.vertex_dropped = before + (report.vertex_added ? 1 : 0) > as.size();
}

}  // namespace

CGStepReport fw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                          StepRule rule, const FwProbe* pre) {
  FwProbe storage;
  const FwProbe& p = ensure_probe(obj, polytope, as, pre, storage);
  CGStepReport report;
  report.fw_gap = p.wolfe_gap;
  apply_fw(obj, as, p, rule, report);
  return report;
}

CGStepReport afw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                           StepRule rule, const FwProbe* pre) {
  FwProbe storage;
  const FwProbe& p = ensure_probe(obj, polytope, as, pre, storage);
  CGStepReport report;
  report.fw_gap = p.wolfe_gap;

  const std::size_t away = away_index(as, p.grad);
  const double away_gap = p.grad.dot(as.vertices()[away].point - as.point());
  if (as.size() == 1 || p.wolfe_gap >= away_gap) {
    apply_fw(obj, as, p, rule, report);
    return report;
  }

  const double weight = as.weights()[away];
  const Vector d = as.point() - as.vertices()[away].point;
  report.gamma_max = weight / (1.0 - weight);
  report.gamma = step_size(obj, p.grad, d, report.gamma_max, rule);
  const std::size_t before = as.size();
  as.move_away(away, report.gamma);
  report.vertex_dropped = as.size() < before;
  report.step_type = report.vertex_dropped ? StepType::Drop : StepType::Away;
  return report;
}

CGStepReport pfw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                           StepRule rule, const FwProbe* pre) {
  FwProbe storage;
  const FwProbe& p = ensure_probe(obj, polytope, as, pre, storage);
  CGStepReport report;
  report.step_type = StepType::Pairwise;
  report.fw_gap = p.wolfe_gap;

  const std::size_t away = away_index(as, p.grad);
  if (as.vertices()[away].key == p.fw_vertex.key) {
    report.gamma_max = as.weights()[away];
    return report;
  }
  const double weight = as.weights()[away];
  const Vector d = p.fw_vertex.point - as.vertices()[away].point;
  report.gamma_max = weight;
  report.gamma = step_size(obj, p.grad, d, weight, rule);
  const bool was_active = as.contains(p.fw_vertex.key);
  const VertexKey away_key = as.vertices()[away].key;
  as.transfer(away, p.fw_vertex, report.gamma);
  report.vertex_added = !was_active && as.contains(p.fw_vertex.key);
  report.vertex_dropped = !as.contains(away_key);
  return report;
}

}  // namespace lacg
