#include "lacg/lacg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace lacg {

namespace {

// Coordinates smaller than this are dropped from the x_out bookkeeping.
constexpr double kCoordFloor = 1e-15;

// True when `candidate` beats `incumbent` by more than the tie tolerance.
bool strictly_better(double candidate, double incumbent) {
  return candidate < incumbent - 1e-15 * std::max(1.0, std::abs(incumbent));
}

Coordinates mix(const Coordinates& a, double weight_a, const std::vector<Vertex>& hull,
                const Vector& lambda) {
  Coordinates out;
  out.reserve(a.size() + hull.size());
  for (const auto& [key, w] : a) out[key] += weight_a * w;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    out[hull[i].key] += (1.0 - weight_a) * lambda[static_cast<Eigen::Index>(i)];
  }
  double total = 0.0;
  for (auto it = out.begin(); it != out.end();) {
    if (it->second < kCoordFloor) {
      it = out.erase(it);
    } else {
      total += it->second;
      ++it;
    }
  }
  for (auto& entry : out) entry.second /= total;
  return out;
}

Coordinates hull_coordinates(const std::vector<Vertex>& hull, const Vector& lambda) {
  return mix({}, 0.0, hull, lambda);
}

CGStepReport inner_step(const LacgConfig& cfg, const QuadraticObjective& obj,
                        const Polytope& polytope, LacgState& state) {
  if (cfg.inner_cg == InnerCG::pfw) {
    return pfw_iteration(obj, polytope, state.afw, cfg.step_rule, &state.afw_probe);
  }
  return afw_iteration(obj, polytope, state.afw, cfg.step_rule, &state.afw_probe);
}

}  // namespace

void LacgConfig::validate() const {
  if (!(eps_target > 0.0)) throw std::invalid_argument("eps_target must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(cull_threshold >= 0.0)) throw std::invalid_argument("cull_threshold must be nonnegative");
}

Coordinates coordinates_of(const ActiveSet& as) {
  Coordinates c;
  for (std::size_t i = 0; i < as.size(); ++i) c[as.vertices()[i].key] = as.weights()[i];
  return c;
}

LacgState lacg_init(const QuadraticObjective& obj, const Polytope& polytope, const Vertex& x0,
                    const LacgConfig& cfg) {
  cfg.validate();
  if (x0.point.size() != obj.dim() || polytope.dim() != obj.dim()) {
    throw std::invalid_argument("lacg: dimension mismatch");
  }
  LacgState s;
  s.afw = ActiveSet(x0);
  s.afw_probe = probe(obj, polytope, x0.point);
  s.acc = make_acc_state(obj, x0);
  s.x_out = x0.point;
  s.f_out = s.afw_probe.f;
  if (cfg.enhancement_enabled) s.out_coords[x0.key] = 1.0;
  return s;
}

EnhancementOutcome enhancement_select(LacgState& state, const QuadraticObjective& obj,
                                      const Polytope& polytope, const Vector& x_hat,
                                      double f_hat, const Coordinates& hat_coords) {
  EnhancementOutcome out;
  const double f_afw = state.afw_probe.f;
  const bool keep = !strictly_better(f_afw, state.f_out) && !strictly_better(f_hat, state.f_out);
  if (!keep) {
    if (strictly_better(f_afw, f_hat)) {
      out.choice = OutputChoice::afw;
      state.x_out = state.afw.point();
      state.f_out = f_afw;
      state.out_coords = coordinates_of(state.afw);
    } else {
      out.choice = OutputChoice::accelerated;
      state.x_out = x_hat;
      state.f_out = f_hat;
      state.out_coords = hat_coords;
    }
    return out;
  }

  out.choice = OutputChoice::kept;
  if (state.f_out > f_afw) return out;
  const auto& hull = state.acc.hull_vertices();
  for (const auto& v : hull) {
    if (!state.afw.contains(v.key)) return out;
  }
  std::unordered_set<VertexKey, VertexKeyHash> hull_keys;
  for (const auto& v : hull) hull_keys.insert(v.key);
  for (const auto& [key, w] : state.out_coords) {
    if (!hull_keys.contains(key)) return out;
  }

  std::vector<Vertex> vertices;
  std::vector<double> weights;
  for (const auto& v : hull) {
    auto it = state.out_coords.find(v.key);
    if (it == state.out_coords.end()) continue;
    vertices.push_back(v);
    weights.push_back(it->second);
  }
  state.afw.assign(std::move(vertices), std::move(weights));
  state.afw_probe = probe(obj, polytope, state.afw.point());
  out.transplanted = true;
  // Pruning inside assign can move the point by rounding; never let the CG
  // sequence end up below the output.
  if (state.afw_probe.f < state.f_out) {
    state.x_out = state.afw.point();
    state.f_out = state.afw_probe.f;
  }
  state.out_coords = coordinates_of(state.afw);
  return out;
}

LacgIterationReport lacg_iteration(LacgState& state, const QuadraticObjective& obj,
                                   const Polytope& polytope, const LacgConfig& cfg) {
  LacgIterationReport rep;
  rep.k = ++state.k;
  AccState& acc = state.acc;

  // (1) independent CG step
  rep.cg = inner_step(cfg, obj, polytope, state);
  state.afw_probe = probe(obj, polytope, state.afw.point());
  rep.f_afw = state.afw_probe.f;
  rep.wolfe_gap = state.afw_probe.wolfe_gap;

  // (2), (3) accelerated step coupled to the current output
  advance_weights(acc);
  acc.x = state.x_out;
  const double ratio = acc.a / acc.A;
  const std::vector<Vertex> step_hull = acc.hull_vertices();
  AccStepResult step = acc_step(acc, obj, subproblem_tolerance(acc, cfg.eps_target));
  rep.hull_status = step.hull.status;
  rep.hull_gap = step.hull.certified_gap;
  Vector x_hat = std::move(step.x_hat);
  double f_hat = 0.0;
  Vector grad_hat;
  if (cfg.early_restart_enabled) {
    f_hat = obj.eval_with_grad(x_hat, grad_hat);
  } else {
    f_hat = obj.eval(x_hat);
  }
  Coordinates hat_coords;
  if (cfg.enhancement_enabled) hat_coords = mix(state.out_coords, 1.0 - ratio, step_hull, acc.lambda_w);

  // (4) restart or flag/freeze bookkeeping
  if (cfg.early_restart_enabled && acc.restart_flag) {
    const double threshold = cfg.eps_target / std::sqrt(acc.mu * acc.L);
    rep.early_restart = acc.restart_counter < acc.H &&
                        hull_wolfe_gap(acc, grad_hat, x_hat) <= threshold;
  }
  bool lambda_exact = true;
  if (acc.restart_flag && (acc.restart_counter >= acc.H || rep.early_restart)) {
    const bool from_afw = strictly_better(rep.f_afw, f_hat);
    const Vector y = from_afw ? state.afw.point() : x_hat;
    std::optional<Vector> warm;
    if (from_afw) {
      warm = Eigen::Map<const Vector>(state.afw.weights().data(),
                                      static_cast<Eigen::Index>(state.afw.size()));
    }
    HullSolution sol = restart(acc, obj, y, state.afw.vertices(),
                               std::max(cfg.eps_target / 8.0, 1e-14), warm);
    if (sol.status != SolveStatus::converged) rep.hull_status = sol.status;
    rep.hull_gap = std::max(rep.hull_gap, sol.certified_gap);
    x_hat = sol.point;
    f_hat = obj.eval(x_hat);
    if (cfg.enhancement_enabled) hat_coords = hull_coordinates(acc.hull_vertices(), sol.lambda);
    rep.restarted = true;
  } else {
    rep.early_restart = false;
    if (rep.cg.vertex_added) acc.restart_flag = true;
    if (!acc.restart_flag) {
      if (!acc.hull.same_keys(state.afw.vertices())) {
        acc.set_hull(state.afw.vertices());
        lambda_exact = false;
      }
    } else {
      rep.hull_frozen = true;
    }
  }
  if (cfg.culling_enabled && lambda_exact) rep.culled = cull_active_set(acc, cfg.cull_threshold);
  rep.f_hat = f_hat;

  // (5) output selection
  if (cfg.enhancement_enabled) {
    const EnhancementOutcome e = enhancement_select(state, obj, polytope, x_hat, f_hat, hat_coords);
    rep.choice = e.choice;
    rep.transplanted = e.transplanted;
    rep.f_afw = state.afw_probe.f;
    rep.wolfe_gap = state.afw_probe.wolfe_gap;
  } else {
    rep.choice = OutputChoice::kept;
    double best = state.f_out;
    if (strictly_better(f_hat, best)) {
      rep.choice = OutputChoice::accelerated;
      best = f_hat;
    }
    if (strictly_better(rep.f_afw, best)) {
      rep.choice = OutputChoice::afw;
      best = rep.f_afw;
    }
    if (rep.choice == OutputChoice::accelerated) state.x_out = x_hat;
    if (rep.choice == OutputChoice::afw) state.x_out = state.afw.point();
    state.f_out = best;
  }
  acc.x = state.x_out;
  rep.f_out = state.f_out;

  // (6)
  ++acc.restart_counter;
  return rep;
}

RunTrace run(const QuadraticObjective& obj, const Polytope& polytope, const Vertex& x0,
             const LacgConfig& cfg, const LacgObserver& observer) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  LacgState state = lacg_init(obj, polytope, x0, cfg);

  RunTrace trace;
  trace.algorithm = cfg.inner_cg == InnerCG::pfw ? "lacg-pfw" : "lacg-afw";
  trace.seed = cfg.seed;
  TraceRow row0;
  row0.iter = 0;
  row0.f = state.f_out;
  row0.wolfe_gap = state.afw_probe.wolfe_gap;
  row0.active_set_size = state.afw.size();
  row0.cset_size = state.acc.hull.size();
  row0.step_type = "init";
  row0.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();
  trace.rows.push_back(row0);

  double gap = state.afw_probe.wolfe_gap;
  while (gap > cfg.eps_target && state.k < cfg.max_iters) {
    const LacgIterationReport rep = lacg_iteration(state, obj, polytope, cfg);
    gap = rep.wolfe_gap;
    if (rep.hull_status != SolveStatus::converged) {
      trace.numerical_flag = true;
      ++trace.hull_failures;
    }
    TraceRow row;
    row.iter = rep.k;
    row.f = rep.f_out;
    row.wolfe_gap = rep.wolfe_gap;
    row.active_set_size = state.afw.size();
    row.cset_size = state.acc.hull.size();
    row.step_type = rep.choice == OutputChoice::accelerated ? "Acc" : std::string(to_string(rep.cg.step_type));
    row.restarted = rep.restarted;
    row.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();
    trace.rows.push_back(std::move(row));
    if (observer) observer(state, rep);
  }
  trace.status = gap <= cfg.eps_target ? RunStatus::converged : RunStatus::budget_exhausted;
  trace.solution = state.x_out;
  return trace;
}

}  // namespace lacg
