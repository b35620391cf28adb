#include "lacg/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "lacg/accel.hpp"
#include "lacg/lacg.hpp"
#include "lacg/warmup.hpp"

namespace lacg {

std::string_view to_string(Algorithm alg) {
  return kAlgorithmNames[static_cast<std::size_t>(alg)];
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kAlgorithmNames); ++i) {
    if (kAlgorithmNames[i] == name) return static_cast<Algorithm>(i);
  }
  return std::nullopt;
}

namespace {

using clock_type = std::chrono::steady_clock;

// Collects trace rows and forwards iterates to the observer.
class Recorder {
 public:
  Recorder(RunTrace& trace, const IterateObserver& observer)
      : trace_(trace), observer_(observer), start_(clock_type::now()) {}

  void add(std::int64_t iter, const Vector& x, double f, double wolfe_gap, std::size_t active,
           std::size_t cset, std::string step, bool restarted = false) {
    TraceRow row;
    row.iter = iter;
    row.elapsed_s = std::chrono::duration<double>(clock_type::now() - start_).count();
    row.f = f;
    row.wolfe_gap = wolfe_gap;
    row.active_set_size = active;
    row.cset_size = cset;
    row.step_type = std::move(step);
    row.restarted = restarted;
    trace_.rows.push_back(std::move(row));
    if (observer_) observer_(iter, x);
  }

 private:
  RunTrace& trace_;
  const IterateObserver& observer_;
  clock_type::time_point start_;
};

void finish(RunTrace& trace, bool converged) {
  trace.status = converged ? RunStatus::converged : RunStatus::budget_exhausted;
}

RunTrace run_cg(const Instance& inst, Algorithm alg, const SolveOptions& opt,
                const IterateObserver& observer) {
  const QuadraticObjective& obj = *inst.objective;
  const Polytope& poly = *inst.polytope;
  RunTrace trace;
  Recorder rec(trace, observer);
  ActiveSet as(poly.initial_vertex());
  FwProbe p = probe(obj, poly, as.point());
  rec.add(0, as.point(), p.f, p.wolfe_gap, as.size(), 0, "init");
  int k = 0;
  while (p.wolfe_gap > opt.eps && k < opt.max_iters) {
    CGStepReport rep;
    switch (alg) {
      case Algorithm::fw:
        rep = fw_iteration(obj, poly, as, opt.step_rule, &p);
        break;
      case Algorithm::pfw:
        rep = pfw_iteration(obj, poly, as, opt.step_rule, &p);
        break;
      default:
        rep = afw_iteration(obj, poly, as, opt.step_rule, &p);
        break;
    }
    p = probe(obj, poly, as.point());
    ++k;
    rec.add(k, as.point(), p.f, p.wolfe_gap, as.size(), 0, std::string(to_string(rep.step_type)));
  }
  finish(trace, p.wolfe_gap <= opt.eps);
  trace.solution = as.point();
  return trace;
}

RunTrace run_muagd_fixed(const Instance& inst, const SolveOptions& opt,
                         const IterateObserver& observer) {
  const QuadraticObjective& obj = *inst.objective;
  const Polytope& poly = *inst.polytope;
  auto vertices = poly.enumerate_vertices(kEnumerationLimit);
  if (!vertices) {
    throw UsageError("muagd-fixed needs a polytope with at most " +
                     std::to_string(kEnumerationLimit) + " vertices");
  }
  RunTrace trace;
  Recorder rec(trace, observer);
  const Vertex y0 = poly.initial_vertex();
  AccState acc = make_acc_state(obj, y0);
  const std::size_t m = vertices->size();
  HullSolution sol = restart(acc, obj, y0.point, std::move(*vertices), std::max(opt.eps / 8.0, 1e-14));
  auto note = [&](const HullSolution& s) {
    if (s.status != SolveStatus::converged) {
      trace.numerical_flag = true;
      ++trace.hull_failures;
    }
  };
  note(sol);
  Vector x = sol.point;
  FwProbe p = probe(obj, poly, x);
  rec.add(0, x, p.f, p.wolfe_gap, m, m, "init", true);
  int k = 0;
  while (p.wolfe_gap > opt.eps && k < opt.max_iters) {
    advance_weights(acc);
    acc.x = x;
    AccStepResult step = acc_step(acc, obj, subproblem_tolerance(acc, opt.eps));
    note(step.hull);
    if (obj.eval(step.x_hat) < p.f) x = std::move(step.x_hat);
    p = probe(obj, poly, x);
    ++k;
    rec.add(k, x, p.f, p.wolfe_gap, m, m, "Acc");
  }
  finish(trace, p.wolfe_gap <= opt.eps);
  trace.solution = x;
  return trace;
}

RunTrace run_warmup(const Instance& inst, const SolveOptions& opt, const IterateObserver& observer) {
  const QuadraticObjective& obj = *inst.objective;
  const Polytope& poly = *inst.polytope;
  if (!poly.has_membership() || !poly.has_tangent_projection()) {
    throw UsageError("warmup-lacg needs membership and the affine hull, unavailable for " +
                     poly.name());
  }
  RunTrace trace;
  Recorder rec(trace, observer);
  WarmupState s = make_warmup_state(obj, poly, poly.initial_vertex().point);
  FwProbe p = probe(obj, poly, s.x);
  rec.add(0, s.x, p.f, p.wolfe_gap, 0, 0, "init");
  int k = 0;
  while (p.wolfe_gap > opt.eps && k < opt.max_iters) {
    const WarmupReport r = warmup_iteration(s, obj, poly, &p);
    p = probe(obj, poly, s.x);
    ++k;
    rec.add(k, s.x, p.f, p.wolfe_gap, 0, 0, r.took_accel ? "Acc" : (r.accepted ? "FW" : "Reset"),
            !r.accepted);
  }
  finish(trace, p.wolfe_gap <= opt.eps);
  trace.solution = s.x;
  return trace;
}

RunTrace run_lacg(const Instance& inst, Algorithm alg, const SolveOptions& opt,
                  const IterateObserver& observer) {
  LacgConfig cfg;
  cfg.inner_cg = alg == Algorithm::lacg_pfw ? InnerCG::pfw : InnerCG::afw;
  cfg.eps_target = opt.eps;
  cfg.max_iters = opt.max_iters;
  cfg.enhancement_enabled = opt.enhancement;
  cfg.early_restart_enabled = opt.early_restart;
  cfg.culling_enabled = opt.culling;
  cfg.step_rule = opt.step_rule;
  cfg.seed = opt.seed;
  const Vertex x0 = inst.polytope->initial_vertex();
  if (observer) observer(0, x0.point);
  LacgObserver forward;
  if (observer) {
    forward = [&observer](const LacgState& s, const LacgIterationReport& r) { observer(r.k, s.x_out); };
  }
  return run(*inst.objective, *inst.polytope, x0, cfg, forward);
}

std::string real_string(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunTrace run_algorithm(const Instance& inst, Algorithm alg, const SolveOptions& opt,
                       const IterateObserver& observer) {
  if (!(opt.eps > 0.0)) throw UsageError("eps must be positive");
  if (opt.max_iters < 1) throw UsageError("max_iters must be at least 1");
  RunTrace trace;
  switch (alg) {
    case Algorithm::fw:
    case Algorithm::afw:
    case Algorithm::pfw:
      trace = run_cg(inst, alg, opt, observer);
      break;
    case Algorithm::lacg_afw:
    case Algorithm::lacg_pfw:
      trace = run_lacg(inst, alg, opt, observer);
      break;
    case Algorithm::muagd_fixed:
      trace = run_muagd_fixed(inst, opt, observer);
      break;
    case Algorithm::warmup_lacg:
      trace = run_warmup(inst, opt, observer);
      break;
  }
  trace.algorithm = std::string(to_string(alg));
  trace.instance_id = inst.id;
  trace.seed = opt.seed;
  trace.config = {
      {"eps", real_string(opt.eps)},
      {"max_iters", std::to_string(opt.max_iters)},
      {"step_rule", opt.step_rule == StepRule::exact ? "exact" : "short_step"},
      {"enhancement", opt.enhancement ? "true" : "false"},
      {"early_restart", opt.early_restart ? "true" : "false"},
      {"culling", opt.culling ? "true" : "false"},
      {"polytope", inst.polytope->name()},
      {"dim", std::to_string(inst.objective->dim())},
      {"L", real_string(inst.objective->L())},
      {"mu", real_string(inst.objective->mu())},
  };
  if (opt.f_star) {
    trace.config.emplace_back("f_star", real_string(*opt.f_star));
    trace.fill_primal_gap(*opt.f_star);
  }
  return trace;
}

Reference compute_reference(const Instance& inst, double gap, int max_iters) {
  const QuadraticObjective& obj = *inst.objective;
  const Polytope& poly = *inst.polytope;
  ActiveSet as(poly.initial_vertex());
  FwProbe p = probe(obj, poly, as.point());
  Reference ref;
  while (p.wolfe_gap > gap && ref.iterations < max_iters) {
    afw_iteration(obj, poly, as, StepRule::exact, &p);
    p = probe(obj, poly, as.point());
    ++ref.iterations;
  }
  ref.converged = p.wolfe_gap <= gap;
  ref.f_star = p.f;
  ref.x_star = as.point();
  ref.wolfe_gap = p.wolfe_gap;
  return ref;
}

std::string reference_to_json(const Reference& ref, const Instance& inst) {
  nlohmann::ordered_json j;
  j["instance"] = inst.id;
  j["f_star"] = ref.f_star;
  j["wolfe_gap"] = ref.wolfe_gap;
  j["iterations"] = ref.iterations;
  j["converged"] = ref.converged;
  nlohmann::ordered_json x = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < ref.x_star.size(); ++i) x.push_back(ref.x_star[i]);
  j["x_star"] = std::move(x);
  return j.dump() + "\n";
}

Reference reference_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Reference ref;
    ref.f_star = j.at("f_star").get<double>();
    ref.wolfe_gap = j.value("wolfe_gap", 0.0);
    ref.iterations = j.value("iterations", 0);
    ref.converged = j.value("converged", false);
    if (j.contains("x_star")) {
      const auto& x = j.at("x_star");
      ref.x_star.resize(static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i) ref.x_star[static_cast<Eigen::Index>(i)] = x[i].get<double>();
    }
    return ref;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("reference: ") + e.what());
  }
}

int thread_budget(int requested) {
  int budget = std::max(1, requested);
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0) budget = std::min(budget, static_cast<int>(hw));
  if (const char* env = std::getenv("LACG_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) budget = std::min(budget, static_cast<int>(cap));
  }
  return budget;
}

std::vector<RunTrace> compare(const Instance& inst, std::span<const Algorithm> algorithms,
                              const SolveOptions& options) {
  if (algorithms.size() < 2) throw UsageError("compare needs at least two algorithms");
  std::vector<RunTrace> traces(algorithms.size());
  std::vector<std::exception_ptr> errors(algorithms.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < algorithms.size(); i = next++) {
      try {
        traces[i] = run_algorithm(inst, algorithms[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = thread_budget(static_cast<int>(algorithms.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return traces;
}

}  // namespace lacg
