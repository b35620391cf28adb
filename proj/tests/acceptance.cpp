// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lacg/accel.hpp"
#include "lacg/hungarian.hpp"
#include "lacg/instance.hpp"
#include "lacg/lacg.hpp"
#include "lacg/layered_dag.hpp"
#include "lacg/projection.hpp"
#include "lacg/runner.hpp"
#include "oracles.hpp"

using namespace lacg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome lower_bound_sanity() {
  GeneratorParams p;
  p.n = 100;
  const Instance inst = generate_instance("lb-instance", p);
  SolveOptions opt;
  opt.max_iters = 50;
  opt.eps = 1e-300;
  opt.f_star = 1.0 / 100.0;
  const RunTrace t = run_algorithm(inst, Algorithm::fw, opt);
  const double gap = *t.rows.at(50).primal_gap;
  const double formula = 1.0 / 51.0 - 1.0 / 100.0;
  const bool matches = std::abs(gap - formula) <= 1e-9;
  const bool above = gap >= 0.01;
  Outcome o;
  o.pass = matches && above;
  o.detail = fmt("gap(50) = %.12g, 1/(k+1) - 1/n = %.12g", gap, formula) +
             (matches ? " [formula ok]" : " [formula MISMATCH]") +
             (above ? " [>= 0.01 ok]" : " [>= 0.01 violated: 1/51 - 1/100 < 0.01]");
  return o;
}

Outcome muagd_rate() {
  GeneratorParams p;
  p.n = 20;
  p.mu = 1.0;
  p.L = 100.0;
  p.seed = 1;
  const Instance inst = generate_instance("simplex-quadratic", p);
  const Reference ref = compute_reference(inst);
  const QuadraticObjective& q = *inst.objective;
  const Vector y0 = inst.polytope->initial_vertex().point;
  const double theta = accel_theta(q.mu(), q.L());
  const double c0 = (q.L() - q.mu()) * (ref.x_star - y0).squaredNorm() / 2.0;

  SolveOptions opt;
  opt.eps = 1e-300;
  opt.max_iters = 500;
  opt.f_star = ref.f_star;
  const RunTrace t = run_algorithm(inst, Algorithm::muagd_fixed, opt);
  Outcome o;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : t.rows) {
    const double bound = std::pow(1.0 - theta, static_cast<double>(row.iter)) * c0 * (1.0 + 1e-6) + 1e-12;
    worst = std::max(worst, *row.primal_gap - bound);
    if (*row.primal_gap > bound) o.pass = false;
  }
  o.pass = o.pass && t.rows.back().iter == 500;
  o.detail = fmt("%g iterations, max(gap - bound) = %.3g, final gap %.3g",
                 static_cast<double>(t.rows.back().iter), worst, *t.rows.back().primal_gap);
  return o;
}

// LaCG traces on the bundled instances paired with H, shared with the
// restart check so the runs happen once.
std::vector<std::pair<RunTrace, double>>& bundled_lacg_traces() {
  static std::vector<std::pair<RunTrace, double>> traces;
  return traces;
}

Outcome monotone_and_dominant() {
  Outcome o;
  bundled_lacg_traces().clear();
  int instances = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const Instance& inst : bundled_instances()) {
    SolveOptions opt;
    opt.eps = 1e-8;
    opt.max_iters = 20000;
    const RunTrace afw = run_algorithm(inst, Algorithm::afw, opt);

    LacgConfig cfg;
    cfg.eps_target = opt.eps;
    cfg.max_iters = opt.max_iters;
    double prev = std::numeric_limits<double>::infinity();
    const RunTrace lt = run(*inst.objective, *inst.polytope, inst.polytope->initial_vertex(), cfg,
                            [&](const LacgState& s, const LacgIterationReport& r) {
                              if (r.f_out > prev + 1e-12) o.pass = false;
                              if (s.f_out > s.afw_probe.f + 1e-12) o.pass = false;
                              const auto k = static_cast<std::size_t>(r.k);
                              const double f_afw =
                                  k < afw.rows.size() ? afw.rows[k].f : afw.rows.back().f;
                              worst = std::max(worst, r.f_out - f_afw);
                              if (r.f_out > f_afw + 1e-12) o.pass = false;
                              prev = r.f_out;
                            });
    bundled_lacg_traces().emplace_back(lt, compute_H(inst.objective->mu(), inst.objective->L()).value);
    ++instances;
  }
  o.detail = fmt("%g instances, max f(x_out,k) - f(x_k^AFW) = %.3g", instances, worst);
  return o;
}

struct LocalAccelData {
  RunTrace lacg;
  RunTrace afw;
};

LocalAccelData& local_accel_runs() {
  static LocalAccelData data = [] {
    GeneratorParams p;
    p.n = 500;
    p.mu = 1.0;
    p.L = 1000.0;
    p.seed = 1;
    const Instance inst = generate_instance("simplex-quadratic", p);
    const Reference ref = compute_reference(inst);
    SolveOptions opt;
    opt.eps = 1e-8;
    opt.max_iters = 40000;
    opt.f_star = ref.f_star;
    const std::vector<Algorithm> algs{Algorithm::lacg_afw, Algorithm::afw};
    auto traces = compare(inst, algs, opt);
    return LocalAccelData{std::move(traces[0]), std::move(traces[1])};
  }();
  return data;
}

Outcome restart_discipline() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logu(-3.0, 6.0);
  double worst_formula = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double mu = std::pow(10.0, logu(rng));
    const double L = mu * std::pow(10.0, std::abs(logu(rng)) + 0.31);  // L/mu > 2
    const double h1 = compute_H(mu, L).value;
    const double theta = std::sqrt(mu / (2.0 * L));
    const double h2 = restart_period_from_theta(theta);
    const long double ref = (2.0L / std::sqrt(static_cast<long double>(mu) / (2.0L * L))) *
                            std::log(static_cast<long double>(L) / mu - 1.0L);
    const double err = std::max(std::abs(h1 - h2), static_cast<double>(std::abs(h1 - ref))) /
                       std::max(1.0, h1);
    worst_formula = std::max(worst_formula, err);
    if (err > 1e-12) o.pass = false;
  }

  std::vector<std::pair<RunTrace, double>> traces = bundled_lacg_traces();
  if (traces.empty()) {
    for (const Instance& inst : bundled_instances()) {
      SolveOptions opt;
      opt.eps = 1e-8;
      opt.max_iters = 20000;
      traces.emplace_back(run_algorithm(inst, Algorithm::lacg_afw, opt),
                          compute_H(inst.objective->mu(), inst.objective->L()).value);
    }
  }
  traces.emplace_back(local_accel_runs().lacg, compute_H(1.0, 1000.0).value);
  std::int64_t restarts = 0;
  std::int64_t min_spacing = std::numeric_limits<std::int64_t>::max();
  for (const auto& [t, H] : traces) {
    std::int64_t last = 0;
    for (const auto& row : t.rows) {
      if (!row.restarted || row.iter == 0) continue;
      ++restarts;
      min_spacing = std::min(min_spacing, row.iter - last);
      if (static_cast<double>(row.iter - last) < std::ceil(H)) o.pass = false;
      last = row.iter;
    }
  }
  o.detail = fmt("max relative H formula error %.2g; %g restarts, min spacing %g", worst_formula,
                 static_cast<double>(restarts), static_cast<double>(min_spacing));
  o.detail += fmt(" (ceil H = %g for kappa 1000)", std::ceil(compute_H(1.0, 1000.0).value));
  return o;
}

std::int64_t first_reaching(const RunTrace& t, double target) {
  for (const auto& row : t.rows) {
    if (*row.primal_gap <= target) return row.iter;
  }
  return -1;
}

Outcome local_acceleration() {
  const LocalAccelData& d = local_accel_runs();
  const double theta = accel_theta(1.0, 1000.0);
  std::int64_t last_restart = 0;
  for (const auto& row : d.lacg.rows) {
    if (row.restarted) last_restart = row.iter;
  }
  // Least squares slope of ln(gap) against iteration after the last restart,
  // while the gap is above the accuracy of the reference value.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& row : d.lacg.rows) {
    if (row.iter <= last_restart || *row.primal_gap <= 1e-11) continue;
    const double x = static_cast<double>(row.iter), y = std::log(*row.primal_gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  const double slope = n >= 10 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  const double threshold = -theta / 2.0 + 0.1 * theta;
  const std::int64_t k_lacg = first_reaching(d.lacg, 1e-8);
  const std::int64_t k_afw = first_reaching(d.afw, 1e-8);
  Outcome o;
  o.pass = n >= 10 && slope <= threshold && k_lacg >= 0 && (k_afw < 0 || k_lacg < k_afw);
  o.detail = fmt("slope %.4g over %g rows (threshold %.4g)", slope, n, threshold) +
             fmt(", gap 1e-8 at k = %g (LaCG-AFW) vs %g (AFW)", static_cast<double>(k_lacg),
                 static_cast<double>(k_afw));
  return o;
}

Outcome warmup_variant() {
  GeneratorParams p;
  p.n = 30;
  p.mu = 1.0;
  p.L = 100.0;
  p.interior_optimum = true;
  p.seed = 1;
  const Instance inst = generate_instance("simplex-quadratic", p);
  const Reference ref = compute_reference(inst);
  SolveOptions opt;
  opt.eps = 1e-300;
  opt.max_iters = 600;
  opt.f_star = ref.f_star;
  const RunTrace t = run_algorithm(inst, Algorithm::warmup_lacg, opt);

  std::int64_t last_reject = 0;
  for (const auto& row : t.rows) {
    if (row.step_type == "Reset") last_reject = row.iter;
  }
  const double bound = 1.0 - std::sqrt(1.0 / 100.0) + 0.05;
  const int window = 50;
  double worst = 0.0;
  int windows = 0;
  for (std::size_t i = static_cast<std::size_t>(last_reject) + 1; i + window < t.rows.size(); ++i) {
    const double g0 = *t.rows[i].primal_gap, g1 = *t.rows[i + window].primal_gap;
    if (g1 <= 1e-12) break;
    worst = std::max(worst, std::pow(g1 / g0, 1.0 / window));
    ++windows;
  }
  Outcome o;
  const bool stabilized = last_reject + 100 < t.rows.back().iter;
  o.pass = stabilized && windows > 0 && worst <= bound;
  o.detail = fmt("last rejected step %g of %g", static_cast<double>(last_reject),
                 static_cast<double>(t.rows.back().iter)) +
             fmt(", worst windowed ratio %.4f over %g windows", worst, windows) + fmt(" (bound %.4f)", bound);
  return o;
}

Outcome oracle_equivalences() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 50);
  Outcome o;

  double proj_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 1 + t % 6;
    Vector y(m);
    for (int i = 0; i < m; ++i) y[i] = 2.0 * gauss(rng);
    proj_err = std::max(proj_err, (project_simplex(y) - oracle::project_simplex_kkt(y)).lpNorm<Eigen::Infinity>());
  }
  if (proj_err > 1e-9) o.pass = false;

  int hungarian_mismatch = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 7;
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = small(rng);
    const std::vector<int> a = min_cost_assignment(cost);
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += cost(i, a[i]);
    if (v != oracle::min_assignment_brute(cost)) ++hungarian_mismatch;
  }
  if (hungarian_mismatch) o.pass = false;

  int dag_mismatch = 0, dag_cases = 0;
  for (int layers = 1; layers <= 3; ++layers) {
    for (int width = 1; width <= 3; ++width) {
      const LayeredDAG g = make_layered_dag(layers, width);
      const auto paths = oracle::all_paths(g.num_nodes, g.edges, g.source, g.sink);
      for (int t = 0; t < 20; ++t, ++dag_cases) {
        Vector c(static_cast<Eigen::Index>(g.edges.size()));
        for (Eigen::Index e = 0; e < c.size(); ++e) c[e] = small(rng);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& path : paths) {
          double v = 0.0;
          for (int e : path) v += c[e];
          best = std::min(best, v);
        }
        if (c.dot(lmo_dag_flow(c, g).point) != best) ++dag_mismatch;
      }
    }
  }
  if (dag_mismatch) o.pass = false;

  double hull_err = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 6, n = 6;
    std::vector<Vertex> hull;
    DenseMatrix V(n, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) V(i, j) = gauss(rng);
      hull.push_back({V.col(j), VertexKey{{j}}});
    }
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = 2.0 * gauss(rng);
    const double sigma = 0.5 + std::abs(gauss(rng));
    const HullSubproblem sub = HullSubproblem::build(hull, z, sigma);
    const HullSolution sol = solve_hull_subproblem(sub, 1e-10);
    const auto ref = oracle::simplex_qp_kkt(sigma * V.transpose() * V, -V.transpose() * z);
    hull_err = std::max(hull_err, std::abs(sub.value(sol.lambda) - ref.value));
  }
  if (hull_err > 1e-6) o.pass = false;

  o.detail = fmt("projection max err %.2g, hull value max err %.2g", proj_err, hull_err) +
             fmt(", assignment mismatches %g/200, path mismatches %g/%g", hungarian_mismatch,
                 dag_mismatch, dag_cases);
  return o;
}

Outcome feasibility_sweep() {
  std::vector<Instance> instances;
  for (Instance& inst : bundled_instances()) {
    if (inst.polytope_spec.kind != "dag_flow") instances.push_back(std::move(inst));
  }
  GeneratorParams p;
  p.n = 5;
  p.density = 0.2;
  p.seed = 11;
  instances.push_back(generate_instance("birkhoff-gram", p));
  p = GeneratorParams{};
  p.n = 25;
  p.L = 50.0;
  p.interior_optimum = true;
  p.seed = 12;
  instances.push_back(generate_instance("simplex-quadratic", p));

  Outcome o;
  long checked = 0, violations = 0, runs = 0;
  for (const Instance& inst : instances) {
    for (std::size_t a = 0; a < std::size(kAlgorithmNames); ++a) {
      for (int variant = 0; variant < 2; ++variant) {
        const auto alg = static_cast<Algorithm>(a);
        const bool is_lacg = alg == Algorithm::lacg_afw || alg == Algorithm::lacg_pfw;
        if (variant == 1 && !is_lacg) continue;
        SolveOptions opt;
        opt.eps = 1e-8;
        opt.max_iters = 3000;
        opt.enhancement = variant == 1;
        opt.early_restart = variant == 1;
        opt.culling = variant == 1;
        try {
          run_algorithm(inst, alg, opt, [&](std::int64_t, const Vector& x) {
            ++checked;
            if (!inst.polytope->contains(x, 1e-8).value_or(false)) ++violations;
          });
          ++runs;
        } catch (const UsageError&) {
          // muagd-fixed on polytopes with too many vertices.
        }
      }
    }
  }
  o.pass = violations == 0 && runs > 0;
  o.detail = fmt("%g runs, %g iterates checked, %g outside", static_cast<double>(runs),
                 static_cast<double>(checked), static_cast<double>(violations));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"lower-bound sanity", lower_bound_sanity},
      {"muAGD+ rate on fixed hull", muagd_rate},
      {"monotonicity and AFW dominance", monotone_and_dominant},
      {"restart discipline", restart_discipline},
      {"local acceleration", local_acceleration},
      {"warm-up variant", warmup_variant},
      {"oracle equivalences", oracle_equivalences},
      {"feasibility sweep", feasibility_sweep},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-32s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
