// lacg: instance generation, solver runs and paired comparisons.
//
//   lacg generate  --generator simplex-quadratic --n 200 --seed 1 --out inst.json
//   lacg reference --instance inst.json --out ref.json
//   lacg solve     --instance inst.json --alg lacg-afw --reference ref.json --out run.csv
//   lacg compare   --instance inst.json --alg afw --alg lacg-afw --out cmp.csv
//
// Exit codes: 0 target reached, 2 usage error, 3 iteration budget exhausted,
// 4 a numerical flag was raised and the target was not reached.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lacg/instance.hpp"
#include "lacg/runner.hpp"
#include "lacg/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumerical = 4;

int exit_code(const lacg::RunTrace& t) {
  if (t.status == lacg::RunStatus::converged) return kExitOk;
  return t.numerical_flag ? kExitNumerical : kExitBudget;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lacg::UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

lacg::Algorithm algorithm_or_throw(const std::string& name) {
  auto alg = lacg::parse_algorithm(name);
  if (!alg) throw lacg::UsageError("unknown algorithm '" + name + "'");
  return *alg;
}

struct SolveFlags {
  double eps = 1e-8;
  int max_iters = 20000;
  std::string step_rule = "exact";
  bool enhancement = false;
  bool early_restart = false;
  bool culling = false;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--eps", eps, "Target Wolfe gap")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "Iteration budget")->capture_default_str();
    cmd->add_option("--step-rule", step_rule, "exact or short")
        ->check(CLI::IsMember({"exact", "short"}))
        ->capture_default_str();
    cmd->add_flag("--enhancement", enhancement, "LaCG: transplant the CG sequence onto x_out");
    cmd->add_flag("--early-restart", early_restart, "LaCG: restart on a small hull Wolfe gap");
    cmd->add_flag("--culling", culling, "LaCG: drop zero-weight vertices of the hull");
    cmd->add_option("--seed", seed, "Run seed (recorded in metadata)")->capture_default_str();
  }

  lacg::SolveOptions options() const {
    lacg::SolveOptions o;
    o.eps = eps;
    o.max_iters = max_iters;
    o.step_rule = step_rule == "exact" ? lacg::StepRule::exact : lacg::StepRule::short_step;
    o.enhancement = enhancement;
    o.early_restart = early_restart;
    o.culling = culling;
    o.seed = seed;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally accelerated conditional gradients"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance as JSON");
  std::string generator, gen_out;
  lacg::GeneratorParams params;
  gen->add_option("--generator", generator, "simplex-quadratic, birkhoff-gram, dag-flow, l1-lasso, lb-instance")
      ->required();
  gen->add_option("--n", params.n, "Dimension (side length for birkhoff-gram)")->capture_default_str();
  gen->add_option("--mu", params.mu, "Strong convexity")->capture_default_str();
  gen->add_option("--L", params.L, "Smoothness")->capture_default_str();
  gen->add_option("--density", params.density, "Nonzero fraction of the Gram factor")->capture_default_str();
  gen->add_option("--tau", params.tau, "l1 ball radius")->capture_default_str();
  gen->add_option("--layers", params.layers, "DAG layers")->capture_default_str();
  gen->add_option("--width", params.width, "Nodes per DAG layer")->capture_default_str();
  gen->add_flag("--interior-optimum", params.interior_optimum,
                "simplex-quadratic: minimizer in the relative interior");
  gen->add_option("--seed", params.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file")->required();

  // reference
  auto* ref_cmd = app.add_subcommand("reference", "Solve to high accuracy and store f(x*)");
  std::string ref_instance, ref_out;
  double ref_gap = 1e-13;
  int ref_iters = 2000000;
  ref_cmd->add_option("--instance", ref_instance)->required()->check(CLI::ExistingFile);
  ref_cmd->add_option("--gap", ref_gap, "Wolfe gap to reach")->capture_default_str();
  ref_cmd->add_option("--max-iters", ref_iters)->capture_default_str();
  ref_cmd->add_option("--out", ref_out)->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Run one algorithm and write its trace");
  std::string solve_instance, solve_alg, solve_ref, solve_out;
  SolveFlags solve_flags;
  solve->add_option("--instance", solve_instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--alg", solve_alg, "fw, afw, pfw, lacg-afw, lacg-pfw, muagd-fixed, warmup-lacg")
      ->required();
  solve->add_option("--reference", solve_ref, "Reference JSON for the primal_gap column")
      ->check(CLI::ExistingFile);
  solve->add_option("--out", solve_out, "Trace CSV (stdout when omitted)");
  solve_flags.attach(solve);

  // compare
  auto* cmp = app.add_subcommand("compare", "Run several algorithms on one instance");
  std::string cmp_instance, cmp_ref, cmp_out;
  std::vector<std::string> cmp_algs;
  bool cmp_no_ref = false;
  SolveFlags cmp_flags;
  cmp->add_option("--instance", cmp_instance)->required()->check(CLI::ExistingFile);
  cmp->add_option("--alg", cmp_algs, "Algorithm (repeat, or comma separated)")
      ->required()
      ->delimiter(',');
  cmp->add_option("--reference", cmp_ref, "Reference JSON (computed when omitted)")
      ->check(CLI::ExistingFile);
  cmp->add_flag("--no-reference", cmp_no_ref, "Leave primal_gap empty");
  cmp->add_option("--out", cmp_out, "Long-format CSV (stdout when omitted)");
  cmp_flags.attach(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const lacg::Instance inst = lacg::generate_instance(generator, params);
      lacg::save_instance(inst, gen_out);
      std::cerr << "wrote " << inst.id << " (dim " << inst.objective->dim() << ") to " << gen_out << '\n';
      return kExitOk;
    }

    if (*ref_cmd) {
      const lacg::Instance inst = lacg::load_instance(ref_instance);
      const lacg::Reference ref = lacg::compute_reference(inst, ref_gap, ref_iters);
      write_text(ref_out, lacg::reference_to_json(ref, inst));
      std::cerr << "f* = " << ref.f_star << " (gap " << ref.wolfe_gap << ", " << ref.iterations
                << " iterations)\n";
      return ref.converged ? kExitOk : kExitBudget;
    }

    if (*solve) {
      const lacg::Instance inst = lacg::load_instance(solve_instance);
      lacg::SolveOptions opt = solve_flags.options();
      if (!solve_ref.empty()) opt.f_star = lacg::reference_from_json(slurp(solve_ref)).f_star;
      const lacg::RunTrace trace = lacg::run_algorithm(inst, algorithm_or_throw(solve_alg), opt);
      if (solve_out.empty()) {
        lacg::write_csv(std::cout, trace);
      } else {
        std::ofstream out(solve_out);
        if (!out) throw std::runtime_error("cannot write " + solve_out);
        lacg::write_csv(out, trace);
        write_text(solve_out + ".meta.json", lacg::metadata_json(trace));
      }
      return exit_code(trace);
    }

    if (*cmp) {
      std::vector<lacg::Algorithm> algs;
      for (const auto& name : cmp_algs) algs.push_back(algorithm_or_throw(name));
      if (algs.size() < 2) throw lacg::UsageError("compare needs at least two algorithms");
      const lacg::Instance inst = lacg::load_instance(cmp_instance);
      lacg::SolveOptions opt = cmp_flags.options();
      if (!cmp_ref.empty()) {
        opt.f_star = lacg::reference_from_json(slurp(cmp_ref)).f_star;
      } else if (!cmp_no_ref) {
        opt.f_star = lacg::compute_reference(inst).f_star;
      }
      const std::vector<lacg::RunTrace> traces = lacg::compare(inst, algs, opt);
      if (cmp_out.empty()) {
        lacg::write_long_csv(std::cout, traces);
      } else {
        std::ofstream out(cmp_out);
        if (!out) throw std::runtime_error("cannot write " + cmp_out);
        lacg::write_long_csv(out, traces);
      }
      int code = kExitOk;
      for (const auto& t : traces) code = std::max(code, exit_code(t));
      return code;
    }
  } catch (const std::invalid_argument& e) {
    // UsageError and argument errors from generators and loaders.
    std::cerr << "lacg: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lacg: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
