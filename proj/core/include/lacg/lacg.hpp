#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>

#include "lacg/accel.hpp"
#include "lacg/active_set.hpp"
#include "lacg/cg.hpp"
#include "lacg/trace.hpp"

namespace lacg {

enum class InnerCG { afw, pfw };

struct LacgConfig {
  InnerCG inner_cg = InnerCG::afw;
  double eps_target = 1e-8;
  int max_iters = 20000;
  bool enhancement_enabled = false;
  bool early_restart_enabled = false;
  bool culling_enabled = false;
  double cull_threshold = 1e-12;
  StepRule step_rule = StepRule::exact;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on eps_target <= 0 or max_iters < 1.
  void validate() const;
};

/// Barycentric coordinates keyed by vertex identity.
using Coordinates = std::unordered_map<VertexKey, double, VertexKeyHash>;

struct LacgState {
  ActiveSet afw;      // independent CG sequence x^AFW over S^AFW
  FwProbe afw_probe;  // gradient, LMO answer and Wolfe gap at afw.point()
  AccState acc;
  Vector x_out;  // monotone output
  double f_out = 0.0;
  int k = 0;
  Coordinates out_coords;  // coordinates of x_out; kept only with enhancement
};

enum class OutputChoice { kept, accelerated, afw };

struct LacgIterationReport {
  int k = 0;
  CGStepReport cg;
  double f_afw = 0.0;
  double f_hat = 0.0;
  double f_out = 0.0;
  double wolfe_gap = 0.0;  // at the new x^AFW
  OutputChoice choice = OutputChoice::kept;
  bool restarted = false;
  bool early_restart = false;
  bool hull_frozen = false;  // C was carried over unchanged by the freeze rule
  bool transplanted = false;
  std::size_t culled = 0;
  SolveStatus hull_status = SolveStatus::converged;
  double hull_gap = 0.0;
};

LacgState lacg_init(const QuadraticObjective& obj, const Polytope& polytope, const Vertex& x0,
                    const LacgConfig& cfg);

/// One iteration in the order: CG step on the independent sequence; advance
/// a and A; accelerated step coupled to x_out; restart (when the flag is up
/// and r_c >= H, or on an early-restart certificate) else flag/freeze
/// bookkeeping; optional culling of C; output selection; r_c += 1.
LacgIterationReport lacg_iteration(LacgState& state, const QuadraticObjective& obj,
                                   const Polytope& polytope, const LacgConfig& cfg);

struct EnhancementOutcome {
  OutputChoice choice = OutputChoice::kept;
  bool transplanted = false;
};

/// Output selection with transplant: when the previous output is at least as
/// good as both candidates it is kept, and if additionally vertices(C) is a
/// subset of S^AFW and x_out is supported on C, the CG sequence is moved to
/// x_out with S^AFW = vertices(C). Otherwise x_out becomes the better of
/// x^AFW and x_hat.
EnhancementOutcome enhancement_select(LacgState& state, const QuadraticObjective& obj,
                                      const Polytope& polytope, const Vector& x_hat,
                                      double f_hat, const Coordinates& hat_coords);

using LacgObserver = std::function<void(const LacgState&, const LacgIterationReport&)>;

/// Iterates until the Wolfe gap of the CG sequence is <= eps_target or
/// max_iters is reached. One trace row per iteration plus the initial row.
RunTrace run(const QuadraticObjective& obj, const Polytope& polytope, const Vertex& x0,
             const LacgConfig& cfg, const LacgObserver& observer = {});

Coordinates coordinates_of(const ActiveSet& as);

}  // namespace lacg
