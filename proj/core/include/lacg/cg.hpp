#pragma once

#include <string_view>

#include "lacg/active_set.hpp"
#include "lacg/objective.hpp"
#include "lacg/polytope.hpp"

namespace lacg {

enum class StepRule { exact, short_step };
enum class StepType { FW, Away, Drop, Pairwise };

std::string_view to_string(StepType type);

struct CGStepReport {
  StepType step_type = StepType::FW;
  double gamma = 0.0;
  double gamma_max = 1.0;
  double fw_gap = 0.0;  // <grad f(x), x - s> at the pre-step point
  bool vertex_added = false;
  bool vertex_dropped = false;
};

/// Gradient, objective value, FW vertex and Wolfe gap at a point. Passing a
/// probe to an iteration skips recomputing them.
struct FwProbe {
  Vector grad;
  double f = 0.0;
  Vertex fw_vertex;
  double wolfe_gap = 0.0;
};

FwProbe probe(const QuadraticObjective& obj, const Polytope& polytope, const Vector& x);

/// Step along d from a point with gradient `grad`, clamped to [0, gamma_max].
///   exact:      -<grad, d> / d'Md
///   short_step: -<grad, d> / (L |d|^2)
/// Returns 0 for d = 0 or ascent directions.
double step_size(const QuadraticObjective& obj, const Vector& grad, const Vector& d,
                 double gamma_max, StepRule rule);
double step_size_at(const QuadraticObjective& obj, const Vector& x, const Vector& d,
                    double gamma_max, StepRule rule);

struct FwStepResult {
  Vector x;
  CGStepReport report;
};

/// Plain FW update x + gamma (v - x) with v = lmo(grad f(x)).
FwStepResult fw_step(const QuadraticObjective& obj, const Polytope& polytope, const Vector& x,
                     StepRule rule = StepRule::exact);

/// FW update on an active set (keeps barycentric bookkeeping).
CGStepReport fw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                          StepRule rule, const FwProbe* pre = nullptr);

/// Away-step FW: picks the FW or away direction, whichever has the larger
/// slope, line-searches within gamma_max and prunes dropped vertices. The
/// away branch is disabled on singleton sets.
CGStepReport afw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                           StepRule rule, const FwProbe* pre = nullptr);

/// Pairwise FW: moves weight from the away vertex to the FW vertex,
/// gamma_max = weight of the away vertex.
CGStepReport pfw_iteration(const QuadraticObjective& obj, const Polytope& polytope, ActiveSet& as,
                           StepRule rule, const FwProbe* pre = nullptr);

}  // namespace lacg
