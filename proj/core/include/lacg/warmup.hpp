#pragma once

#include "lacg/cg.hpp"
#include "lacg/objective.hpp"
#include "lacg/polytope.hpp"

namespace lacg {

/// Accelerated FW for minimizers in the relative interior. The accelerated
/// sequence runs unconstrained inside the affine hull of the polytope and
/// its output is kept only while it passes the membership test.
struct WarmupState {
  Vector x;
  Vector w;
  double theta = 0.0;  // sqrt(mu / L)
};

struct WarmupReport {
  bool accepted = false;    // x_hat passed membership
  bool took_accel = false;  // x_hat was strictly better than the FW point
  double fw_gap = 0.0;      // Wolfe gap at the pre-step x
  double f = 0.0;           // f at the new x
};

/// Throws std::invalid_argument when the polytope lacks a membership test or
/// a tangent projection.
WarmupState make_warmup_state(const QuadraticObjective& obj, const Polytope& polytope,
                              const Vector& x0);

/// One iteration:
///   x_fw  = FW short step from x
///   y     = x/(1+theta) + theta w/(1+theta)
///   w'    = (1-theta) w + theta (y - P grad f(y) / mu)
///   x_hat = (1-theta) x + theta w'
/// If x_hat is feasible, x <- the better of x_fw, x_hat and w <- w';
/// otherwise x <- x_fw and w <- x. P projects onto the directions of the
/// affine hull, so w stays in it.
WarmupReport warmup_iteration(WarmupState& state, const QuadraticObjective& obj,
                              const Polytope& polytope, const FwProbe* pre = nullptr);

}  // namespace lacg
