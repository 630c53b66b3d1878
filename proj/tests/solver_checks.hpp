#pragma once

// Checks shared by the solver unit tests and the acceptance suite.

#include "certqp/dr_solver.hpp"
#include "certqp/instance_lab.hpp"
#include "certqp/pp_solver.hpp"

#include <algorithm>
#include <cmath>

namespace testutil {

using namespace certqp;

struct IdentityErrors {
  double primal = 0.0;
  double dual = 0.0;
};

/// Relative disagreement of the two residual evaluations of the DR iterate:
/// ||direct - from_deltas||_inf / (1 + scale), scale the size of the terms.
inline IdentityErrors dr_identity_errors(const DrSolver& solver) {
  const auto& s = solver.state();
  const auto& p = solver.problem();
  const IterateResiduals r = solver.residuals();
  const double scale = std::max({inf_norm(p.A() * s.x_prev), inf_norm(s.v_prev), inf_norm(s.x_prev),
                                 inf_norm(p.Q() * s.x_prev), inf_norm(p.q()),
                                 inf_norm(p.A().transpose() * s.v_prev)});
  return {inf_norm(r.primal_direct - r.primal_from_deltas) / (1.0 + scale),
          inf_norm(r.dual_direct - r.dual_from_deltas) / (1.0 + scale)};
}

/// Absolute disagreement of the PP residual evaluations, and the bound it must
/// respect: max(1e-10 (1 + scale), 10 inner_tol / gamma).
struct PpIdentityCheck {
  IdentityErrors error;
  double bound_primal;
  double bound_dual;
  bool passed() const { return error.primal <= bound_primal && error.dual <= bound_dual; }
};

inline PpIdentityCheck pp_identity_check(const PpSolver& solver) {
  const auto& s = solver.state();
  const auto& p = solver.problem();
  const double g = solver.config().gamma;
  const IterateResiduals r = solver.residuals();
  const double scale = std::max({inf_norm(p.A() * s.x), inf_norm(s.v), inf_norm(s.x),
                                 inf_norm(p.Q() * s.x), inf_norm(p.q()), inf_norm(s.y / g),
                                 inf_norm(p.A().transpose() * s.y)});
  const double floor = 1e-10 * (1.0 + scale);
  return {{inf_norm(r.primal_direct - r.primal_from_deltas),
           inf_norm(r.dual_direct - r.dual_from_deltas)},
          floor,
          std::max(floor, 10.0 * s.inner_tol / g)};
}

/// The limit identities of the difference sequences, evaluated at a finite
/// iterate. `inv_step` is 1/alpha (DR) or 1/gamma (PP); `with_A_term` adds
/// ||A dx||^2 to the dx identity (DR only).
struct DeltaIdentities {
  double dx_residual;   ///< |<q, dx> + c (||dx||^2 [+ ||A dx||^2])|
  double dx_bound;      ///< 1e-4 (1 + ||dx||^2)
  double dy_residual;   ///< |sigma_C(dy) + c ||dy||^2|
  double dy_bound;      ///< 1e-4 (1 + ||dy||^2)
  bool dy_used_candidate;  ///< sigma_C(dy) was infinite; its polar-recession part was used
  bool passed() const { return dx_residual <= dx_bound && dy_residual <= dy_bound; }
};

inline DeltaIdentities delta_identities(const ProblemData& p, const Vector& dx, const Vector& dy,
                                        double inv_step, bool with_A_term) {
  DeltaIdentities out{};
  double sq = dx.squaredNorm();
  if (with_A_term) sq += (p.A() * dx).squaredNorm();
  out.dx_residual = std::abs(p.q().dot(dx) + inv_step * sq);
  out.dx_bound = 1e-4 * (1.0 + dx.squaredNorm());

  Vector y = dy;
  double s = support(p.C(), y);
  out.dy_used_candidate = !std::isfinite(s);
  if (out.dy_used_candidate) {
    y = primal_certificate_candidate(p, dy);
    s = support(p.C(), y);
  }
  out.dy_residual = std::isfinite(s) ? std::abs(s + inv_step * y.squaredNorm()) : INFINITY;
  out.dy_bound = 1e-4 * (1.0 + y.squaredNorm());
  return out;
}

/// Angle in radians between two nonzero vectors.
inline double angle_between(const Vector& a, const Vector& b) {
  const Vector ua = a / a.norm();
  const Vector ub = b / b.norm();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

/// Random state pairs for nonexpansiveness checks.
inline Vector random_state(SplitMix64& rng, Index len, double scale) {
  return scale * rng.vector(len);
}

}  // namespace testutil
