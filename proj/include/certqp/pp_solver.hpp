#pragma once

// Proximal-point iteration on the KKT operator
//
//   M(x, y) = ( Qx + q + A^T y ,  -Ax + d sigma_C(y) ),
//   (x_{n+1}, y_{n+1}) = (I + gamma M)^{-1} (x_n, y_n).
//
// The resolvent is evaluated by eliminating y_{n+1} = gamma (I - P_C)(A x_{n+1} + y_n / gamma)
// and solving the strongly monotone equation
//
//   F(x) = (I + gamma Q) x - x_n + gamma q + gamma^2 A^T (I - P_C)(A x + y_n / gamma) = 0
//
// with a semismooth Newton method (or a damped gradient-type fixed-point
// iteration). Auxiliary iterates: v_{n+1} = A x_{n+1} + y_n / gamma, z_{n+1} = P_C v_{n+1}.
//
// The inner solve is inexact; the convergence theory of the outer iteration
// assumes an exact resolvent. The default tolerance schedule keeps the inner
// error a thousand times below the outer residual, floored at 1e-12 (raised to
// the rounding level of F when iterates grow large).

#include "certqp/solve.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace certqp {

enum class InnerMethod { semismooth_newton, damped_fixed_point };

std::string_view to_string(InnerMethod m);
InnerMethod inner_method_from_string(std::string_view s);

struct PpConfig {
  double gamma = 1.0;
  InnerMethod inner_method = InnerMethod::semismooth_newton;
  /// Fixed inner tolerance on ||F||_inf; unset selects the adaptive schedule
  /// min(1e-10, 1e-3 * outer residual) floored at 1e-12.
  std::optional<double> inner_tol_abs;
  /// 0 selects 50 for Newton and 100000 for the fixed-point iteration.
  int inner_max_iter = 0;
  Tolerances tol;
  bool record_trace = false;
};

struct PpState {
  int iteration = 0;
  Vector x, y;
  Vector v, z;
  Vector dx, dy, dv, dz;
  int inner_iters = 0;
  /// Tolerance the last resolvent was solved to.
  double inner_tol = 0.0;
};

struct ResolventResult {
  Vector x;
  Vector y;
  int inner_iters = 0;
  double residual = 0.0;   ///< ||F(x)||_inf at return
  double tolerance = 0.0;  ///< effective tolerance that was met
};

class InnerSolveError : public std::runtime_error {
 public:
  InnerSolveError(const std::string& what, Vector best_x, double residual)
      : std::runtime_error(what), best_x_(std::move(best_x)), residual_(residual) {}

  const Vector& best_x() const { return best_x_; }
  double residual() const { return residual_; }

 private:
  Vector best_x_;
  double residual_;
};

class PpSolver {
 public:
  /// Throws std::invalid_argument for gamma <= 0, a non-positive fixed inner
  /// tolerance, or bad outer tolerances.
  PpSolver(ProblemData problem, PpConfig config);

  void warm_start(const Vector& x, const Vector& y);

  /// Evaluates the resolvent at (x_prev, y_prev) to ||F||_inf <= tol.
  /// `guess` seeds the inner iteration (defaults to x_prev).
  ResolventResult resolvent(const Vector& x_prev, const Vector& y_prev, double tol,
                            const Vector* guess = nullptr) const;

  /// F(x) for the resolvent at (x_prev, y_prev).
  Vector resolvent_residual(const Vector& x, const Vector& x_prev, const Vector& y_prev) const;

  void step();

  /// One outer step from (x, y) at a fixed inner tolerance, without touching the state.
  std::pair<Vector, Vector> apply(const Vector& x, const Vector& y, double inner_tol) const;

  /// Residuals of the current iterate (x_{n+1}, z_{n+1}, y_{n+1}):
  /// A x - P_C v against dy / gamma, and Q x + q + gamma A^T (I - P_C) v
  /// against -dx / gamma.
  IterateResiduals residuals() const;

  std::optional<SolveOutcome> check_termination() const;

  SolveOutcome run();

  const PpState& state() const { return state_; }
  const ProblemData& problem() const { return problem_; }
  const PpConfig& config() const { return config_; }
  /// Step size of the damped fixed-point iteration.
  double fixed_point_step() const { return tau_; }

  /// Inner tolerance the next step will request.
  double next_inner_tol() const;

 private:
  ResolventResult newton(const Vector& x_prev, const Vector& y_prev, double tol, Vector x) const;
  ResolventResult fixed_point(const Vector& x_prev, const Vector& y_prev, double tol,
                              Vector x) const;
  double rounding_floor(const Vector& x, const Vector& x_prev, const Vector& y_prev) const;
  ResolventResult finish(const Vector& x, const Vector& y_prev, int iters, double residual,
                         double tol) const;

  ProblemData problem_;
  PpConfig config_;
  double norm_Q_ = 0.0;
  double norm_A_ = 0.0;
  double tau_ = 0.0;
  PpState state_;
  double last_outer_residual_ = 0.0;

  // Newton matrix cache, keyed by the projection Jacobian it was built from.
  mutable DenseMatrix cached_jacobian_;
  mutable std::optional<SpdFactor> cached_factor_;
};

/// Resolvent evaluation with the configured (or default 1e-10) inner tolerance.
ResolventResult pp_resolvent_solve(const ProblemData& problem, const PpConfig& config,
                                   const Vector& x_prev, const Vector& y_prev);

SolveOutcome pp_run(const ProblemData& problem, const PpConfig& config,
                    const std::optional<std::pair<Vector, Vector>>& warm = std::nullopt);

}  // namespace certqp
