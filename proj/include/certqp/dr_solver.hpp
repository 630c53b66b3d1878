#pragma once

// Douglas-Rachford (ADMM) iteration for
//
//   minimize 1/2 <Qx, x> + <q, x>  s.t.  Ax in C
//
// on the pair s = (x, v):
//
//   xt      = argmin 1/2<Qx,x> + <q,x> + 1/2||x - x_n||^2 + 1/2||Ax - (2P_C - I)v_n||^2
//   x_{n+1} = x_n + alpha (xt - x_n)
//   v_{n+1} = v_n + alpha (A xt - P_C v_n)
//
// with auxiliary iterates z_n = P_C v_n and y_n = v_n - z_n. The differences
// (dx_n, dy_n) converge to certificates of dual / primal strong infeasibility.

#include "certqp/solve.hpp"

#include <optional>
#include <utility>

namespace certqp {

struct DrConfig {
  double alpha = 1.6;  ///< relaxation, strictly inside (0, 2)
  Tolerances tol;
  bool record_trace = false;
};

struct DrState {
  int iteration = 0;
  Vector x, v;
  Vector z, y;  ///< P_C v and (I - P_C) v
  Vector dx, dv, dz, dy;
  Vector x_prev, v_prev;
};

class DrSolver {
 public:
  /// Factors M = Q + I + A^T A once. Throws std::invalid_argument for an alpha
  /// outside (0, 2) or bad tolerances, NotPositiveDefinite if M cannot be
  /// factored.
  DrSolver(ProblemData problem, DrConfig config);

  /// Replaces the iterate with (x, v); the differences are reset to zero.
  void warm_start(const Vector& x, const Vector& v);

  /// One iteration of the DR map.
  void step();

  /// The DR map T(x, v) without touching the solver state.
  std::pair<Vector, Vector> apply(const Vector& x, const Vector& v) const;

  /// Residuals of (x_n, z_n, y_n), the iterate before the last step, in both
  /// forms: A x_n - P_C v_n and -(A dx - dv) / alpha, and
  /// Q x_n + q + A^T (I - P_C) v_n and -((Q + I) dx + A^T dv) / alpha.
  IterateResiduals residuals() const;

  std::optional<SolveOutcome> check_termination() const;

  /// Runs until a termination test fires or max_iter steps have been taken.
  SolveOutcome run();

  const DrState& state() const { return state_; }
  const ProblemData& problem() const { return problem_; }
  const DrConfig& config() const { return config_; }
  const DenseMatrix& system_matrix() const { return system_; }

 private:
  void refresh_auxiliary(const Vector& x_prev, const Vector& v_prev, const Vector& z_prev,
                         const Vector& y_prev);

  ProblemData problem_;
  DrConfig config_;
  DenseMatrix system_;
  SpdFactor factor_;
  DrState state_;
};

SolveOutcome dr_run(const ProblemData& problem, const DrConfig& config,
                    const std::optional<std::pair<Vector, Vector>>& warm = std::nullopt);

}  // namespace certqp
