#pragma once

// Types shared by the Douglas-Rachford and proximal-point solvers.

#include "certqp/problem.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace certqp {

enum class SolveStatus { solved, primal_infeasible, dual_infeasible, max_iterations };

std::string_view to_string(SolveStatus status);

/// Optimality and infeasibility thresholds plus loop control.
struct Tolerances {
  double eps_abs = 1e-6;
  double eps_rel = 1e-6;
  double eps_pinf = 1e-6;
  double eps_dinf = 1e-6;
  int max_iter = 20000;
  int check_interval = 25;

  /// Throws std::invalid_argument unless all tolerances are > 0,
  /// max_iter >= 0 and check_interval >= 1.
  void validate() const;
};

/// One row of the per-iteration trace.
struct TraceRecord {
  int iter = 0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double norm_dx = 0.0;
  double norm_dy = 0.0;
  double norm_At_dy = 0.0;
  double support_dy = 0.0;  ///< may be +inf
  double norm_Q_dx = 0.0;
  double q_dot_dx = 0.0;
  double dist_rec = 0.0;
  int inner_iters = -1;  ///< proximal-point only
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  /// Last iterate (the solution when status == solved).
  Vector x, z, y;
  KktResiduals residuals;
  /// Present for the infeasible statuses.
  std::optional<Certificate> certificate;
  /// Dual certificate that passed together with a primal one.
  std::optional<Certificate> secondary_certificate;
  std::vector<TraceRecord> trace;
};

/// Both evaluations of the optimality residual vectors: directly from the
/// iterates and through the differences of consecutive iterates. They agree up
/// to rounding (and, for the proximal-point solver, the inner tolerance).
struct IterateResiduals {
  Vector primal_direct;
  Vector primal_from_deltas;
  Vector dual_direct;
  Vector dual_from_deltas;

  double primal() const { return inf_norm(primal_from_deltas); }
  double dual() const { return inf_norm(dual_from_deltas); }
};

/// Snapshot consumed by the termination test.
struct TerminationInput {
  const Vector& x;
  const Vector& z;
  const Vector& y;
  const Vector& dx;
  const Vector& dy;
};

/// Shared termination policy.
///
/// Returns `solved` when the KKT residuals of (x, z, y) meet
///   primal <= eps_abs + eps_rel max(||Ax||, ||z||),
///   dual   <= eps_abs + eps_rel max(||Qx||, ||q||, ||A^T y||);
/// otherwise `primal_infeasible` when the polar-recession part of dy passes
/// the primal certificate test at eps_pinf, `dual_infeasible` when dx passes
/// the dual test at eps_dinf. When both certificates pass, the primal one wins
/// and the dual one is attached as secondary.
std::optional<SolveOutcome> check_termination(const ProblemData& p, const Tolerances& tol,
                                              const TerminationInput& in, int iteration);

/// Candidate primal certificate extracted from a dy difference: its
/// projection onto the polar of rec C, where the limit lives.
Vector primal_certificate_candidate(const ProblemData& p, const Vector& dy);

TraceRecord make_trace_record(const ProblemData& p, int iter, double primal_res, double dual_res,
                              const Vector& dx, const Vector& dy);

}  // namespace certqp
