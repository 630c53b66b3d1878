#include "certqp/solve.hpp"

#include <algorithm>
#include <stdexcept>

namespace certqp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::solved:
      return "solved";
    case SolveStatus::primal_infeasible:
      return "primal_infeasible";
    case SolveStatus::dual_infeasible:
      return "dual_infeasible";
    case SolveStatus::max_iterations:
      return "max_iterations";
  }
  return "unknown";
}

void Tolerances::validate() const {
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0) || !(eps_pinf > 0.0) || !(eps_dinf > 0.0)) {
    throw std::invalid_argument("tolerances must be > 0");
  }
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  if (check_interval < 1) throw std::invalid_argument("check_interval must be >= 1");
}

Vector primal_certificate_candidate(const ProblemData& p, const Vector& dy) {
  return project_polar_recession(p.C(), dy);
}

std::optional<SolveOutcome> check_termination(const ProblemData& p, const Tolerances& tol,
                                              const TerminationInput& in, int iteration) {
  if (iteration < 2) return std::nullopt;

  const Vector Ax = p.A() * in.x;
  const Vector Qx = p.Q() * in.x;
  const Vector Aty = p.A().transpose() * in.y;
  const KktResiduals res{inf_norm(Ax - in.z), inf_norm(Qx + p.q() + Aty)};
  const double primal_scale = std::max(inf_norm(Ax), inf_norm(in.z));
  const double dual_scale = std::max({inf_norm(Qx), inf_norm(p.q()), inf_norm(Aty)});

  auto outcome = [&](SolveStatus status) {
    SolveOutcome o;
    o.status = status;
    o.iterations = iteration;
    o.x = in.x;
    o.z = in.z;
    o.y = in.y;
    o.residuals = res;
    return o;
  };

  if (res.primal <= tol.eps_abs + tol.eps_rel * primal_scale &&
      res.dual <= tol.eps_abs + tol.eps_rel * dual_scale) {
    return outcome(SolveStatus::solved);
  }

  std::optional<Certificate> primal_cert;
  std::optional<Certificate> dual_cert;
  const Vector ybar = primal_certificate_candidate(p, in.dy);
  if (ybar.size() > 0 && inf_norm(ybar) > 0.0) {
    auto check = check_primal_certificate(p, ybar, tol.eps_pinf);
    if (check.passed) primal_cert = std::move(check.certificate);
  }
  if (in.dx.size() > 0 && inf_norm(in.dx) > 0.0) {
    auto check = check_dual_certificate(p, in.dx, tol.eps_dinf);
    if (check.passed) dual_cert = std::move(check.certificate);
  }

  if (primal_cert) {
    SolveOutcome o = outcome(SolveStatus::primal_infeasible);
    o.certificate = std::move(primal_cert);
    o.secondary_certificate = std::move(dual_cert);
    return o;
  }
  if (dual_cert) {
    SolveOutcome o = outcome(SolveStatus::dual_infeasible);
    o.certificate = std::move(dual_cert);
    return o;
  }
  return std::nullopt;
}

TraceRecord make_trace_record(const ProblemData& p, int iter, double primal_res, double dual_res,
                              const Vector& dx, const Vector& dy) {
  TraceRecord r;
  r.iter = iter;
  r.primal_res = primal_res;
  r.dual_res = dual_res;
  r.norm_dx = inf_norm(dx);
  r.norm_dy = inf_norm(dy);
  r.norm_At_dy = inf_norm(p.A().transpose() * dy);
  r.support_dy = support(p.C(), dy);
  r.norm_Q_dx = inf_norm(p.Q() * dx);
  r.q_dot_dx = p.q().dot(dx);
  r.dist_rec = distance_to_recession(p.C(), p.A() * dx);
  return r;
}

}  // namespace certqp
