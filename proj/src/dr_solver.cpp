#include "certqp/dr_solver.hpp"

#include <stdexcept>

namespace certqp {
namespace {

DenseMatrix dr_system_matrix(const ProblemData& p) {
  return p.Q() + DenseMatrix::Identity(p.n(), p.n()) + p.A().transpose() * p.A();
}

const DrConfig& validated(const DrConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0)) {
    throw std::invalid_argument("alpha out of range: must lie in (0, 2)");
  }
  cfg.tol.validate();
  return cfg;
}

}  // namespace

DrSolver::DrSolver(ProblemData problem, DrConfig config)
    : problem_(std::move(problem)),
      config_(validated(config)),
      system_(dr_system_matrix(problem_)),
      factor_(SpdFactor::factor(system_)) {
  warm_start(Vector::Zero(problem_.n()), Vector::Zero(problem_.m()));
}

void DrSolver::warm_start(const Vector& x, const Vector& v) {
  require_same_dim(problem_.n(), x.size(), "warm start x");
  require_same_dim(problem_.m(), v.size(), "warm start v");
  if (!x.allFinite() || !v.allFinite()) throw std::invalid_argument("warm start: non-finite entry");
  state_ = DrState{};
  state_.x = x;
  state_.v = v;
  state_.z = project(problem_.C(), v);
  state_.y = v - state_.z;
  state_.dx = Vector::Zero(x.size());
  state_.dv = Vector::Zero(v.size());
  state_.dz = Vector::Zero(v.size());
  state_.dy = Vector::Zero(v.size());
  state_.x_prev = x;
  state_.v_prev = v;
}

std::pair<Vector, Vector> DrSolver::apply(const Vector& x, const Vector& v) const {
  require_same_dim(problem_.n(), x.size(), "dr apply x");
  require_same_dim(problem_.m(), v.size(), "dr apply v");
  const Vector z = project(problem_.C(), v);
  const Vector rhs = x - problem_.q() + problem_.A().transpose() * (2.0 * z - v);
  const Vector xt = factor_.solve(rhs);
  const double a = config_.alpha;
  Vector x_next = x + a * (xt - x);
  Vector v_next = v + a * (problem_.A() * xt - z);
  return {std::move(x_next), std::move(v_next)};
}

void DrSolver::step() {
  auto [x_next, v_next] = apply(state_.x, state_.v);
  const Vector z_prev = state_.z;
  const Vector y_prev = state_.y;
  const Vector x_prev = state_.x;
  const Vector v_prev = state_.v;
  state_.x = std::move(x_next);
  state_.v = std::move(v_next);
  refresh_auxiliary(x_prev, v_prev, z_prev, y_prev);
  ++state_.iteration;
}

void DrSolver::refresh_auxiliary(const Vector& x_prev, const Vector& v_prev, const Vector& z_prev,
                                 const Vector& y_prev) {
  state_.z = project(problem_.C(), state_.v);
  state_.y = state_.v - state_.z;
  state_.dx = state_.x - x_prev;
  state_.dv = state_.v - v_prev;
  state_.dz = state_.z - z_prev;
  state_.dy = state_.y - y_prev;
  state_.x_prev = x_prev;
  state_.v_prev = v_prev;
}

IterateResiduals DrSolver::residuals() const {
  const auto& p = problem_;
  const auto& s = state_;
  const double inv_alpha = 1.0 / config_.alpha;
  IterateResiduals r;
  r.primal_direct = p.A() * s.x_prev - project(p.C(), s.v_prev);
  r.primal_from_deltas = -inv_alpha * (p.A() * s.dx - s.dv);
  r.dual_direct = p.Q() * s.x_prev + p.q() +
                  p.A().transpose() * (s.v_prev - project(p.C(), s.v_prev));
  r.dual_from_deltas = -inv_alpha * (p.Q() * s.dx + s.dx + p.A().transpose() * s.dv);
  return r;
}

std::optional<SolveOutcome> DrSolver::check_termination() const {
  return certqp::check_termination(problem_, config_.tol,
                                   {state_.x, state_.z, state_.y, state_.dx, state_.dy},
                                   state_.iteration);
}

SolveOutcome DrSolver::run() {
  const auto& tol = config_.tol;
  std::vector<TraceRecord> trace;
  while (state_.iteration < tol.max_iter) {
    step();
    if (config_.record_trace) {
      const IterateResiduals r = residuals();
      trace.push_back(make_trace_record(problem_, state_.iteration, r.primal(), r.dual(), state_.dx,
                                        state_.dy));
    }
    if (state_.iteration % tol.check_interval == 0 || state_.iteration == tol.max_iter) {
      if (auto done = check_termination()) {
        done->trace = std::move(trace);
        return *std::move(done);
      }
    }
  }
  SolveOutcome out;
  out.status = SolveStatus::max_iterations;
  out.iterations = state_.iteration;
  out.x = state_.x;
  out.z = state_.z;
  out.y = state_.y;
  out.residuals = kkt_residuals(problem_, state_.x, state_.z, state_.y);
  out.trace = std::move(trace);
  return out;
}

SolveOutcome dr_run(const ProblemData& problem, const DrConfig& config,
                    const std::optional<std::pair<Vector, Vector>>& warm) {
  DrSolver solver(problem, config);
  if (warm) solver.warm_start(warm->first, warm->second);
  return solver.run();
}

}  // namespace certqp
