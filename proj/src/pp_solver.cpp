#include "certqp/pp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace certqp {
namespace {

constexpr int kDefaultNewtonIterations = 50;
constexpr int kDefaultFixedPointIterations = 100000;
constexpr double kDefaultInnerTol = 1e-10;
constexpr double kInnerTolFloor = 1e-12;
constexpr double kInnerTolRatio = 1e-3;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-10;
// Multiple of machine epsilon times the magnitude of the terms of F below
// which ||F|| cannot be resolved.
constexpr double kRoundingFactor = 64.0 * std::numeric_limits<double>::epsilon();

const PpConfig& validated(const PpConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
    throw std::invalid_argument("gamma must be a finite value > 0");
  }
  if (cfg.inner_tol_abs && !(*cfg.inner_tol_abs > 0.0)) {
    throw std::invalid_argument("inner_tol_abs must be > 0");
  }
  if (cfg.inner_max_iter < 0) throw std::invalid_argument("inner_max_iter must be >= 0");
  cfg.tol.validate();
  return cfg;
}

bool same_matrix(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

std::string_view to_string(InnerMethod m) {
  return m == InnerMethod::semismooth_newton ? "semismooth_newton" : "damped_fixed_point";
}

InnerMethod inner_method_from_string(std::string_view s) {
  if (s == "semismooth_newton" || s == "newton") return InnerMethod::semismooth_newton;
  if (s == "damped_fixed_point" || s == "fixed_point") return InnerMethod::damped_fixed_point;
  throw std::invalid_argument("unknown inner method '" + std::string(s) + "'");
}

PpSolver::PpSolver(ProblemData problem, PpConfig config)
    : problem_(std::move(problem)), config_(validated(config)) {
  norm_Q_ = spectral_norm_estimate(problem_.Q());
  norm_A_ = spectral_norm_estimate(problem_.A());
  const double g = config_.gamma;
  tau_ = 1.0 / (1.0 + g * norm_Q_ + g * g * norm_A_ * norm_A_);
  warm_start(Vector::Zero(problem_.n()), Vector::Zero(problem_.m()));
}

void PpSolver::warm_start(const Vector& x, const Vector& y) {
  require_same_dim(problem_.n(), x.size(), "warm start x");
  require_same_dim(problem_.m(), y.size(), "warm start y");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("warm start: non-finite entry");
  state_ = PpState{};
  state_.x = x;
  state_.y = y;
  state_.v = problem_.A() * x + y / config_.gamma;
  state_.z = project(problem_.C(), state_.v);
  state_.dx = Vector::Zero(x.size());
  state_.dy = Vector::Zero(y.size());
  state_.dv = Vector::Zero(y.size());
  state_.dz = Vector::Zero(y.size());
  last_outer_residual_ = 0.0;
}

Vector PpSolver::resolvent_residual(const Vector& x, const Vector& x_prev,
                                    const Vector& y_prev) const {
  const auto& p = problem_;
  const double g = config_.gamma;
  const Vector w = p.A() * x + y_prev / g;
  const Vector r = w - project(p.C(), w);
  return x + g * (p.Q() * x) - x_prev + g * p.q() + (g * g) * (p.A().transpose() * r);
}

double PpSolver::rounding_floor(const Vector& x, const Vector& x_prev, const Vector& y_prev) const {
  const double g = config_.gamma;
  const double magnitude = inf_norm(x_prev) + (1.0 + g * norm_Q_ + g * g * norm_A_ * norm_A_) * inf_norm(x) +
                           g * inf_norm(problem_.q()) + g * norm_A_ * inf_norm(y_prev);
  return kRoundingFactor * magnitude;
}

ResolventResult PpSolver::finish(const Vector& x, const Vector& y_prev, int iters, double residual,
                                 double tol) const {
  const double g = config_.gamma;
  const Vector w = problem_.A() * x + y_prev / g;
  ResolventResult out;
  out.x = x;
  out.y = g * (w - project(problem_.C(), w));
  out.inner_iters = iters;
  out.residual = residual;
  out.tolerance = tol;
  return out;
}

ResolventResult PpSolver::newton(const Vector& x_prev, const Vector& y_prev, double tol,
                                 Vector x) const {
  const auto& p = problem_;
  const double g = config_.gamma;
  const int max_iter = config_.inner_max_iter > 0 ? config_.inner_max_iter : kDefaultNewtonIterations;
  const Index n = p.n();

  // Merit function whose gradient is F; strongly convex with modulus 1.
  auto merit = [&](const Vector& xv) {
    const Vector w = p.A() * xv + y_prev / g;
    const double dist2 = (w - project(p.C(), w)).squaredNorm();
    return 0.5 * xv.dot(xv + g * (p.Q() * xv)) - xv.dot(x_prev - g * p.q()) + 0.5 * g * g * dist2;
  };

  Vector f = resolvent_residual(x, x_prev, y_prev);
  double fnorm = inf_norm(f);
  for (int k = 0;; ++k) {
    const double eff = std::max(tol, rounding_floor(x, x_prev, y_prev));
    if (fnorm <= eff) return finish(x, y_prev, k, fnorm, eff);
    if (k == max_iter) {
      throw InnerSolveError("resolvent: inner Newton iteration limit reached (||F|| = " +
                                std::to_string(fnorm) + ")",
                            x, fnorm);
    }

    const DenseMatrix jac = projection_jacobian(p.C(), p.A() * x + y_prev / g);
    if (!cached_factor_ || !same_matrix(jac, cached_jacobian_)) {
      const DenseMatrix inactive = DenseMatrix::Identity(p.m(), p.m()) - jac;
      DenseMatrix newton_matrix = DenseMatrix::Identity(n, n) + g * p.Q() +
                                  (g * g) * (p.A().transpose() * inactive * p.A());
      newton_matrix = 0.5 * (newton_matrix + newton_matrix.transpose()).eval();
      cached_factor_ = SpdFactor::factor(newton_matrix);
      cached_jacobian_ = jac;
    }
    const Vector d = -cached_factor_->solve(f);

    Vector x_trial = x + d;
    Vector f_trial = resolvent_residual(x_trial, x_prev, y_prev);
    if (inf_norm(f_trial) > 0.9 * fnorm) {
      // Backtrack on the merit function.
      const double phi0 = merit(x);
      const double slope = f.dot(d);
      double t = 1.0;
      while (t >= kMinStep && merit(x + t * d) > phi0 + kArmijo * t * slope) t *= 0.5;
      if (t < kMinStep) {
        throw InnerSolveError("resolvent: Newton line search failed (||F|| = " +
                                  std::to_string(fnorm) + ")",
                              x, fnorm);
      }
      x_trial = x + t * d;
      f_trial = resolvent_residual(x_trial, x_prev, y_prev);
    }
    x = std::move(x_trial);
    f = std::move(f_trial);
    fnorm = inf_norm(f);
  }
}

ResolventResult PpSolver::fixed_point(const Vector& x_prev, const Vector& y_prev, double tol,
                                      Vector x) const {
  const int max_iter =
      config_.inner_max_iter > 0 ? config_.inner_max_iter : kDefaultFixedPointIterations;
  Vector f = resolvent_residual(x, x_prev, y_prev);
  double fnorm = inf_norm(f);
  for (int k = 0;; ++k) {
    const double eff = std::max(tol, rounding_floor(x, x_prev, y_prev));
    if (fnorm <= eff) return finish(x, y_prev, k, fnorm, eff);
    if (k == max_iter) {
      throw InnerSolveError("resolvent: inner fixed-point iteration limit reached (||F|| = " +
                                std::to_string(fnorm) + ")",
                            x, fnorm);
    }
    x -= tau_ * f;
    f = resolvent_residual(x, x_prev, y_prev);
    fnorm = inf_norm(f);
  }
}

ResolventResult PpSolver::resolvent(const Vector& x_prev, const Vector& y_prev, double tol,
                                    const Vector* guess) const {
  require_same_dim(problem_.n(), x_prev.size(), "resolvent x");
  require_same_dim(problem_.m(), y_prev.size(), "resolvent y");
  if (!(tol > 0.0)) throw std::invalid_argument("resolvent: tolerance must be > 0");
  Vector start = guess ? *guess : x_prev;
  require_same_dim(problem_.n(), start.size(), "resolvent guess");
  if (config_.inner_method == InnerMethod::semismooth_newton) {
    return newton(x_prev, y_prev, tol, std::move(start));
  }
  return fixed_point(x_prev, y_prev, tol, std::move(start));
}

double PpSolver::next_inner_tol() const {
  if (config_.inner_tol_abs) return *config_.inner_tol_abs;
  if (state_.iteration == 0) return kDefaultInnerTol;
  return std::clamp(kInnerTolRatio * last_outer_residual_, kInnerTolFloor, kDefaultInnerTol);
}

void PpSolver::step() {
  const double g = config_.gamma;
  const Vector guess = state_.x + state_.dx;
  ResolventResult r = resolvent(state_.x, state_.y, next_inner_tol(), &guess);

  Vector v = problem_.A() * r.x + state_.y / g;
  Vector z = project(problem_.C(), v);
  state_.dx = r.x - state_.x;
  state_.dy = r.y - state_.y;
  state_.dv = v - state_.v;
  state_.dz = z - state_.z;
  state_.x = std::move(r.x);
  state_.y = std::move(r.y);
  state_.v = std::move(v);
  state_.z = std::move(z);
  state_.inner_iters = r.inner_iters;
  state_.inner_tol = r.tolerance;
  ++state_.iteration;
  last_outer_residual_ = std::max(inf_norm(state_.dx), inf_norm(state_.dy)) / g;
}

std::pair<Vector, Vector> PpSolver::apply(const Vector& x, const Vector& y, double inner_tol) const {
  ResolventResult r = resolvent(x, y, inner_tol);
  return {std::move(r.x), std::move(r.y)};
}

IterateResiduals PpSolver::residuals() const {
  const auto& p = problem_;
  const auto& s = state_;
  const double g = config_.gamma;
  IterateResiduals r;
  const Vector pv = project(p.C(), s.v);
  r.primal_direct = p.A() * s.x - pv;
  r.primal_from_deltas = s.dy / g;
  r.dual_direct = p.Q() * s.x + p.q() + g * (p.A().transpose() * (s.v - pv));
  r.dual_from_deltas = -s.dx / g;
  return r;
}

std::optional<SolveOutcome> PpSolver::check_termination() const {
  return certqp::check_termination(problem_, config_.tol,
                                   {state_.x, state_.z, state_.y, state_.dx, state_.dy},
                                   state_.iteration);
}

SolveOutcome PpSolver::run() {
  const auto& tol = config_.tol;
  std::vector<TraceRecord> trace;
  while (state_.iteration < tol.max_iter) {
    step();
    if (config_.record_trace) {
      const IterateResiduals r = residuals();
      TraceRecord rec = make_trace_record(problem_, state_.iteration, r.primal(), r.dual(),
                                          state_.dx, state_.dy);
      rec.inner_iters = state_.inner_iters;
      trace.push_back(rec);
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

ResolventResult pp_resolvent_solve(const ProblemData& problem, const PpConfig& config,
                                   const Vector& x_prev, const Vector& y_prev) {
  PpSolver solver(problem, config);
  return solver.resolvent(x_prev, y_prev, config.inner_tol_abs.value_or(kDefaultInnerTol));
}

SolveOutcome pp_run(const ProblemData& problem, const PpConfig& config,
                    const std::optional<std::pair<Vector, Vector>>& warm) {
  PpSolver solver(problem, config);
  if (warm) solver.warm_start(warm->first, warm->second);
  return solver.run();
}

}  // namespace certqp
