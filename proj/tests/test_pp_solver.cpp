#include "certqp/instance_lab.hpp"
#include "certqp/pp_solver.hpp"

#include <doctest.h>

#include <array>

#include "solver_checks.hpp"
#include "test_util.hpp"

using namespace certqp;
using testutil::mat;
using testutil::vec;

namespace {

Vector stack(const Vector& a, const Vector& b) {
  Vector s(a.size() + b.size());
  s << a, b;
  return s;
}

const std::array<SetFamily, 4> kFamilies = {SetFamily::box, SetFamily::orthant,
                                            SetFamily::translated_cone, SetFamily::box_soc};

ProblemData half_line_problem() {
  return ProblemData(mat(1, 1, {0}), vec({0}), mat(1, 1, {1}),
                     ConvexSet::box(vec({0}), vec({kInf})));
}

}  // namespace

TEST_CASE("config validation") {
  PpConfig cfg;
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(PpSolver(half_line_problem(), cfg), std::invalid_argument);
  cfg.gamma = 1.0;
  cfg.inner_tol_abs = 0.0;
  CHECK_THROWS_AS(PpSolver(half_line_problem(), cfg), std::invalid_argument);
  CHECK(inner_method_from_string(to_string(InnerMethod::damped_fixed_point)) ==
        InnerMethod::damped_fixed_point);
  CHECK_THROWS_AS(inner_method_from_string("bfgs"), std::invalid_argument);
}

TEST_CASE("resolvent over the whole space is a linear solve") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(6));
    const Index m = 1 + static_cast<Index>(rng.below(6));
    const DenseMatrix g = rng.matrix(n, n);
    const DenseMatrix q_mat = g.transpose() * g;
    const ProblemData p(q_mat, rng.vector(n), rng.matrix(m, n), ConvexSet::whole_space(m));
    PpConfig cfg;
    cfg.gamma = 0.5 + rng.uniform01();
    const Vector x_prev = rng.vector(n);
    const Vector y_prev = rng.vector(m);
    const ResolventResult r = pp_resolvent_solve(p, cfg, x_prev, y_prev);
    const DenseMatrix lhs = DenseMatrix::Identity(n, n) + cfg.gamma * q_mat;
    const Vector expected = lhs.llt().solve(x_prev - cfg.gamma * p.q());
    CHECK(inf_norm(r.x - expected) <= 1e-9);
    CHECK(inf_norm(r.y) == 0.0);
  }
}

TEST_CASE("scalar resolvent by hand") {
  // F(x) = x + 1 + min(x, 0): the root is -1/2, and y = (I - P)(-1/2) = -1/2.
  for (auto method : {InnerMethod::semismooth_newton, InnerMethod::damped_fixed_point}) {
    PpConfig cfg;
    cfg.inner_method = method;
    const ResolventResult r = pp_resolvent_solve(half_line_problem(), cfg, vec({-1}), vec({0}));
    CHECK(std::abs(r.x(0) + 0.5) <= 1e-9);
    CHECK(std::abs(r.y(0) + 0.5) <= 1e-9);
    CHECK(r.residual <= 1e-10);
    const PpSolver s(half_line_problem(), cfg);
    CHECK(inf_norm(s.resolvent_residual(r.x, vec({-1}), vec({0}))) <= 1e-10);
  }
}

TEST_CASE("a KKT pair is fixed by the resolvent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const InstanceBundle b = gen_feasible(seed, 5, 6, kFamilies[seed % 4]);
    const auto& t = std::get<KktTruth>(b.truth);
    for (auto method : {InnerMethod::semismooth_newton, InnerMethod::damped_fixed_point}) {
      PpConfig cfg;
      cfg.inner_method = method;
      const ResolventResult r = pp_resolvent_solve(b.problem, cfg, t.x, t.y);
      CHECK(inf_norm(r.x - t.x) <= 1e-9);
      CHECK(inf_norm(r.y - t.y) <= 1e-8);
    }
  }
}

TEST_CASE("inner solver failure carries the best iterate") {
  const InstanceBundle b = gen_feasible(3, 6, 6, SetFamily::box);
  PpConfig cfg;
  cfg.inner_method = InnerMethod::damped_fixed_point;
  cfg.inner_max_iter = 2;
  cfg.inner_tol_abs = 1e-14;
  const PpSolver s(b.problem, cfg);
  try {
    (void)s.resolvent(Vector::Constant(6, 5.0), Vector::Constant(6, -3.0), 1e-14);
    FAIL("no error raised");
  } catch (const InnerSolveError& e) {
    CHECK(e.best_x().size() == 6);
    CHECK(e.residual() > 1e-14);
  }
}

TEST_CASE("whole space iteration converges to the unconstrained minimizer") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const DenseMatrix g = rng.matrix(n, n);
    const DenseMatrix q_mat = g.transpose() * g + 0.2 * DenseMatrix::Identity(n, n);
    const Vector q = rng.vector(n);
    const ProblemData p(q_mat, q, rng.matrix(3, n), ConvexSet::whole_space(3));
    PpSolver s(p, PpConfig{});
    for (int k = 0; k < 400; ++k) s.step();
    const Vector expected = q_mat.llt().solve(-q);
    CHECK(inf_norm(s.state().x - expected) <= 1e-8 * (1.0 + inf_norm(expected)));
  }
}

TEST_CASE("termination on the hand-analysed instances") {
  SUBCASE("disjoint intervals") {
    const SolveOutcome o = pp_run(disjoint_interval_instance().problem, PpConfig{});
    REQUIRE(o.status == SolveStatus::primal_infeasible);
    CHECK(testutil::angle_between(o.certificate->vector, vec({1, -1})) <= 1e-6);
  }
  SUBCASE("disjoint intervals: dy settles at a positive constant") {
    PpSolver s(disjoint_interval_instance().problem, PpConfig{});
    double last = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      s.step();
      if (k == 900) last = inf_norm(s.state().dy);
    }
    CHECK(last > 0.1);
    CHECK(std::abs(inf_norm(s.state().dy) - last) <= 1e-8);
  }
  SUBCASE("unbounded linear") {
    const SolveOutcome o = pp_run(unbounded_linear_instance().problem, PpConfig{});
    REQUIRE(o.status == SolveStatus::dual_infeasible);
    CHECK(o.certificate->vector(0) > 0.0);
  }
  SUBCASE("unbounded linear: dual residual tends to a positive constant") {
    PpSolver s(unbounded_linear_instance().problem, PpConfig{});
    for (int k = 0; k < 500; ++k) s.step();
    const double r1 = s.residuals().dual();
    for (int k = 0; k < 500; ++k) s.step();
    CHECK(r1 > 0.1);
    CHECK(std::abs(s.residuals().dual() - r1) <= 1e-8);
  }
  SUBCASE("feasible") {
    const InstanceBundle b = canonical_feasible_instance();
    const SolveOutcome o = pp_run(b.problem, PpConfig{});
    REQUIRE(o.status == SolveStatus::solved);
    CHECK(inf_norm(o.x - std::get<KktTruth>(b.truth).x) <= 1e-4);
  }
}

TEST_CASE("residual identities and the polar invariant") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (auto fam : {InstanceFamily::feasible, InstanceFamily::primal_infeasible,
                     InstanceFamily::dual_infeasible}) {
      const InstanceBundle b = generate(fam, 70 + seed, 5, 6, kFamilies[seed % 4]);
      PpConfig cfg;
      cfg.gamma = 0.5 + 0.25 * static_cast<double>(seed % 4);
      if (seed % 3 == 2) cfg.inner_method = InnerMethod::damped_fixed_point;
      PpSolver s(b.problem, cfg);
      for (int k = 0; k < 120; ++k) {
        s.step();
        const auto chk = testutil::pp_identity_check(s);
        CHECK(chk.passed());
        const Vector& y = s.state().y;
        CHECK(inf_norm(project_polar_recession(b.problem.C(), y) - y) <= 1e-8);
      }
    }
  }
}

TEST_CASE("one outer step is nonexpansive") {
  SplitMix64 rng(9);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const InstanceBundle b = generate(static_cast<InstanceFamily>(seed % 3), seed, 5, 6,
                                      kFamilies[seed % 4]);
    PpConfig cfg;
    cfg.gamma = 0.5 + 0.5 * static_cast<double>(seed % 3);
    const PpSolver s(b.problem, cfg);
    const double tol = 1e-11;
    for (int k = 0; k < 100; ++k) {
      const Vector x = 3.0 * rng.vector(5), y = 3.0 * rng.vector(6);
      const Vector x2 = 3.0 * rng.vector(5), y2 = 3.0 * rng.vector(6);
      const auto [tx, ty] = s.apply(x, y, tol);
      const auto [tx2, ty2] = s.apply(x2, y2, tol);
      CHECK(stack(tx - tx2, ty - ty2).norm() <=
            stack(x - x2, y - y2).norm() + 1e-9 + 10.0 * tol);
    }
  }
}

TEST_CASE("Cesaro averages and difference structure") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto fam = seed % 2 == 0 ? InstanceFamily::primal_infeasible
                                   : InstanceFamily::dual_infeasible;
    const InstanceBundle b = generate(fam, 80 + seed, 4, 5, kFamilies[seed % 4]);
    PpConfig cfg;
    PpSolver s(b.problem, cfg);
    const int n = 100000;
    for (int k = 0; k < n; ++k) s.step();
    const PpState& st = s.state();
    CHECK(st.iteration == n);
    const Vector avg = st.x / static_cast<double>(n);
    CHECK((avg - st.dx).norm() <= 1e-3 * (1.0 + st.dx.norm()));
    const Vector structure = b.problem.A() * st.dx + st.dy / cfg.gamma;
    CHECK((st.dv - structure).norm() <= 1e-6 * (1.0 + st.dv.norm()));
  }
}

TEST_CASE("limit relations at detection") {
  int detected = 0;
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const auto fam = seed % 2 == 0 ? InstanceFamily::primal_infeasible
                                   : InstanceFamily::dual_infeasible;
    const InstanceBundle b = generate(fam, 500 + seed, 5, 6, kFamilies[(seed / 2) % 4]);
    PpConfig cfg;
    PpSolver s(b.problem, cfg);
    const SolveOutcome o = s.run();
    if (o.status != SolveStatus::primal_infeasible && o.status != SolveStatus::dual_infeasible)
      continue;
    ++detected;
    const PpState& st = s.state();
    const auto& p = b.problem;
    const auto id = testutil::delta_identities(p, st.dx, st.dy, 1.0 / cfg.gamma, false);
    CHECK(id.dx_residual <= id.dx_bound);
    CHECK(id.dy_residual <= id.dy_bound);
    CHECK(inf_norm(p.Q() * st.dx) <= 1e-5 * (1.0 + inf_norm(st.dx)));
    CHECK(inf_norm(p.A().transpose() * st.dy) <= 1e-5 * (1.0 + inf_norm(st.dy)));
    CHECK(inf_norm(p.A() * st.dx - st.dz) <= 1e-5 * (1.0 + inf_norm(st.dx)));
    if (o.certificate) {
      CHECK(check_certificate(p, o.certificate->kind, o.certificate->vector, 1e-6).passed);
    }
  }
  CHECK(detected >= 23);
}

TEST_CASE("status agrees with the DR solver") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const InstanceBundle b = generate(static_cast<InstanceFamily>(seed % 3), 900 + seed, 6, 5,
                                      kFamilies[seed % 4]);
    const SolveOutcome dr = dr_run(b.problem, DrConfig{});
    const SolveOutcome pp = pp_run(b.problem, PpConfig{});
    CHECK(dr.status == pp.status);
    if (dr.certificate && pp.certificate && b.unique_certificate) {
      CHECK(testutil::angle_between(dr.certificate->vector, pp.certificate->vector) <= 1e-3);
    }
  }
}
