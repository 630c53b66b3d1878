#include "certqp/cli.hpp"

#include "certqp/dr_solver.hpp"
#include "certqp/instance_lab.hpp"
#include "certqp/pp_solver.hpp"
#include "certqp/problem_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace certqp {
namespace {

struct SolveArgs {
  std::string path;
  std::string solver = "dr";
  double alpha = DrConfig{}.alpha;
  double gamma = PpConfig{}.gamma;
  std::string inner = "newton";
  Tolerances tol;
  std::string trace_path;
  std::string warm_path;
  std::string out_path;
};

struct GenerateArgs {
  std::string family;
  std::string set_family = "box";
  std::uint64_t seed = 0;
  Index n = 0;
  Index m = 0;
  std::string out_path;
};

struct CheckArgs {
  std::string problem_path;
  std::string candidate_path;
  double eps = 1e-6;
};

// Reports an input problem tied to a file.
struct FileError {
  std::string path;
  InputError error;
};

ProblemFile load_problem(const std::string& path) {
  try {
    return parse_problem(read_text_file(path));
  } catch (const InputError& e) {
    throw FileError{path, e};
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write file '" + path + "'", 0);
  f << text;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved:
      return kExitSolved;
    case SolveStatus::primal_infeasible:
      return kExitPrimalInfeasible;
    case SolveStatus::dual_infeasible:
      return kExitDualInfeasible;
    case SolveStatus::max_iterations:
      return kExitMaxIterations;
  }
  return kExitInputError;
}

Vector warm_part(const std::optional<Vector>& v, Index len, const std::string& name,
                 const std::string& path) {
  if (!v) throw FileError{path, InputError("warm start needs \"" + name + "\"", 0)};
  if (v->size() != len) {
    throw FileError{path, InputError("warm start \"" + name + "\" must have " +
                                         std::to_string(len) + " entries",
                                     0)};
  }
  return *v;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  ProblemFile pf = load_problem(a.path);
  const ProblemData& p = pf.problem;
  std::optional<WarmStart> warm;
  if (!a.warm_path.empty()) {
    try {
      warm = parse_warm_start(read_text_file(a.warm_path));
    } catch (const InputError& e) {
      throw FileError{a.warm_path, e};
    }
    warm_part(warm->x, p.n(), "x", a.warm_path);
  }

  SolveOutcome outcome;
  ConfigEcho echo;
  echo.solver = a.solver;
  echo.tol = a.tol;
  if (a.solver == "dr") {
    DrConfig cfg;
    cfg.alpha = a.alpha;
    cfg.tol = a.tol;
    cfg.record_trace = !a.trace_path.empty();
    echo.alpha = cfg.alpha;
    std::optional<std::pair<Vector, Vector>> start;
    if (warm) {
      Vector v = warm->v ? warm_part(warm->v, p.m(), "v", a.warm_path)
                         : Vector(warm_part(warm->z, p.m(), "z", a.warm_path) +
                                  warm_part(warm->y, p.m(), "y", a.warm_path));
      start = std::make_pair(warm->x, std::move(v));
    }
    outcome = dr_run(p, cfg, start);
  } else {
    PpConfig cfg;
    cfg.gamma = a.gamma;
    cfg.inner_method = inner_method_from_string(a.inner);
    cfg.tol = a.tol;
    cfg.record_trace = !a.trace_path.empty();
    echo.gamma = cfg.gamma;
    echo.inner_method = cfg.inner_method;
    std::optional<std::pair<Vector, Vector>> start;
    if (warm) start = std::make_pair(warm->x, warm_part(warm->y, p.m(), "y", a.warm_path));
    outcome = pp_run(p, cfg, start);
  }

  if (!a.trace_path.empty()) {
    write_output(a.trace_path, serialize_trace(outcome.trace, a.solver == "pp"), out);
  }
  write_output(a.out_path, serialize_outcome(outcome, echo), out);
  err << "status: " << to_string(outcome.status) << " after " << outcome.iterations
      << " iterations\n";
  return exit_code(outcome.status);
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const InstanceBundle b = generate(instance_family_from_string(a.family), a.seed, a.n, a.m,
                                    set_family_from_string(a.set_family));
  write_output(a.out_path, serialize_bundle(b), out);
  return kExitSolved;
}

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", d);
  return buf;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const ProblemFile pf = load_problem(a.problem_path);
  Candidate c;
  try {
    c = parse_candidate(read_text_file(a.candidate_path));
  } catch (const InputError& e) {
    throw FileError{a.candidate_path, e};
  }
  const Index want = c.kind == CertificateKind::primal_infeasibility ? pf.problem.m()
                                                                     : pf.problem.n();
  if (c.vector.size() != want) {
    throw FileError{a.candidate_path,
                    InputError("dimension mismatch: " + std::string(to_string(c.kind)) +
                                   " certificate needs " + std::to_string(want) +
                                   " entries, found " + std::to_string(c.vector.size()),
                               0)};
  }
  CertificateCheck r;
  try {
    r = check_certificate(pf.problem, c.kind, c.vector, a.eps);
  } catch (const std::invalid_argument& e) {
    throw FileError{a.candidate_path, InputError(e.what(), 0)};
  }
  out << "kind: " << to_string(c.kind) << "\n";
  if (const auto* pm = std::get_if<PrimalCertificateMetrics>(&r.certificate.metrics)) {
    out << "norm_At_y: " << fmt(pm->adjoint_norm) << "\n";
    out << "support: " << fmt(pm->support) << "\n";
  } else {
    const auto& m = std::get<DualCertificateMetrics>(r.certificate.metrics);
    out << "norm_Q_x: " << fmt(m.quadratic_norm) << "\n";
    out << "dist_rec: " << fmt(m.recession_distance) << "\n";
    out << "q_dot_x: " << fmt(m.linear_term) << "\n";
  }
  out << "eps: " << fmt(a.eps) << "\n";
  out << (r.passed ? "pass" : "fail") << "\n";
  return r.passed ? kExitSolved : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex QP solver with infeasibility certificates"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a problem file");
  solve->add_option("problem", sa.path, "Problem file")->required();
  solve->add_option("--solver", sa.solver, "dr or pp")
      ->check(CLI::IsMember({"dr", "pp"}))
      ->capture_default_str();
  solve->add_option("--alpha", sa.alpha, "DR relaxation in (0, 2)")->capture_default_str();
  solve->add_option("--gamma", sa.gamma, "PP step size > 0")->capture_default_str();
  solve->add_option("--inner", sa.inner, "PP inner solver: newton or fixed_point")
      ->check(CLI::IsMember({"newton", "fixed_point", "semismooth_newton", "damped_fixed_point"}))
      ->capture_default_str();
  solve->add_option("--eps-abs", sa.tol.eps_abs)->capture_default_str();
  solve->add_option("--eps-rel", sa.tol.eps_rel)->capture_default_str();
  solve->add_option("--eps-pinf", sa.tol.eps_pinf)->capture_default_str();
  solve->add_option("--eps-dinf", sa.tol.eps_dinf)->capture_default_str();
  solve->add_option("--max-iter", sa.tol.max_iter)->capture_default_str();
  solve->add_option("--check-interval", sa.tol.check_interval)->capture_default_str();
  solve->add_option("--trace", sa.trace_path, "Write the per-iteration trace CSV here");
  solve->add_option("--warm", sa.warm_path, "Warm start file");
  solve->add_option("--out", sa.out_path, "Outcome file (default: stdout)");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a generated instance with its ground truth");
  gen->add_option("--family", ga.family)
      ->required()
      ->check(CLI::IsMember({"feasible", "primal_infeasible", "dual_infeasible"}));
  gen->add_option("--set-family", ga.set_family)
      ->check(CLI::IsMember({"box", "orthant", "translated_cone", "box_soc"}))
      ->capture_default_str();
  gen->add_option("--seed", ga.seed)->required();
  gen->add_option("--n", ga.n)->required()->check(CLI::PositiveNumber);
  gen->add_option("--m", ga.m)->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", ga.out_path, "Output file (default: stdout)");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Check a candidate infeasibility certificate");
  check->add_option("problem", ca.problem_path)->required();
  check->add_option("candidate", ca.candidate_path)->required();
  check->add_option("--eps", ca.eps)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(sa, out, err);
    if (gen->parsed()) return cmd_generate(ga, out);
    return cmd_check(ca, out);
  } catch (const FileError& e) {
    err << "error: " << e.path;
    if (e.error.line() > 0) err << ":" << e.error.line();
    err << ": " << e.error.message() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace certqp
