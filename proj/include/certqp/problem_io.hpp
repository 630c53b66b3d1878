#pragma once

// Text formats of the command-line tool.
//
// Problem file (JSON):
//   {
//     "n": 2, "m": 3,
//     "Q": [[row, col, value], ...],   upper triangle only, mirrored on load
//     "q": [...],
//     "A": [[row, col, value], ...],
//     "set": {"type": "box", "l": [0, "-inf"], "u": ["inf", 1]},
//     "truth": {...}                     optional
//   }
// Set objects: box (l, u), nonneg (dim), zero (dim), point (value),
// halfspace (normal, offset), ball (center, radius), soc (dim),
// translated_cone (offset, cone), cartesian (parts). Infinities are the
// strings "inf" / "-inf" and are accepted only in box bounds.
//
// Every parse or validation failure throws InputError with the line of the
// offending value.

#include "certqp/instance_lab.hpp"
#include "certqp/pp_solver.hpp"
#include "certqp/solve.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace certqp {

class InputError : public std::runtime_error {
 public:
  /// line == 0 means the error is not tied to a position.
  InputError(const std::string& message, int line);

  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
};

/// Sidecar written by the generator.
struct TruthSidecar {
  Truth truth;
  std::optional<std::uint64_t> seed;
  std::optional<InstanceFamily> family;
  std::optional<SetFamily> set_family;
  std::optional<bool> unique_certificate;
};

struct ProblemFile {
  ProblemData problem;
  std::optional<TruthSidecar> truth;
};

ProblemFile parse_problem(std::string_view text);
std::string serialize_problem(const ProblemData& problem,
                              const std::optional<TruthSidecar>& truth = std::nullopt);
std::string serialize_bundle(const InstanceBundle& bundle);

/// Candidate certificate: {"kind": ..., "vector": [...]}, or an outcome file
/// carrying a "certificate" member.
struct Candidate {
  CertificateKind kind;
  Vector vector;
};
Candidate parse_candidate(std::string_view text);

/// Warm start: "x" plus either "v" or "z" and "y" (DR), "x" and "y" (PP).
struct WarmStart {
  Vector x;
  std::optional<Vector> v;
  std::optional<Vector> z;
  std::optional<Vector> y;
};
WarmStart parse_warm_start(std::string_view text);

/// Solver settings echoed into the outcome file.
struct ConfigEcho {
  std::string solver;
  double alpha = 0.0;  ///< DR only
  double gamma = 0.0;  ///< PP only
  InnerMethod inner_method = InnerMethod::semismooth_newton;
  Tolerances tol;
};

std::string serialize_outcome(const SolveOutcome& outcome, const ConfigEcho& config);

/// Trace CSV with a header row; `with_inner` appends the inner_iters column.
std::string serialize_trace(const std::vector<TraceRecord>& trace, bool with_inner);

/// Reads a whole file; throws InputError (line 0) when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace certqp
