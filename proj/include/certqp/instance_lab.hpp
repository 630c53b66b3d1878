#pragma once

// Problem instances with analytic ground truth, random convex sets for
// property tests, and the Cesaro projection-limit oracle.
//
// Random numbers come from SplitMix64 (Steele, Lea & Flood): the state
// advances by 0x9E3779B97F4A7C15 and is mixed by
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//   z ^= z >> 31.
// A uniform double on [0, 1) is (next() >> 11) * 2^-53, and the generators
// draw entries uniformly from [-1, 1] as 2u - 1. Draw order is fixed, so a
// seed reproduces a bundle bit for bit.

#include "certqp/problem.hpp"

#include <cstdint>
#include <string_view>
#include <variant>

namespace certqp {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on [-1, 1).
  double uniform() { return 2.0 * uniform01() - 1.0; }
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  Vector vector(Index n);
  DenseMatrix matrix(Index rows, Index cols);

 private:
  std::uint64_t state_;
};

enum class InstanceFamily { feasible, primal_infeasible, dual_infeasible };
enum class SetFamily { box, orthant, translated_cone, box_soc };

std::string_view to_string(InstanceFamily f);
std::string_view to_string(SetFamily f);
InstanceFamily instance_family_from_string(std::string_view s);
SetFamily set_family_from_string(std::string_view s);

/// Optimal primal-dual triple: Ax = z, Qx + q + A^T y = 0, z in C, y in N_C(z).
struct KktTruth {
  Vector x, z, y;
};

struct CertificateTruth {
  CertificateKind kind;
  Vector vector;
};

using Truth = std::variant<KktTruth, CertificateTruth>;

struct InstanceBundle {
  ProblemData problem;
  Truth truth;
  std::uint64_t seed = 0;
  InstanceFamily family = InstanceFamily::feasible;
  SetFamily set_family = SetFamily::box;
  /// The certificate direction is unique up to positive scaling
  /// (ker A^T is a line for primal, ker Q is a line for dual instances).
  bool unique_certificate = false;
};

/// Feasible instance with Q positive definite and a known KKT triple.
InstanceBundle gen_feasible(std::uint64_t seed, Index n, Index m, SetFamily family);

/// Primal strongly infeasible instance; requires m >= 2.
InstanceBundle gen_primal_infeasible(std::uint64_t seed, Index n, Index m, SetFamily family);

/// Dual strongly infeasible instance whose primal is feasible.
InstanceBundle gen_dual_infeasible(std::uint64_t seed, Index n, Index m, SetFamily family);

InstanceBundle generate(InstanceFamily family, std::uint64_t seed, Index n, Index m,
                        SetFamily set_family);

/// True when the stored truth holds at tolerance eps: KKT residuals, z in C
/// and z = P_C(z + y) for feasible bundles; the certificate checker otherwise.
bool validate_truth(const InstanceBundle& bundle, double eps);

/// x in [1, 2] and x in [3, 4]; certificate (1, -1).
InstanceBundle disjoint_interval_instance();
/// minimize -x s.t. x >= 0; certificate (1).
InstanceBundle unbounded_linear_instance();
/// minimize x^2/2 - x/2 s.t. x in [0, 1]; solution x = 0.5.
InstanceBundle canonical_feasible_instance();

/// Descriptor kinds for random set generation.
enum class SetKind { box, nonneg, zero, point, halfspace, ball, soc, translated_cone, cartesian };

inline constexpr SetKind kAllSetKinds[] = {SetKind::box,  SetKind::nonneg, SetKind::zero,
                                           SetKind::point, SetKind::halfspace, SetKind::ball,
                                           SetKind::soc,  SetKind::translated_cone,
                                           SetKind::cartesian};

std::string_view to_string(SetKind k);

/// Random descriptor of the requested kind and dimension (dim >= 1; a
/// Cartesian set needs dim >= 2 to have more than one part).
ConvexSet random_set(SplitMix64& rng, SetKind kind, Index dim);

/// Numerical witnesses for the limits of projections along s_n = s0 + n ds.
struct CesaroWitness {
  Vector p_avg;      ///< P_S(s_n) / n, tends to P_{rec S}(ds)
  Vector r_avg;      ///< (s_n - P_S(s_n)) / n, tends to P_{(rec S)°}(ds)
  double inner_avg;  ///< <P_S(s_n), s_n - P_S(s_n)> / n, tends to sigma_S(P_{(rec S)°}(ds))
};

/// Throws std::invalid_argument for n == 0, DimensionError on shape mismatch.
CesaroWitness cesaro_oracle(const ConvexSet& set, const Vector& delta_s, const Vector& s0,
                            std::uint64_t n);

}  // namespace certqp
