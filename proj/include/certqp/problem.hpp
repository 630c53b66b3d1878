#pragma once

// Convex QP data
//
//   minimize   1/2 <Qx, x> + <q, x>
//   subject to Ax in C
//
// together with KKT residuals and the strong-infeasibility certificate checks.

#include "certqp/convex_sets.hpp"
#include "certqp/linalg.hpp"

#include <string_view>
#include <variant>

namespace certqp {

class ProblemData {
 public:
  /// Validates shapes, finiteness, symmetry of Q (1e-12, then symmetrized)
  /// and positive semidefiniteness of Q. Throws std::invalid_argument.
  ProblemData(DenseMatrix Q, Vector q, DenseMatrix A, ConvexSet C);

  const DenseMatrix& Q() const { return Q_; }
  const Vector& q() const { return q_; }
  const DenseMatrix& A() const { return A_; }
  const ConvexSet& C() const { return C_; }

  /// Number of variables.
  Index n() const { return q_.size(); }
  /// Number of constraint rows.
  Index m() const { return A_.rows(); }

 private:
  DenseMatrix Q_;
  Vector q_;
  DenseMatrix A_;
  ConvexSet C_;
};

struct KktResiduals {
  double primal = 0.0;  ///< ||Ax - z||_inf
  double dual = 0.0;    ///< ||Qx + q + A^T y||_inf
};

KktResiduals kkt_residuals(const ProblemData& p, const Vector& x, const Vector& z, const Vector& y);

enum class CertificateKind { primal_infeasibility, dual_infeasibility };

std::string_view to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(std::string_view s);

struct PrimalCertificateMetrics {
  double adjoint_norm;  ///< ||A^T y||_inf
  double support;       ///< sigma_C(y), possibly +inf
};

struct DualCertificateMetrics {
  double quadratic_norm;      ///< ||Q x||_inf
  double recession_distance;  ///< dist(Ax, rec C)
  double linear_term;         ///< <q, x>
};

struct Certificate {
  CertificateKind kind;
  Vector vector;
  std::variant<PrimalCertificateMetrics, DualCertificateMetrics> metrics;
};

struct CertificateCheck {
  bool passed;
  Certificate certificate;
};

/// Recomputes metrics for `vector` interpreted as `kind`.
Certificate make_certificate(const ProblemData& p, CertificateKind kind, Vector vector);

/// A^T y = 0 and sigma_C(y) < 0, relaxed with the scale-free tolerance
/// ||A^T y||_inf <= eps ||y||_inf and sigma_C(y) <= -eps ||y||_inf.
/// Throws std::invalid_argument for a zero vector or eps <= 0.
CertificateCheck check_primal_certificate(const ProblemData& p, const Vector& ybar, double eps);

/// Qx = 0, Ax in rec C, <q, x> < 0, relaxed as
/// ||Qx||_inf <= eps ||x||_inf, dist(Ax, rec C) <= eps ||x||_inf and
/// <q, x> <= -eps ||x||_inf.
CertificateCheck check_dual_certificate(const ProblemData& p, const Vector& xbar, double eps);

CertificateCheck check_certificate(const ProblemData& p, CertificateKind kind, const Vector& v,
                                   double eps);

}  // namespace certqp
