#include "certqp/problem.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <string>

namespace certqp {
namespace {

void require_nonzero(const Vector& v, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("certificate tolerance must be > 0");
  if (v.size() == 0 || inf_norm(v) == 0.0) {
    throw std::invalid_argument("certificate must be nonzero");
  }
}

}  // namespace

ProblemData::ProblemData(DenseMatrix Q, Vector q, DenseMatrix A, ConvexSet C)
    : Q_(std::move(Q)), q_(std::move(q)), A_(std::move(A)), C_(std::move(C)) {
  const Index n = q_.size();
  if (Q_.rows() != n || Q_.cols() != n) {
    throw DimensionError("problem: Q must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (A_.cols() != n) throw DimensionError("problem: A must have " + std::to_string(n) + " columns");
  if (C_.dim() != A_.rows()) {
    throw DimensionError("problem: set dimension " + std::to_string(C_.dim()) +
                         " does not match A rows " + std::to_string(A_.rows()));
  }
  if (!Q_.allFinite() || !q_.allFinite() || !A_.allFinite()) {
    throw std::invalid_argument("problem: non-finite entry in Q, q or A");
  }
  if (asymmetry(Q_) > kSymmetryTolerance) throw NotSymmetric("problem: Q is not symmetric");
  Q_ = 0.5 * (Q_ + Q_.transpose()).eval();
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(Q_, Eigen::EigenvaluesOnly);
    const double scale = 1.0 + eig.eigenvalues().cwiseAbs().maxCoeff();
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw std::invalid_argument("problem: Q is not positive semidefinite");
    }
  }
}

KktResiduals kkt_residuals(const ProblemData& p, const Vector& x, const Vector& z, const Vector& y) {
  require_same_dim(p.n(), x.size(), "kkt_residuals x");
  require_same_dim(p.m(), z.size(), "kkt_residuals z");
  require_same_dim(p.m(), y.size(), "kkt_residuals y");
  return {inf_norm(p.A() * x - z), inf_norm(p.Q() * x + p.q() + p.A().transpose() * y)};
}

std::string_view to_string(CertificateKind kind) {
  return kind == CertificateKind::primal_infeasibility ? "primal_infeasibility"
                                                       : "dual_infeasibility";
}

CertificateKind certificate_kind_from_string(std::string_view s) {
  if (s == "primal_infeasibility") return CertificateKind::primal_infeasibility;
  if (s == "dual_infeasibility") return CertificateKind::dual_infeasibility;
  throw std::invalid_argument("unknown certificate kind '" + std::string(s) + "'");
}

Certificate make_certificate(const ProblemData& p, CertificateKind kind, Vector vector) {
  if (kind == CertificateKind::primal_infeasibility) {
    require_same_dim(p.m(), vector.size(), "primal certificate");
    PrimalCertificateMetrics m{inf_norm(p.A().transpose() * vector), support(p.C(), vector)};
    return {kind, std::move(vector), m};
  }
  require_same_dim(p.n(), vector.size(), "dual certificate");
  DualCertificateMetrics m{inf_norm(p.Q() * vector), distance_to_recession(p.C(), p.A() * vector),
                           p.q().dot(vector)};
  return {kind, std::move(vector), m};
}

CertificateCheck check_primal_certificate(const ProblemData& p, const Vector& ybar, double eps) {
  require_same_dim(p.m(), ybar.size(), "primal certificate");
  require_nonzero(ybar, eps);
  Certificate cert = make_certificate(p, CertificateKind::primal_infeasibility, ybar);
  const auto& m = std::get<PrimalCertificateMetrics>(cert.metrics);
  const double scale = inf_norm(ybar);
  const bool ok = m.adjoint_norm <= eps * scale && m.support <= -eps * scale;
  return {ok, std::move(cert)};
}

CertificateCheck check_dual_certificate(const ProblemData& p, const Vector& xbar, double eps) {
  require_same_dim(p.n(), xbar.size(), "dual certificate");
  require_nonzero(xbar, eps);
  Certificate cert = make_certificate(p, CertificateKind::dual_infeasibility, xbar);
  const auto& m = std::get<DualCertificateMetrics>(cert.metrics);
  const double scale = inf_norm(xbar);
  const bool ok = m.quadratic_norm <= eps * scale && m.recession_distance <= eps * scale &&
                  m.linear_term <= -eps * scale;
  return {ok, std::move(cert)};
}

CertificateCheck check_certificate(const ProblemData& p, CertificateKind kind, const Vector& v,
                                   double eps) {
  return kind == CertificateKind::primal_infeasibility ? check_primal_certificate(p, v, eps)
                                                       : check_dual_certificate(p, v, eps);
}

}  // namespace certqp
