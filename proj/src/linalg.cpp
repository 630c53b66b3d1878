#include "certqp/linalg.hpp"

#include <cmath>
#include <limits>

namespace certqp {

void require_same_dim(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

Vector matvec(const DenseMatrix& m, const Vector& x) {
  require_same_dim(m.cols(), x.size(), "matvec");
  return m * x;
}

Vector adjoint_matvec(const DenseMatrix& m, const Vector& y) {
  require_same_dim(m.rows(), y.size(), "adjoint_matvec");
  return m.transpose() * y;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

double asymmetry(const DenseMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double spectral_norm_estimate(const DenseMatrix& m, int iterations) {
  if (m.size() == 0) return 0.0;
  // Deterministic start vector; all-ones rarely lies in a null space of a random matrix.
  Vector v = Vector::Ones(m.cols()) / std::sqrt(static_cast<double>(m.cols()));
  double sigma = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector w = m.transpose() * (m * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - sigma) <= 1e-14 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

SpdFactor SpdFactor::factor(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("spd_factor: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw std::invalid_argument("spd_factor: non-finite entry");
  if (asymmetry(m) > kSymmetryTolerance) throw NotSymmetric("spd_factor: matrix is not symmetric");
  DenseMatrix sym = 0.5 * (m + m.transpose());
  Eigen::LLT<DenseMatrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_factor: matrix is not positive definite");
  }
  return SpdFactor(std::move(llt));
}

Vector SpdFactor::solve(const Vector& b) const {
  require_same_dim(order(), b.size(), "spd_solve");
  if (order() == 0) return Vector();
  return llt_.solve(b);
}

DenseMatrix SpdFactor::reconstruct() const { return llt_.reconstructedMatrix(); }

}  // namespace certqp
