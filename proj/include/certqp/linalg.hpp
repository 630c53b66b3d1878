#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace certqp {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSymmetric : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute per-entry tolerance used when deciding whether a matrix is symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

void require_same_dim(Index expected, Index actual, const char* what);

Vector matvec(const DenseMatrix& m, const Vector& x);

/// Returns m^T y.
Vector adjoint_matvec(const DenseMatrix& m, const Vector& y);

/// Max-abs norm; zero for an empty vector.
double inf_norm(const Vector& v);

bool all_finite(const Vector& v);
bool all_finite(const DenseMatrix& m);

/// Largest absolute asymmetry |m_ij - m_ji|.
double asymmetry(const DenseMatrix& m);

/// Power-iteration estimate of the largest singular value.
double spectral_norm_estimate(const DenseMatrix& m, int iterations = 200);

/// Cholesky factor of a symmetric positive-definite matrix.
///
/// The input is symmetrized as (M + M^T) / 2 before factoring, so round-trip
/// noise below kSymmetryTolerance does not matter. Factor once, solve many.
class SpdFactor {
 public:
  static SpdFactor factor(const DenseMatrix& m);

  Vector solve(const Vector& b) const;
  Index order() const { return llt_.rows(); }
  /// L L^T, for checking factor accuracy.
  DenseMatrix reconstruct() const;

 private:
  explicit SpdFactor(Eigen::LLT<DenseMatrix> llt) : llt_(std::move(llt)) {}
  Eigen::LLT<DenseMatrix> llt_;
};

inline SpdFactor spd_factor(const DenseMatrix& m) { return SpdFactor::factor(m); }
inline Vector spd_solve(const SpdFactor& f, const Vector& b) { return f.solve(b); }

}  // namespace certqp
