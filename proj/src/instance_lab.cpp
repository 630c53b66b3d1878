#include "certqp/instance_lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace certqp {
namespace {

constexpr double kRidge = 0.1;          // Q = G^T G + ridge I for Q > 0 families
constexpr double kInfiniteSide = 0.3;   // chance an unused box side is infinite
constexpr double kRankTol = 1e-8;
constexpr double kSingularFloor = 0.3;  // smallest nonzero singular value of A / sigma_max

Index numerical_rank(const DenseMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) r += s(i) > kRankTol * s(0) ? 1 : 0;
  return r;
}

// Random matrix scaled to unit spectral norm; returns the scale factor.
double normalize_spectral(DenseMatrix& a) {
  const double s = spectral_norm_estimate(a);
  if (s > 0.0) a /= s;
  return s;
}

// Raises the nonzero singular values of `a` to at least ratio * sigma_max;
// structurally zero ones (below kRankTol * sigma_max) stay zero.
void floor_singular_values(DenseMatrix& a, double ratio) {
  if (a.size() == 0) return;
  Eigen::JacobiSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return;
  const double top = s(0);
  for (Index i = 0; i < s.size(); ++i) {
    s(i) = s(i) > kRankTol * top ? std::max(s(i), ratio * top) : 0.0;
  }
  a = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

DenseMatrix random_psd(SplitMix64& rng, Index n, double ridge) {
  DenseMatrix g = rng.matrix(n, n);
  normalize_spectral(g);
  DenseMatrix q = g.transpose() * g + ridge * DenseMatrix::Identity(n, n);
  return 0.5 * (q + q.transpose());
}

// Changes `a` by a rank-one term so that a * x == target.
void force_image(DenseMatrix& a, const Vector& x, const Vector& target) {
  a += (target - a * x) * x.transpose() / x.squaredNorm();
}

Vector random_nonzero(SplitMix64& rng, Index n) {
  Vector v = rng.vector(n);
  while (v.norm() < 1e-3) v = rng.vector(n);
  return v;
}

// Point strictly inside the second-order cone of dimension d.
Vector soc_interior(SplitMix64& rng, Index d) {
  Vector k(d);
  const Vector tail = rng.vector(d - 1);
  const double margin = rng.uniform(0.1, 1.0);
  k(0) = tail.norm() * (1.0 + margin) + 0.1;
  k.tail(d - 1) = tail;
  return k;
}

// Complementary pair (k, y) with k in the SOC and y in its normal cone at k.
void soc_complementary(SplitMix64& rng, Index d, Vector& k, Vector& y) {
  const auto state = rng.below(3);
  if (d == 1 || state == 0) {
    k = soc_interior(rng, d);
    y = Vector::Zero(d);
    if (d == 1 && state != 0) {
      k(0) = 0.0;
      y(0) = -rng.uniform(0.1, 1.0);
    }
    return;
  }
  Vector u = random_nonzero(rng, d - 1);
  u.normalize();
  if (state == 1) {
    const double s = rng.uniform(0.1, 1.0);
    const double r = rng.uniform(0.1, 1.0);
    k.resize(d);
    k(0) = s;
    k.tail(d - 1) = s * u;
    y.resize(d);
    y(0) = -r;
    y.tail(d - 1) = r * u;
    return;
  }
  k = Vector::Zero(d);
  y = -soc_interior(rng, d);
}

struct SetWithPair {
  ConvexSet set;
  Vector z;
  Vector y;
};

SetWithPair feasible_box(SplitMix64& rng, Index m) {
  Vector l(m), u(m), z(m), y(m);
  for (Index i = 0; i < m; ++i) {
    z(i) = rng.uniform();
    const double w1 = rng.uniform(0.1, 1.0);
    const double w2 = rng.uniform(0.1, 1.0);
    const bool open_side = rng.uniform01() < kInfiniteSide;
    switch (rng.below(3)) {
      case 0:  // inactive
        l(i) = z(i) - w1;
        u(i) = open_side ? kInf : z(i) + w2;
        y(i) = 0.0;
        break;
      case 1:  // upper bound active
        u(i) = z(i);
        l(i) = open_side ? -kInf : z(i) - w1;
        y(i) = w2;
        break;
      default:  // lower bound active
        l(i) = z(i);
        u(i) = open_side ? kInf : z(i) + w1;
        y(i) = -w2;
        break;
    }
  }
  return {ConvexSet::box(l, u), z, y};
}

SetWithPair feasible_orthant(SplitMix64& rng, Index m) {
  Vector z(m), y(m);
  for (Index i = 0; i < m; ++i) {
    const double w = rng.uniform(0.1, 1.0);
    if (rng.below(2) == 0) {
      z(i) = w;
      y(i) = 0.0;
    } else {
      z(i) = 0.0;
      y(i) = -w;
    }
  }
  return {ConvexSet::nonnegative_orthant(m), z, y};
}

SetWithPair feasible_translated_cone(SplitMix64& rng, Index m) {
  Vector k, y;
  Cone cone = m >= 2 ? Cone{SecondOrderCone{m}} : Cone{NonnegativeOrthant{m}};
  soc_complementary(rng, m, k, y);  // for m == 1 the SOC is the half-line
  const Vector z = rng.vector(m);
  return {ConvexSet::translated_cone(z - k, cone), z, y};
}

Index box_part_dim(Index m) { return m / 2; }

SetWithPair feasible_box_soc(SplitMix64& rng, Index m) {
  if (m < 3) return feasible_box(rng, m);
  const Index mb = box_part_dim(m);
  const Index ms = m - mb;
  SetWithPair box = feasible_box(rng, mb);
  Vector k, yk;
  soc_complementary(rng, ms, k, yk);
  Vector z(m), y(m);
  z << box.z, k;
  y << box.y, yk;
  std::vector<ConvexSet> parts{box.set, ConvexSet::second_order_cone(ms)};
  return {ConvexSet::cartesian(std::move(parts)), z, y};
}

// Box with sigma_C(ybar) == target.
ConvexSet separating_box(SplitMix64& rng, const Vector& ybar, double target) {
  const Index m = ybar.size();
  Vector l(m), u(m);
  for (Index i = 0; i < m; ++i) {
    const double c = rng.uniform();
    const double w = rng.uniform(0.1, 1.0);
    const bool open_side = rng.uniform01() < kInfiniteSide;
    l(i) = c - w;
    u(i) = c + w;
    if (open_side && ybar(i) > 0.0) l(i) = -kInf;
    if (open_side && ybar(i) < 0.0) u(i) = kInf;
  }
  const double sigma = support(ConvexSet::box(l, u), ybar);
  const double t = (sigma - target) / ybar.squaredNorm();
  return ConvexSet::box(l - t * ybar, u - t * ybar);
}

// Offset a with <a, ybar> == target.
Vector separating_offset(SplitMix64& rng, const Vector& ybar, double target) {
  const Vector a = rng.vector(ybar.size());
  const double t = (a.dot(ybar) - target) / ybar.squaredNorm();
  return a - t * ybar;
}

struct SetWithCertificate {
  ConvexSet set;
  Vector ybar;
};

SetWithCertificate primal_infeasible_set(SplitMix64& rng, Index m, SetFamily family) {
  switch (family) {
    case SetFamily::box: {
      const Vector ybar = random_nonzero(rng, m);
      const double target = -rng.uniform(0.5, 1.0) * ybar.norm();
      return {separating_box(rng, ybar, target), ybar};
    }
    case SetFamily::orthant: {
      Vector ybar(m);
      for (Index i = 0; i < m; ++i) {
        const double w = rng.uniform(0.1, 1.0);
        ybar(i) = rng.uniform01() < 0.3 ? 0.0 : -w;
      }
      if (ybar.norm() == 0.0) ybar(0) = -0.5;
      const double target = -rng.uniform(0.5, 1.0) * ybar.norm();
      return {ConvexSet::translated_cone(separating_offset(rng, ybar, target), NonnegativeOrthant{m}),
              ybar};
    }
    case SetFamily::translated_cone: {
      const Vector ybar = -soc_interior(rng, m);
      const double target = -rng.uniform(0.5, 1.0) * ybar.norm();
      return {ConvexSet::translated_cone(separating_offset(rng, ybar, target), SecondOrderCone{m}),
              ybar};
    }
    case SetFamily::box_soc: {
      if (m < 3) return primal_infeasible_set(rng, m, SetFamily::box);
      const Index mb = box_part_dim(m);
      const Index ms = m - mb;
      const Vector yb = random_nonzero(rng, mb);
      const Vector ys = -soc_interior(rng, ms);
      const double target = -rng.uniform(0.5, 1.0) * yb.norm();
      Vector ybar(m);
      ybar << yb, ys;
      std::vector<ConvexSet> parts{separating_box(rng, yb, target), ConvexSet::second_order_cone(ms)};
      return {ConvexSet::cartesian(std::move(parts)), ybar};
    }
  }
  throw std::logic_error("unreachable set family");
}

// Box containing z0 whose recession cone contains d.
ConvexSet recession_box(SplitMix64& rng, const Vector& z0, const Vector& d) {
  const Index m = z0.size();
  Vector l(m), u(m);
  for (Index i = 0; i < m; ++i) {
    const double w = rng.uniform(0.1, 1.0);
    const bool open_side = rng.uniform01() < kInfiniteSide;
    if (d(i) > 0.0) {
      u(i) = kInf;
      l(i) = open_side ? -kInf : z0(i) - w;
    } else if (d(i) < 0.0) {
      l(i) = -kInf;
      u(i) = open_side ? kInf : z0(i) + w;
    } else {
      l(i) = z0(i) - w;
      u(i) = z0(i) + w;
    }
  }
  return ConvexSet::box(l, u);
}

CertificateTruth certificate(CertificateKind kind, Vector v) { return {kind, std::move(v)}; }

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Vector SplitMix64::vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform();
  return v;
}

DenseMatrix SplitMix64::matrix(Index rows, Index cols) {
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform();
  return m;
}

std::string_view to_string(InstanceFamily f) {
  switch (f) {
    case InstanceFamily::feasible:
      return "feasible";
    case InstanceFamily::primal_infeasible:
      return "primal_infeasible";
    case InstanceFamily::dual_infeasible:
      return "dual_infeasible";
  }
  return "unknown";
}

std::string_view to_string(SetFamily f) {
  switch (f) {
    case SetFamily::box:
      return "box";
    case SetFamily::orthant:
      return "orthant";
    case SetFamily::translated_cone:
      return "translated_cone";
    case SetFamily::box_soc:
      return "box_soc";
  }
  return "unknown";
}

InstanceFamily instance_family_from_string(std::string_view s) {
  for (auto f : {InstanceFamily::feasible, InstanceFamily::primal_infeasible,
                 InstanceFamily::dual_infeasible}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown instance family '" + std::string(s) + "'");
}

SetFamily set_family_from_string(std::string_view s) {
  for (auto f : {SetFamily::box, SetFamily::orthant, SetFamily::translated_cone, SetFamily::box_soc}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown set family '" + std::string(s) + "'");
}

InstanceBundle gen_feasible(std::uint64_t seed, Index n, Index m, SetFamily family) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_feasible: n and m must be >= 1");
  SplitMix64 rng(seed);
  SetWithPair c = [&] {
    switch (family) {
      case SetFamily::box:
        return feasible_box(rng, m);
      case SetFamily::orthant:
        return feasible_orthant(rng, m);
      case SetFamily::translated_cone:
        return feasible_translated_cone(rng, m);
      case SetFamily::box_soc:
        return feasible_box_soc(rng, m);
    }
    throw std::logic_error("unreachable set family");
  }();
  DenseMatrix a = rng.matrix(m, n);
  floor_singular_values(a, kSingularFloor);
  Vector x = random_nonzero(rng, n);
  force_image(a, x, c.z);
  const double s = normalize_spectral(a);
  x *= s;
  const DenseMatrix q_mat = random_psd(rng, n, kRidge);
  const Vector q = -(q_mat * x + a.transpose() * c.y);
  InstanceBundle b{ProblemData(q_mat, q, a, c.set), KktTruth{x, c.z, c.y}, seed,
                   InstanceFamily::feasible, family, false};
  return b;
}

InstanceBundle gen_primal_infeasible(std::uint64_t seed, Index n, Index m, SetFamily family) {
  if (n < 1 || m < 2) throw std::invalid_argument("gen_primal_infeasible: need n >= 1, m >= 2");
  SplitMix64 rng(seed);
  SetWithCertificate c = primal_infeasible_set(rng, m, family);
  const Vector& ybar = c.ybar;
  DenseMatrix a = rng.matrix(m, n);
  a -= ybar * (ybar.transpose() * a) / ybar.squaredNorm();
  floor_singular_values(a, kSingularFloor);
  a -= ybar * (ybar.transpose() * a) / ybar.squaredNorm();
  normalize_spectral(a);
  const DenseMatrix q_mat = random_psd(rng, n, kRidge);
  const Vector q = rng.vector(n);
  const bool unique = numerical_rank(a) == m - 1;
  return InstanceBundle{ProblemData(q_mat, q, a, c.set),
                        certificate(CertificateKind::primal_infeasibility, ybar), seed,
                        InstanceFamily::primal_infeasible, family, unique};
}

InstanceBundle gen_dual_infeasible(std::uint64_t seed, Index n, Index m, SetFamily family) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_dual_infeasible: n and m must be >= 1");
  SplitMix64 rng(seed);
  const Vector xbar = random_nonzero(rng, n);

  // Q = P (G^T G + ridge I) P with P the projector onto xbar-perp, i.e. Q = H^T H
  // for H = (G^T G + ridge I)^(1/2) P, which annihilates xbar.
  const DenseMatrix proj =
      DenseMatrix::Identity(n, n) - xbar * xbar.transpose() / xbar.squaredNorm();
  DenseMatrix q_mat = proj * random_psd(rng, n, kRidge) * proj;
  q_mat = 0.5 * (q_mat + q_mat.transpose()).eval();

  DenseMatrix a = rng.matrix(m, n);
  const SetFamily effective = (family == SetFamily::box_soc && m < 3) ? SetFamily::box : family;
  ConvexSet set = ConvexSet::zero(0);
  switch (effective) {
    case SetFamily::box: {
      normalize_spectral(a);
      const Vector x0 = rng.vector(n);
      set = recession_box(rng, a * x0, a * xbar);
      break;
    }
    case SetFamily::orthant: {
      Vector d(m);
      for (Index i = 0; i < m; ++i) d(i) = rng.uniform(0.1, 1.0);
      force_image(a, xbar, d);
      normalize_spectral(a);
      set = ConvexSet::nonnegative_orthant(m);
      break;
    }
    case SetFamily::translated_cone: {
      const Vector d = m >= 2 ? soc_interior(rng, m) : Vector::Constant(1, rng.uniform(0.1, 1.0));
      force_image(a, xbar, d);
      normalize_spectral(a);
      const Vector x0 = rng.vector(n);
      const Vector k = m >= 2 ? soc_interior(rng, m) : Vector::Constant(1, rng.uniform(0.1, 1.0));
      Cone cone = m >= 2 ? Cone{SecondOrderCone{m}} : Cone{NonnegativeOrthant{m}};
      set = ConvexSet::translated_cone(a * x0 - k, cone);
      break;
    }
    case SetFamily::box_soc: {
      const Index mb = box_part_dim(m);
      const Index ms = m - mb;
      Vector d(m);
      d << rng.vector(mb), soc_interior(rng, ms);
      force_image(a, xbar, d);
      normalize_spectral(a);
      // x0 = 0 is feasible: the box part is built around 0, the cone contains 0.
      std::vector<ConvexSet> parts{recession_box(rng, Vector::Zero(mb), (a * xbar).head(mb)),
                                   ConvexSet::second_order_cone(ms)};
      set = ConvexSet::cartesian(std::move(parts));
      break;
    }
  }

  Vector q = rng.vector(n);
  const double decrease = rng.uniform(0.5, 1.0) * xbar.norm();
  q -= ((q.dot(xbar) + decrease) / xbar.squaredNorm()) * xbar;

  const bool unique = n == 1 || numerical_rank(q_mat) == n - 1;
  return InstanceBundle{ProblemData(q_mat, q, a, std::move(set)),
                        certificate(CertificateKind::dual_infeasibility, xbar), seed,
                        InstanceFamily::dual_infeasible, family, unique};
}

InstanceBundle generate(InstanceFamily family, std::uint64_t seed, Index n, Index m,
                        SetFamily set_family) {
  switch (family) {
    case InstanceFamily::feasible:
      return gen_feasible(seed, n, m, set_family);
    case InstanceFamily::primal_infeasible:
      return gen_primal_infeasible(seed, n, m, set_family);
    case InstanceFamily::dual_infeasible:
      return gen_dual_infeasible(seed, n, m, set_family);
  }
  throw std::logic_error("unreachable instance family");
}

bool validate_truth(const InstanceBundle& bundle, double eps) {
  const ProblemData& p = bundle.problem;
  if (const auto* kkt = std::get_if<KktTruth>(&bundle.truth)) {
    const KktResiduals r = kkt_residuals(p, kkt->x, kkt->z, kkt->y);
    if (r.primal > eps || r.dual > eps) return false;
    if (!contains(p.C(), kkt->z, eps)) return false;
    return inf_norm(project(p.C(), kkt->z + kkt->y) - kkt->z) <= eps;
  }
  const auto& cert = std::get<CertificateTruth>(bundle.truth);
  return check_certificate(p, cert.kind, cert.vector, eps).passed;
}

InstanceBundle disjoint_interval_instance() {
  DenseMatrix a(2, 1);
  a << 1.0, 1.0;
  Vector l(2), u(2);
  l << 1.0, 3.0;
  u << 2.0, 4.0;
  Vector ybar(2);
  ybar << 1.0, -1.0;
  return InstanceBundle{ProblemData(DenseMatrix::Zero(1, 1), Vector::Zero(1), a, ConvexSet::box(l, u)),
                        certificate(CertificateKind::primal_infeasibility, ybar), 0,
                        InstanceFamily::primal_infeasible, SetFamily::box, true};
}

InstanceBundle unbounded_linear_instance() {
  return InstanceBundle{ProblemData(DenseMatrix::Zero(1, 1), Vector::Constant(1, -1.0),
                                    DenseMatrix::Identity(1, 1),
                                    ConvexSet::box(Vector::Zero(1), Vector::Constant(1, kInf))),
                        certificate(CertificateKind::dual_infeasibility, Vector::Ones(1)), 0,
                        InstanceFamily::dual_infeasible, SetFamily::box, true};
}

InstanceBundle canonical_feasible_instance() {
  return InstanceBundle{
      ProblemData(DenseMatrix::Identity(1, 1), Vector::Constant(1, -0.5), DenseMatrix::Identity(1, 1),
                  ConvexSet::box(Vector::Zero(1), Vector::Ones(1))),
      KktTruth{Vector::Constant(1, 0.5), Vector::Constant(1, 0.5), Vector::Zero(1)}, 0,
      InstanceFamily::feasible, SetFamily::box, false};
}

std::string_view to_string(SetKind k) {
  switch (k) {
    case SetKind::box:
      return "box";
    case SetKind::nonneg:
      return "nonneg";
    case SetKind::zero:
      return "zero";
    case SetKind::point:
      return "point";
    case SetKind::halfspace:
      return "halfspace";
    case SetKind::ball:
      return "ball";
    case SetKind::soc:
      return "soc";
    case SetKind::translated_cone:
      return "translated_cone";
    case SetKind::cartesian:
      return "cartesian";
  }
  return "unknown";
}

ConvexSet random_set(SplitMix64& rng, SetKind kind, Index dim) {
  if (dim < 1) throw std::invalid_argument("random_set: dimension must be >= 1");
  switch (kind) {
    case SetKind::box: {
      Vector l(dim), u(dim);
      for (Index i = 0; i < dim; ++i) {
        const double c = rng.uniform();
        const double w = rng.uniform(0.0, 1.0);
        const double open = rng.uniform01();
        l(i) = open < 0.2 ? -kInf : c - w;
        u(i) = (open >= 0.1 && open < 0.4) ? kInf : c + w;
      }
      return ConvexSet::box(l, u);
    }
    case SetKind::nonneg:
      return ConvexSet::nonnegative_orthant(dim);
    case SetKind::zero:
      return ConvexSet::zero(dim);
    case SetKind::point:
      return ConvexSet::singleton(rng.vector(dim));
    case SetKind::halfspace: {
      const Vector a = random_nonzero(rng, dim);
      return ConvexSet::halfspace(a, rng.uniform());
    }
    case SetKind::ball: {
      const Vector c = rng.vector(dim);
      const double r = rng.uniform01() < 0.1 ? 0.0 : rng.uniform(0.1, 1.5);
      return ConvexSet::ball(c, r);
    }
    case SetKind::soc:
      return ConvexSet::second_order_cone(dim);
    case SetKind::translated_cone: {
      const Vector a = rng.vector(dim);
      switch (rng.below(3)) {
        case 0:
          return ConvexSet::translated_cone(a, NonnegativeOrthant{dim});
        case 1:
          return ConvexSet::translated_cone(a, ZeroCone{dim});
        default:
          return ConvexSet::translated_cone(a, SecondOrderCone{dim});
      }
    }
    case SetKind::cartesian: {
      if (dim == 1) return ConvexSet::cartesian({random_set(rng, SetKind::box, 1)});
      std::vector<ConvexSet> parts;
      Index left = dim;
      while (left > 0) {
        const Index d = left == 1 ? 1 : 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(left)));
        // Every non-product kind; nested products appear through translated cones only.
        const auto k = static_cast<SetKind>(rng.below(8));
        parts.push_back(random_set(rng, k, d));
        left -= d;
      }
      return ConvexSet::cartesian(std::move(parts));
    }
  }
  throw std::logic_error("unreachable set kind");
}

CesaroWitness cesaro_oracle(const ConvexSet& set, const Vector& delta_s, const Vector& s0,
                            std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cesaro_oracle: n must be >= 1");
  require_same_dim(set.dim(), delta_s.size(), "cesaro_oracle delta_s");
  require_same_dim(set.dim(), s0.size(), "cesaro_oracle s0");
  const double nn = static_cast<double>(n);
  const Vector s = s0 + nn * delta_s;
  const Vector p = project(set, s);
  const Vector r = s - p;
  return {p / nn, r / nn, p.dot(r) / nn};
}

}  // namespace certqp
