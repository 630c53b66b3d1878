#include "certqp/convex_sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace certqp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Relative slack for second-order-cone polar membership. A residual
// v - proj(v) lands on the boundary of -K and rounding may push it a few ulps
// outside.
constexpr double kSocPolarSlack = 1e-12;

// Parallelism test tolerance for the halfspace support function.
constexpr double kHalfspaceParallelTol = 1e-9;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

Vector project_soc(const Vector& v) {
  const Index n = v.size();
  const double t = v(0);
  const double s = n > 1 ? v.tail(n - 1).norm() : 0.0;
  if (s <= t) return v;
  if (s <= -t) return Vector::Zero(n);
  const double scale = 0.5 * (t + s);
  Vector out(n);
  out(0) = scale;
  out.tail(n - 1) = (scale / s) * v.tail(n - 1);
  return out;
}

Vector project_cone(const Cone& cone, const Vector& v) {
  return std::visit(Overloaded{
                        [&](const NonnegativeOrthant&) -> Vector { return v.cwiseMax(0.0); },
                        [&](const ZeroCone& z) -> Vector { return Vector::Zero(z.dim); },
                        [&](const SecondOrderCone&) -> Vector { return project_soc(v); },
                    },
                    cone);
}

// True when y lies in the polar of the cone.
bool in_polar_cone(const Cone& cone, const Vector& y) {
  return std::visit(Overloaded{
                        [&](const NonnegativeOrthant&) { return y.size() == 0 || y.maxCoeff() <= 0.0; },
                        [&](const ZeroCone&) { return true; },
                        [&](const SecondOrderCone&) {
                          const Index n = y.size();
                          const double s = n > 1 ? y.tail(n - 1).norm() : 0.0;
                          return s <= -y(0) + kSocPolarSlack * y.norm();
                        },
                    },
                    cone);
}

DenseMatrix soc_jacobian(const Vector& v) {
  const Index n = v.size();
  const double t = v(0);
  const double s = n > 1 ? v.tail(n - 1).norm() : 0.0;
  if (s < t) return DenseMatrix::Identity(n, n);
  if (s <= -t || s == 0.0) return DenseMatrix::Zero(n, n);
  const Vector u = v.tail(n - 1) / s;
  DenseMatrix j(n, n);
  j(0, 0) = 1.0;
  j.block(0, 1, 1, n - 1) = u.transpose();
  j.block(1, 0, n - 1, 1) = u;
  j.block(1, 1, n - 1, n - 1) =
      (1.0 + t / s) * DenseMatrix::Identity(n - 1, n - 1) - (t / s) * (u * u.transpose());
  return 0.5 * j;
}

DenseMatrix cone_jacobian(const Cone& cone, const Vector& v) {
  return std::visit(Overloaded{
                        [&](const NonnegativeOrthant&) -> DenseMatrix {
                          Vector d = (v.array() > 0.0).cast<double>();
                          return d.asDiagonal();
                        },
                        [&](const ZeroCone& z) -> DenseMatrix { return DenseMatrix::Zero(z.dim, z.dim); },
                        [&](const SecondOrderCone&) -> DenseMatrix { return soc_jacobian(v); },
                    },
                    cone);
}

void check_dim(const ConvexSet& set, const Vector& v, const char* what) {
  require_same_dim(set.dim(), v.size(), what);
}

// Applies `f(part, segment)` to each Cartesian part and stacks the results.
template <class F>
Vector blockwise(const Cartesian& c, const Vector& v, F&& f) {
  Vector out(v.size());
  Index offset = 0;
  for (const auto& part : c.parts) {
    const Index d = part.dim();
    out.segment(offset, d) = f(part, Vector(v.segment(offset, d)));
    offset += d;
  }
  return out;
}

}  // namespace

Index cone_dim(const Cone& cone) {
  return std::visit([](const auto& k) { return k.dim; }, cone);
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw DimensionError("box: bound dimensions differ");
  for (Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i))) throw std::invalid_argument("box: NaN bound");
    if (lower(i) == kInf || upper(i) == -kInf) {
      throw std::invalid_argument("box: lower bound +inf or upper bound -inf at index " +
                                  std::to_string(i));
    }
    if (lower(i) > upper(i)) {
      throw std::invalid_argument("box: empty (lower > upper) at index " + std::to_string(i));
    }
  }
  const Index n = lower.size();
  return ConvexSet(Box{std::move(lower), std::move(upper)}, n);
}

ConvexSet ConvexSet::whole_space(Index dim) {
  return box(Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf));
}

ConvexSet ConvexSet::nonnegative_orthant(Index dim) {
  if (dim < 0) throw std::invalid_argument("nonneg: negative dimension");
  return ConvexSet(NonnegativeOrthant{dim}, dim);
}

ConvexSet ConvexSet::zero(Index dim) {
  if (dim < 0) throw std::invalid_argument("zero: negative dimension");
  return ConvexSet(ZeroCone{dim}, dim);
}

ConvexSet ConvexSet::singleton(Vector point) {
  require_finite(point, "point");
  const Index n = point.size();
  return ConvexSet(Singleton{std::move(point)}, n);
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_finite(normal, "halfspace");
  if (!std::isfinite(offset)) throw std::invalid_argument("halfspace: non-finite offset");
  if (normal.size() == 0 || normal.norm() == 0.0) {
    throw std::invalid_argument("halfspace: normal must be nonzero");
  }
  const Index n = normal.size();
  return ConvexSet(Halfspace{std::move(normal), offset}, n);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  require_finite(center, "ball");
  if (!std::isfinite(radius) || radius < 0.0) {
    throw std::invalid_argument("ball: radius must be finite and >= 0");
  }
  const Index n = center.size();
  return ConvexSet(Ball{std::move(center), radius}, n);
}

ConvexSet ConvexSet::second_order_cone(Index dim) {
  if (dim < 1) throw std::invalid_argument("soc: dimension must be >= 1");
  return ConvexSet(SecondOrderCone{dim}, dim);
}

ConvexSet ConvexSet::translated_cone(Vector offset, Cone cone) {
  require_finite(offset, "translated_cone");
  if (std::holds_alternative<SecondOrderCone>(cone) && cone_dim(cone) < 1) {
    throw std::invalid_argument("soc: dimension must be >= 1");
  }
  if (cone_dim(cone) < 0) throw std::invalid_argument("translated_cone: negative dimension");
  require_same_dim(cone_dim(cone), offset.size(), "translated_cone");
  const Index n = offset.size();
  return ConvexSet(TranslatedCone{std::move(offset), std::move(cone)}, n);
}

ConvexSet ConvexSet::cartesian(std::vector<ConvexSet> parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.dim();
  return ConvexSet(Cartesian{std::move(parts)}, n);
}

std::string_view kind_name(const ConvexSet& set) {
  return std::visit(Overloaded{
                        [](const Box&) { return std::string_view("box"); },
                        [](const NonnegativeOrthant&) { return std::string_view("nonneg"); },
                        [](const ZeroCone&) { return std::string_view("zero"); },
                        [](const Singleton&) { return std::string_view("point"); },
                        [](const Halfspace&) { return std::string_view("halfspace"); },
                        [](const Ball&) { return std::string_view("ball"); },
                        [](const SecondOrderCone&) { return std::string_view("soc"); },
                        [](const TranslatedCone&) { return std::string_view("translated_cone"); },
                        [](const Cartesian&) { return std::string_view("cartesian"); },
                    },
                    set.kind());
}

Vector project(const ConvexSet& set, const Vector& v) {
  check_dim(set, v, "project");
  return std::visit(
      Overloaded{
          [&](const Box& b) -> Vector { return v.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const NonnegativeOrthant&) -> Vector { return v.cwiseMax(0.0); },
          [&](const ZeroCone&) -> Vector { return Vector::Zero(v.size()); },
          [&](const Singleton& s) -> Vector { return s.point; },
          [&](const Halfspace& h) -> Vector {
            const double excess = h.normal.dot(v) - h.offset;
            if (excess <= 0.0) return v;
            return v - (excess / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Ball& b) -> Vector {
            const Vector w = v - b.center;
            const double nw = w.norm();
            if (nw <= b.radius) return v;
            return b.center + (b.radius / nw) * w;
          },
          [&](const SecondOrderCone&) -> Vector { return project_soc(v); },
          [&](const TranslatedCone& tc) -> Vector {
            // Form the residual first so its sign pattern survives rounding.
            const Vector w = v - tc.offset;
            const Vector residual = w - project_cone(tc.cone, w);
            return v - residual;
          },
          [&](const Cartesian& c) -> Vector {
            return blockwise(c, v, [](const ConvexSet& p, const Vector& s) { return project(p, s); });
          },
      },
      set.kind());
}

double support(const ConvexSet& set, const Vector& y) {
  check_dim(set, y, "support");
  return std::visit(
      Overloaded{
          [&](const Box& b) -> double {
            double sum = 0.0;
            for (Index i = 0; i < y.size(); ++i) {
              if (y(i) > 0.0) {
                if (b.upper(i) == kInf) return kInf;
                sum += b.upper(i) * y(i);
              } else if (y(i) < 0.0) {
                if (b.lower(i) == -kInf) return kInf;
                sum += b.lower(i) * y(i);
              }
            }
            return sum;
          },
          [&](const NonnegativeOrthant& k) -> double { return in_polar_cone(k, y) ? 0.0 : kInf; },
          [&](const ZeroCone&) -> double { return 0.0; },
          [&](const Singleton& s) -> double { return s.point.dot(y); },
          [&](const Halfspace& h) -> double {
            const double ny = y.norm();
            if (ny == 0.0) return 0.0;
            const double na = h.normal.norm();
            const double ya = y.dot(h.normal);
            const double t = ya / h.normal.squaredNorm();
            const bool parallel = (y - t * h.normal).norm() <= kHalfspaceParallelTol * ny;
            const bool same_direction = ya >= -kHalfspaceParallelTol * ny * na;
            return parallel && same_direction ? h.offset * t : kInf;
          },
          [&](const Ball& b) -> double { return b.center.dot(y) + b.radius * y.norm(); },
          [&](const SecondOrderCone& k) -> double { return in_polar_cone(k, y) ? 0.0 : kInf; },
          [&](const TranslatedCone& tc) -> double {
            return in_polar_cone(tc.cone, y) ? tc.offset.dot(y) : kInf;
          },
          [&](const Cartesian& c) -> double {
            double sum = 0.0;
            Index offset = 0;
            for (const auto& part : c.parts) {
              const double s = support(part, y.segment(offset, part.dim()));
              if (s == kInf) return kInf;
              sum += s;
              offset += part.dim();
            }
            return sum;
          },
      },
      set.kind());
}

Vector project_recession(const ConvexSet& set, const Vector& d) {
  check_dim(set, d, "project_recession");
  return std::visit(
      Overloaded{
          [&](const Box& b) -> Vector {
            Vector out(d.size());
            for (Index i = 0; i < d.size(); ++i) {
              const bool lower_open = b.lower(i) == -kInf;
              const bool upper_open = b.upper(i) == kInf;
              if (lower_open && upper_open) {
                out(i) = d(i);
              } else if (upper_open) {
                out(i) = std::max(d(i), 0.0);
              } else if (lower_open) {
                out(i) = std::min(d(i), 0.0);
              } else {
                out(i) = 0.0;
              }
            }
            return out;
          },
          [&](const NonnegativeOrthant&) -> Vector { return d.cwiseMax(0.0); },
          [&](const ZeroCone&) -> Vector { return Vector::Zero(d.size()); },
          [&](const Singleton&) -> Vector { return Vector::Zero(d.size()); },
          [&](const Halfspace& h) -> Vector {
            const double ad = h.normal.dot(d);
            if (ad <= 0.0) return d;
            return d - (ad / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Ball&) -> Vector { return Vector::Zero(d.size()); },
          [&](const SecondOrderCone&) -> Vector { return project_soc(d); },
          [&](const TranslatedCone& tc) -> Vector { return project_cone(tc.cone, d); },
          [&](const Cartesian& c) -> Vector {
            return blockwise(c, d, [](const ConvexSet& p, const Vector& s) {
              return project_recession(p, s);
            });
          },
      },
      set.kind());
}

Vector project_polar_recession(const ConvexSet& set, const Vector& d) {
  return d - project_recession(set, d);
}

double distance_to_recession(const ConvexSet& set, const Vector& d) {
  return project_polar_recession(set, d).norm();
}

bool contains(const ConvexSet& set, const Vector& v, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("contains: tolerance must be >= 0");
  return inf_norm(v - project(set, v)) <= tol;
}

DenseMatrix projection_jacobian(const ConvexSet& set, const Vector& v) {
  check_dim(set, v, "projection_jacobian");
  const Index n = v.size();
  return std::visit(
      Overloaded{
          [&](const Box& b) -> DenseMatrix {
            Vector d = ((v.array() > b.lower.array()) && (v.array() < b.upper.array())).cast<double>();
            return d.asDiagonal();
          },
          [&](const NonnegativeOrthant& k) -> DenseMatrix { return cone_jacobian(k, v); },
          [&](const ZeroCone&) -> DenseMatrix { return DenseMatrix::Zero(n, n); },
          [&](const Singleton&) -> DenseMatrix { return DenseMatrix::Zero(n, n); },
          [&](const Halfspace& h) -> DenseMatrix {
            if (h.normal.dot(v) < h.offset) return DenseMatrix::Identity(n, n);
            return DenseMatrix::Identity(n, n) -
                   (h.normal * h.normal.transpose()) / h.normal.squaredNorm();
          },
          [&](const Ball& b) -> DenseMatrix {
            const Vector w = v - b.center;
            const double nw = w.norm();
            if (nw < b.radius) return DenseMatrix::Identity(n, n);
            if (nw == 0.0) return DenseMatrix::Zero(n, n);
            const Vector u = w / nw;
            return (b.radius / nw) * (DenseMatrix::Identity(n, n) - u * u.transpose());
          },
          [&](const SecondOrderCone&) -> DenseMatrix { return soc_jacobian(v); },
          [&](const TranslatedCone& tc) -> DenseMatrix { return cone_jacobian(tc.cone, v - tc.offset); },
          [&](const Cartesian& c) -> DenseMatrix {
            DenseMatrix j = DenseMatrix::Zero(n, n);
            Index offset = 0;
            for (const auto& part : c.parts) {
              const Index d = part.dim();
              j.block(offset, offset, d, d) = projection_jacobian(part, v.segment(offset, d));
              offset += d;
            }
            return j;
          },
      },
      set.kind());
}

}  // namespace certqp
