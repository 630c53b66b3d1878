#pragma once

// Closed convex sets with exact projection, support function, and recession
// cone calculus.
//
// Every set here is nonempty, closed and convex. The family is compositional:
// boxes (with infinite bounds), cones, singletons, halfspaces, balls,
// translated cones and Cartesian products of any of these.

#include "certqp/linalg.hpp"

#include <limits>
#include <string_view>
#include <variant>
#include <vector>

namespace certqp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// {x : lower <= x <= upper}; bounds may be -inf / +inf.
struct Box {
  Vector lower;
  Vector upper;
};

struct NonnegativeOrthant {
  Index dim;
};

/// The origin {0} of the given dimension.
struct ZeroCone {
  Index dim;
};

struct Singleton {
  Vector point;
};

/// {x : <normal, x> <= offset}.
struct Halfspace {
  Vector normal;
  double offset;
};

struct Ball {
  Vector center;
  double radius;
};

/// {(t, x) : ||x|| <= t}; the first coordinate is the scalar part t.
struct SecondOrderCone {
  Index dim;
};

using Cone = std::variant<NonnegativeOrthant, ZeroCone, SecondOrderCone>;

/// offset + cone.
struct TranslatedCone {
  Vector offset;
  Cone cone;
};

class ConvexSet;

struct Cartesian {
  std::vector<ConvexSet> parts;
};

/// Immutable descriptor of a nonempty closed convex set.
///
/// Construct through the named factories, which enforce the invariants
/// (nonempty box, nonzero halfspace normal, nonnegative radius, ...) and throw
/// std::invalid_argument otherwise.
class ConvexSet {
 public:
  using Kind = std::variant<Box, NonnegativeOrthant, ZeroCone, Singleton, Halfspace, Ball,
                            SecondOrderCone, TranslatedCone, Cartesian>;

  static ConvexSet box(Vector lower, Vector upper);
  /// R^n, written as a box with all bounds infinite.
  static ConvexSet whole_space(Index dim);
  static ConvexSet nonnegative_orthant(Index dim);
  static ConvexSet zero(Index dim);
  static ConvexSet singleton(Vector point);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet second_order_cone(Index dim);
  static ConvexSet translated_cone(Vector offset, Cone cone);
  static ConvexSet cartesian(std::vector<ConvexSet> parts);

  const Kind& kind() const { return kind_; }
  Index dim() const { return dim_; }

 private:
  ConvexSet(Kind kind, Index dim) : kind_(std::move(kind)), dim_(dim) {}

  Kind kind_;
  Index dim_;
};

Index cone_dim(const Cone& cone);

/// Short lowercase label of the outermost descriptor ("box", "soc", ...).
std::string_view kind_name(const ConvexSet& set);

inline Index dim(const ConvexSet& set) { return set.dim(); }

/// Euclidean projection onto the set.
Vector project(const ConvexSet& set, const Vector& v);

/// sup over the set of <x, y>; returns +inf when unbounded.
double support(const ConvexSet& set, const Vector& y);

/// Projection onto the recession cone of the set.
Vector project_recession(const ConvexSet& set, const Vector& d);

/// Projection onto the polar of the recession cone, d - project_recession(d).
Vector project_polar_recession(const ConvexSet& set, const Vector& d);

double distance_to_recession(const ConvexSet& set, const Vector& d);

/// True iff ||v - project(v)||_inf <= tol.
bool contains(const ConvexSet& set, const Vector& v, double tol);

/// One element of the generalized (Clarke) Jacobian of the projection at v.
///
/// At kinks the clamped branch is chosen: a box coordinate sitting exactly on
/// a bound gets derivative 0, a point on the boundary of a ball or cone gets
/// the boundary-branch formula.
DenseMatrix projection_jacobian(const ConvexSet& set, const Vector& v);

}  // namespace certqp
