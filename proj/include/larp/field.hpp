#pragma once

// Standardized restrictive-routing potential field units.
//
// Every unit maps a query point x to a repulsion vector x̄(x), the displacement
// from the unit's nearest point to x. Distances and the potential derive from it:
//
//   d²(x)  = x̄ᵀ x̄
//   d̃²(x)  = x̄ᵀ A⁻¹ x̄
//   σ(x)   = exp(-d̃²(x))
//
// σ is 1 on the restriction and decays towards 0 with the scaled distance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "larp/errors.hpp"
#include "larp/geometry.hpp"

namespace larp {

/// Symmetric positive-definite matrix shaping a unit's decay.
class RepulsionMatrix {
 public:
  RepulsionMatrix() = default;

  explicit RepulsionMatrix(const Mat2& a) : a_(a) {
    if (!std::isfinite(a.a00) || !std::isfinite(a.a01) || !std::isfinite(a.a10) ||
        !std::isfinite(a.a11)) {
      throw ValidationError("repulsion matrix has non-finite entries");
    }
    if (a.a01 != a.a10) throw ValidationError("repulsion matrix not symmetric");
    if (!(a.determinant() > 0.0 && a.trace() > 0.0)) {
      throw ValidationError("repulsion matrix not positive definite");
    }
    inverse_ = a.inverse();
  }

  static RepulsionMatrix isotropic(double scale) { return RepulsionMatrix(Mat2::diag(scale, scale)); }

  const Mat2& matrix() const { return a_; }
  const Mat2& inverse() const { return inverse_; }

  friend bool operator==(const RepulsionMatrix& l, const RepulsionMatrix& r) { return l.a_ == r.a_; }

 private:
  Mat2 a_ = Mat2::identity();
  Mat2 inverse_ = Mat2::identity();
};

struct PointShape {
  Vec2 location;
  friend bool operator==(const PointShape&, const PointShape&) = default;
};

struct LineShape {
  Vec2 start;
  Vec2 end;
  friend bool operator==(const LineShape&, const LineShape&) = default;
};

struct RectangleShape {
  Vec2 corner1;
  Vec2 corner2;
  Vec2 center() const { return (corner1 + corner2) * 0.5; }
  Vec2 min_corner() const { return {std::min(corner1.x, corner2.x), std::min(corner1.y, corner2.y)}; }
  Vec2 max_corner() const { return {std::max(corner1.x, corner2.x), std::max(corner1.y, corner2.y)}; }
  friend bool operator==(const RectangleShape&, const RectangleShape&) = default;
};

/// Image of the unit circle under `shape`, centered at `location`.
struct EllipseShape {
  Vec2 location;
  Mat2 shape;
  Mat2 shape_inverse;
  friend bool operator==(const EllipseShape& l, const EllipseShape& r) {
    return l.location == r.location && l.shape == r.shape;
  }
};

enum class UnitKind { Point, Line, Rectangle, Ellipse, Collection };

inline const char* to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::Point: return "point";
    case UnitKind::Line: return "line";
    case UnitKind::Rectangle: return "rectangle";
    case UnitKind::Ellipse: return "ellipse";
    case UnitKind::Collection: return "collection";
  }
  return "unknown";
}

/// Which distance selects the "nearest" unit among several.
enum class DistanceMetric { Plain, Scaled };

class FieldUnit;

/// A primitive unit chosen by a nearest-unit query, with its evaluation at x.
struct NearestUnit {
  const FieldUnit* unit = nullptr;
  Vec2 repulsion;
  double squared_distance = std::numeric_limits<double>::infinity();
  double scaled_squared_distance = std::numeric_limits<double>::infinity();

  double metric(DistanceMetric m) const {
    return m == DistanceMetric::Plain ? squared_distance : scaled_squared_distance;
  }
};

struct FieldEvaluation {
  Vec2 repulsion_vector;
  double squared_distance = 0.0;
  double scaled_squared_distance = 0.0;
  double potential = 1.0;
};

class FieldUnit {
 public:
  struct Collection {
    std::vector<FieldUnit> units;
    friend bool operator==(const Collection&, const Collection&) = default;
  };

  static FieldUnit point(Vec2 location, RepulsionMatrix a = {}) {
    return FieldUnit(PointShape{location}, a);
  }

  static FieldUnit line(Vec2 start, Vec2 end, RepulsionMatrix a = {}) {
    check_finite(start);
    check_finite(end);
    if (start == end) throw ValidationError("zero-length line");
    return FieldUnit(LineShape{start, end}, a);
  }

  /// Corners may be given in any order. A rectangle flat in one coordinate is
  /// accepted only with `allow_degenerate`; coincident corners are always rejected.
  static FieldUnit rectangle(Vec2 corner1, Vec2 corner2, RepulsionMatrix a = {},
                             bool allow_degenerate = false) {
    check_finite(corner1);
    check_finite(corner2);
    const bool flat_x = corner1.x == corner2.x;
    const bool flat_y = corner1.y == corner2.y;
    if ((flat_x && flat_y) || ((flat_x || flat_y) && !allow_degenerate)) {
      throw ValidationError("degenerate rectangle");
    }
    return FieldUnit(RectangleShape{corner1, corner2}, a);
  }

  static FieldUnit ellipse(Vec2 location, const Mat2& shape, RepulsionMatrix a = {}) {
    check_finite(location);
    if (!(std::abs(shape.determinant()) > 1e-12)) {
      throw ValidationError("ellipse shape matrix not invertible");
    }
    return FieldUnit(EllipseShape{location, shape, shape.inverse()}, a);
  }

  static FieldUnit collection(std::vector<FieldUnit> units) {
    if (units.empty()) throw ValidationError("empty collection");
    return FieldUnit(Collection{std::move(units)}, {});
  }

  UnitKind kind() const { return static_cast<UnitKind>(shape_.index()); }
  bool is_collection() const { return kind() == UnitKind::Collection; }

  /// Meaningless for collections, whose sub-units carry their own matrices.
  const RepulsionMatrix& repulsion_matrix() const { return a_; }

  const PointShape& as_point() const { return std::get<PointShape>(shape_); }
  const LineShape& as_line() const { return std::get<LineShape>(shape_); }
  const RectangleShape& as_rectangle() const { return std::get<RectangleShape>(shape_); }
  const EllipseShape& as_ellipse() const { return std::get<EllipseShape>(shape_); }
  const std::vector<FieldUnit>& sub_units() const { return std::get<Collection>(shape_).units; }

  Vec2 repulsion_vector(const Vec2& x) const {
    if (is_collection()) return nearest(x, DistanceMetric::Scaled).repulsion;
    return primitive_repulsion(x);
  }

  double squared_distance(const Vec2& x) const {
    if (is_collection()) return nearest(x, DistanceMetric::Plain).squared_distance;
    return squared_norm(primitive_repulsion(x));
  }

  double scaled_squared_distance(const Vec2& x) const {
    if (is_collection()) return nearest(x, DistanceMetric::Scaled).scaled_squared_distance;
    return quadratic_form(a_.inverse(), primitive_repulsion(x));
  }

  double potential(const Vec2& x) const { return std::exp(-scaled_squared_distance(x)); }

  /// Central finite differences of the potential.
  Vec2 potential_gradient(const Vec2& x, double h = 1e-4) const {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    return {(potential(x + ex) - potential(x - ex)) / (2.0 * h),
            (potential(x + ey) - potential(x - ey)) / (2.0 * h)};
  }

  FieldEvaluation evaluate(const Vec2& x) const {
    FieldEvaluation e;
    if (is_collection()) {
      const NearestUnit n = nearest(x, DistanceMetric::Scaled);
      e.repulsion_vector = n.repulsion;
      e.squared_distance = squared_distance(x);
      e.scaled_squared_distance = n.scaled_squared_distance;
    } else {
      e.repulsion_vector = primitive_repulsion(x);
      e.squared_distance = squared_norm(e.repulsion_vector);
      e.scaled_squared_distance = quadratic_form(a_.inverse(), e.repulsion_vector);
    }
    e.potential = std::exp(-e.scaled_squared_distance);
    return e;
  }

  /// The primitive (non-collection) unit minimizing `metric` at x.
  /// Ties go to the lowest sub-unit index.
  NearestUnit nearest(const Vec2& x, DistanceMetric metric) const {
    if (!is_collection()) {
      NearestUnit n;
      n.unit = this;
      n.repulsion = primitive_repulsion(x);
      n.squared_distance = squared_norm(n.repulsion);
      n.scaled_squared_distance = quadratic_form(a_.inverse(), n.repulsion);
      return n;
    }
    NearestUnit best;
    for (const FieldUnit& u : sub_units()) {
      NearestUnit n = u.nearest(x, metric);
      if (best.unit == nullptr || n.metric(metric) < best.metric(metric)) best = n;
    }
    return best;
  }

  friend bool operator==(const FieldUnit& l, const FieldUnit& r) {
    return l.shape_ == r.shape_ && (l.is_collection() || l.a_ == r.a_);
  }

 private:
  using Shape = std::variant<PointShape, LineShape, RectangleShape, EllipseShape, Collection>;

  FieldUnit(Shape shape, RepulsionMatrix a) : shape_(std::move(shape)), a_(a) {}

  static void check_finite(const Vec2& v) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw ValidationError("non-finite coordinate");
  }

  Vec2 primitive_repulsion(const Vec2& x) const {
    switch (kind()) {
      case UnitKind::Point:
        return x - as_point().location;
      case UnitKind::Line: {
        const LineShape& l = as_line();
        const Vec2 dir = l.end - l.start;
        const double rho = dot(dir, x - l.start) / squared_norm(dir);
        return x - (l.start + std::clamp(rho, 0.0, 1.0) * dir);
      }
      case UnitKind::Rectangle: {
        const RectangleShape& r = as_rectangle();
        const Vec2 c = r.center();
        auto axis = [](double v, double lo, double hi, double mid) {
          const double g = 0.5 * (std::abs(v - lo) + std::abs(v - hi) - std::abs(lo - hi));
          return v - mid >= 0.0 ? g : -g;
        };
        return {axis(x.x, r.corner1.x, r.corner2.x, c.x), axis(x.y, r.corner1.y, r.corner2.y, c.y)};
      }
      case UnitKind::Ellipse: {
        const EllipseShape& e = as_ellipse();
        const Vec2 offset = x - e.location;
        const double radial = norm(e.shape_inverse * offset);
        if (radial == 0.0) return {};
        return std::max(1.0 - 1.0 / radial, 0.0) * offset;
      }
      case UnitKind::Collection:
        break;
    }
    return {};
  }

  Shape shape_;
  RepulsionMatrix a_;
};

/// All restrictions of a scene. Behaves like a collection whose sub-units are
/// the field's units, except that it may be empty: an empty field has σ ≡ 0 and
/// infinite distances everywhere.
class Field {
 public:
  Field() = default;
  explicit Field(std::vector<FieldUnit> units) : units_(std::move(units)) {}

  std::span<const FieldUnit> units() const { return units_; }
  bool empty() const { return units_.empty(); }

  std::optional<NearestUnit> nearest(const Vec2& x, DistanceMetric metric) const {
    std::optional<NearestUnit> best;
    for (const FieldUnit& u : units_) {
      NearestUnit n = u.nearest(x, metric);
      if (!best || n.metric(metric) < best->metric(metric)) best = n;
    }
    return best;
  }

  double squared_distance(const Vec2& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const FieldUnit& u : units_) best = std::min(best, u.squared_distance(x));
    return best;
  }

  double scaled_squared_distance(const Vec2& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const FieldUnit& u : units_) best = std::min(best, u.scaled_squared_distance(x));
    return best;
  }

  double potential(const Vec2& x) const {
    return units_.empty() ? 0.0 : std::exp(-scaled_squared_distance(x));
  }

  Vec2 potential_gradient(const Vec2& x, double h = 1e-4) const {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    return {(potential(x + ex) - potential(x - ex)) / (2.0 * h),
            (potential(x + ey) - potential(x - ey)) / (2.0 * h)};
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<FieldUnit> units_;
};

}  // namespace larp
