#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace larp {

/// Point or displacement in the plane, in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << '(' << v.x << ", " << v.y << ')';
  }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double squared_norm(const Vec2& v) { return v.x * v.x + v.y * v.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a00 = 1.0, a01 = 0.0;
  double a10 = 0.0, a11 = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diag(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }
  static Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
  }

  constexpr double determinant() const { return a00 * a11 - a01 * a10; }
  constexpr double trace() const { return a00 + a11; }
  constexpr Mat2 transposed() const { return {a00, a10, a01, a11}; }

  /// Caller guarantees a non-zero determinant.
  constexpr Mat2 inverse() const {
    const double det = determinant();
    return {a11 / det, -a01 / det, -a10 / det, a00 / det};
  }

  /// Eigenvalues of a symmetric matrix, ascending.
  std::array<double, 2> symmetric_eigenvalues() const {
    const double mean = 0.5 * (a00 + a11);
    const double r = std::hypot(0.5 * (a00 - a11), a01);
    return {mean - r, mean + r};
  }

  friend constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a00 * v.x + m.a01 * v.y, m.a10 * v.x + m.a11 * v.y};
  }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a00 * n.a00 + m.a01 * n.a10, m.a00 * n.a01 + m.a01 * n.a11,
            m.a10 * n.a00 + m.a11 * n.a10, m.a10 * n.a01 + m.a11 * n.a11};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// vᵀ M v. For M == identity this reproduces squared_norm(v) bit for bit.
constexpr double quadratic_form(const Mat2& m, const Vec2& v) {
  return m.a00 * v.x * v.x + (m.a01 + m.a10) * v.x * v.y + m.a11 * v.y * v.y;
}

}  // namespace larp
