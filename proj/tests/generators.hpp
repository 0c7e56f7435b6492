#pragma once

// Seeded random generators for property tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "larp/field.hpp"
#include "larp/geometry.hpp"

namespace larp::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec2 point_in(Rng& rng, double lo, double hi) { return {uniform(rng, lo, hi), uniform(rng, lo, hi)}; }

/// Random SPD matrix R·diag(l0, l1)·Rᵀ, symmetrized exactly.
inline RepulsionMatrix spd(Rng& rng, double lo = 0.25, double hi = 4.0) {
  const double l0 = uniform(rng, lo, hi), l1 = uniform(rng, lo, hi);
  const Mat2 r = Mat2::rotation(uniform(rng, 0.0, std::numbers::pi));
  Mat2 a = r * Mat2::diag(l0, l1) * r.transposed();
  a.a10 = a.a01;
  return RepulsionMatrix(a);
}

/// Primitive or collection unit with extents inside [-3, 3]². Ellipses are
/// circular (rotated, uniformly scaled) when `circular_ellipses` is set.
inline FieldUnit unit(Rng& rng, UnitKind kind, const RepulsionMatrix& a, bool circular_ellipses = true) {
  switch (kind) {
    case UnitKind::Point:
      return FieldUnit::point(point_in(rng, -2, 2), a);
    case UnitKind::Line: {
      const Vec2 p = point_in(rng, -2, 2);
      Vec2 q = point_in(rng, -2, 2);
      while (distance(p, q) < 0.5) q = point_in(rng, -2, 2);
      return FieldUnit::line(p, q, a);
    }
    case UnitKind::Rectangle: {
      const Vec2 p = point_in(rng, -2, 2);
      const double w = uniform(rng, 0.3, 2.5);
      const double h = uniform(rng, 0.3, 2.5);
      const double sx = rng() % 2 ? 1.0 : -1.0;
      const double sy = rng() % 2 ? 1.0 : -1.0;
      const Vec2 q = p + Vec2{sx * w, sy * h};
      return FieldUnit::rectangle(p, q, a);
    }
    case UnitKind::Ellipse: {
      const Mat2 rot = Mat2::rotation(uniform(rng, 0.0, std::numbers::pi));
      const double r0 = uniform(rng, 0.5, 1.8);
      const double r1 = circular_ellipses ? r0 : uniform(rng, 0.5, 1.8);
      return FieldUnit::ellipse(point_in(rng, -1.5, 1.5), rot * Mat2::diag(r0, r1), a);
    }
    case UnitKind::Collection: {
      std::vector<FieldUnit> subs;
      const int count = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < count; ++i) {
        const auto k = static_cast<UnitKind>(rng() % 4);
        subs.push_back(unit(rng, k, a, circular_ellipses));
      }
      return FieldUnit::collection(std::move(subs));
    }
  }
  return FieldUnit::point({}, a);
}

inline constexpr UnitKind kAllKinds[] = {UnitKind::Point, UnitKind::Line, UnitKind::Rectangle, UnitKind::Ellipse,
                                         UnitKind::Collection};

}  // namespace larp::gen
