#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "larp/quad_tree.hpp"

namespace larp {
namespace {

std::vector<int> zones_of(const Vec2& x, double n, const std::vector<FieldUnit>& units, const ZoneConfig& cfg) {
  std::vector<const FieldUnit*> ptrs;
  for (const FieldUnit& u : units) ptrs.push_back(&u);
  return approx_distance_zones(x, n, ptrs, cfg);
}

TEST(ZoneConfig, LowerEdgesAndPotentials) {
  const ZoneConfig cfg;
  EXPECT_EQ(cfg.farthest_zone(), 6);
  EXPECT_EQ(cfg.zone_count(), 7);
  EXPECT_EQ(cfg.lower_edge(0), 0.0);
  EXPECT_EQ(cfg.lower_edge(1), 0.0);
  EXPECT_EQ(cfg.lower_edge(2), 0.105);
  EXPECT_EQ(cfg.lower_edge(6), 2.996);
  EXPECT_EQ(cfg.upper_potential(0), 1.0);
  EXPECT_NEAR(cfg.upper_potential(6), 0.05, 1e-4);
}

TEST(ZoneConfig, BinMatchesLowerEdge) {
  // A scaled distance binned into zone z is never below that zone's lower edge.
  const ZoneConfig cfg;
  gen::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double d2 = gen::uniform(rng, 0.0, 4.0);
    const int z = cfg.bin(d2);
    EXPECT_GE(d2, cfg.lower_edge(z));
    if (z < cfg.farthest_zone()) {
      EXPECT_LT(d2, cfg.lower_edge(z + 1));
    }
  }
  for (double b : cfg.boundaries) EXPECT_EQ(cfg.lower_edge(cfg.bin(b)), b);
}

TEST(ZoneConfig, Validation) {
  EXPECT_THROW(ZoneConfig{{}}.validate(), ValidationError);
  EXPECT_THROW((ZoneConfig{{0.5, 0.5}}.validate()), ValidationError);
  EXPECT_THROW((ZoneConfig{{0.0, 1.0}}.validate()), ValidationError);
  EXPECT_THROW((ZoneConfig{{1.0, 0.5}}.validate()), ValidationError);
  EXPECT_NO_THROW((ZoneConfig{{0.69, 1.61, 2.99}}.validate()));
}

TEST(DecompositionParams, Validation) {
  EXPECT_THROW((DecompositionParams{0.0, 8, {32, 32}, 64, 32}.validate()), ValidationError);
  EXPECT_THROW((DecompositionParams{9, 8, {32, 32}, 64, 32}.validate()), ValidationError);
  EXPECT_THROW((DecompositionParams{1, 128, {32, 32}, 64, 32}.validate()), ValidationError);
  const auto p = DecompositionParams::for_field({0, 0}, 128);
  EXPECT_EQ(p.n_min, 2.0);
  EXPECT_EQ(p.n_max, 16.0);
}

TEST(ApproxDistanceZones, Examples) {
  EXPECT_EQ(zones_of({5, 5}, 4, {FieldUnit::point({5, 5})}, {}), std::vector<int>{0});

  const ZoneConfig cfg{{0.69, 1.61, 2.99}};
  // A wide matrix keeps d̃² small while d² stays outside the containment radius.
  const auto a = RepulsionMatrix::isotropic(50.0);  // d̃² = d²/50
  EXPECT_EQ(zones_of({0, 0}, 1, {FieldUnit::point({5, 0}, a)}, cfg), std::vector<int>{1});  // d̃² = 0.5
  EXPECT_EQ(zones_of({0, 0}, 1, {FieldUnit::point({5, 0})}, cfg), std::vector<int>{4});  // d̃² = 25
  EXPECT_EQ(zones_of({0, 0}, 1, {FieldUnit::point({std::sqrt(5.0), 0})}, cfg), std::vector<int>{4});
}

TEST(ApproxDistanceZones, ContainmentUsesCircumscribedRadius) {
  const ZoneConfig cfg;
  // Corner of a side-2 cell is √2 from its center.
  EXPECT_EQ(zones_of({0, 0}, 2, {FieldUnit::point({1, 1})}, cfg), std::vector<int>{0});
  EXPECT_NE(zones_of({0, 0}, 2, {FieldUnit::point({1, 1.01})}, cfg), std::vector<int>{0});
}

TEST(UniformityProbe, FarPointPasses) {
  const ZoneConfig cfg;
  const auto u = FieldUnit::point({0, 0});
  QuadNode q{{1.6, 0}, 0.05, 0, 0, {}};
  q.zone = zones_of(q.center, q.size, {u}, cfg)[0];  // d̃² = 2.56 → zone 5 (lower edge 1.386)
  ASSERT_EQ(q.zone, 5);
  const FieldUnit* ptr = &u;
  EXPECT_TRUE(uniformity_probe(q, std::span(&ptr, 1), cfg));
  const Vec2 probe = q.center - Vec2{q.size / std::sqrt(2.0), 0};
  EXPECT_GE(u.scaled_squared_distance(probe), cfg.lower_edge(q.zone));
}

TEST(UniformityProbe, UnitJustOutsideLowerEdgeFails) {
  const ZoneConfig cfg;
  const auto u = FieldUnit::point({0, 0});
  // d̃² at the center is 1.44 (zone 5, edge 1.386); the near extremity drops below.
  QuadNode q{{1.2, 0}, 1.0, 0, 0, {}};
  q.zone = zones_of(q.center, q.size, {u}, cfg)[0];
  ASSERT_EQ(q.zone, 5);
  const Vec2 probe = q.center - Vec2{q.size / std::sqrt(2.0), 0};
  ASSERT_LT(u.scaled_squared_distance(probe), cfg.lower_edge(q.zone));
  const FieldUnit* ptr = &u;
  EXPECT_FALSE(uniformity_probe(q, std::span(&ptr, 1), cfg));
}

TEST(UniformityProbe, SmallCellsAlwaysPass) {
  const ZoneConfig cfg;
  gen::Rng rng(4);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const FieldUnit u = gen::unit(rng, static_cast<UnitKind>(rng() % 5), gen::spd(rng));
    const Vec2 x = gen::point_in(rng, -6, 6);
    QuadNode q{x, 1e-9, 0, 0, {}};
    q.zone = zones_of(x, q.size, {u}, cfg)[0];
    if (q.zone == 0 || q.zone == cfg.farthest_zone()) continue;
    // Skip points sitting on a bin boundary, where any motion crosses it.
    if (u.scaled_squared_distance(x) - cfg.lower_edge(q.zone) < 1e-6) continue;
    const FieldUnit* ptr = &u;
    EXPECT_TRUE(uniformity_probe(q, std::span(&ptr, 1), cfg));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(UniformityProbe, ZeroRepulsionVectorFails) {
  const ZoneConfig cfg;
  const auto u = FieldUnit::rectangle({-1, -1}, {1, 1});
  QuadNode q{{0, 0}, 0.5, 1, 1, {}};
  const FieldUnit* ptr = &u;
  EXPECT_FALSE(uniformity_probe(q, std::span(&ptr, 1), cfg));
}

TEST(BuildQuadTree, EmptyFieldSubdividesToNMax) {
  const DecompositionParams p{1, 16, {32, 32}, 64, 32};
  const QuadNode root = build_quad_tree({}, p);
  const auto ls = leaves(root);
  ASSERT_EQ(ls.size(), 16u);
  for (const QuadNode* l : ls) {
    EXPECT_EQ(l->size, 16.0);
    EXPECT_EQ(l->zone, ZoneConfig{}.farthest_zone());
  }
}

TEST(BuildQuadTree, PointAtCenterRefinesToNMin) {
  const std::vector<FieldUnit> units{FieldUnit::point({32, 32})};
  const DecompositionParams p{1, 8, {32, 32}, 64, 32};
  const QuadNode root = build_quad_tree(units, p);
  int touching = 0;
  for (const QuadNode* l : leaves(root)) {
    if (l->contains({32, 32})) {
      ++touching;
      EXPECT_EQ(l->size, 1.0);
      EXPECT_EQ(l->zone, 0);
    }
  }
  EXPECT_EQ(touching, 4);
}

TEST(BuildQuadTree, FarUnitsGiveSingleLeaf) {
  const std::vector<FieldUnit> units{FieldUnit::point({100, 100})};
  const DecompositionParams p{1, 64, {32, 32}, 64, 32};
  const QuadNode root = build_quad_tree(units, p);
  EXPECT_TRUE(root.is_leaf());
  EXPECT_EQ(leaves(root).size(), 1u);
  EXPECT_EQ(leaves(root)[0], &root);
}

TEST(BuildQuadTree, ChildOrderAndGeometry) {
  const QuadNode root = build_quad_tree({}, {1, 32, {0, 0}, 64, 32});
  ASSERT_EQ(root.children.size(), 4u);
  EXPECT_EQ(root.children[0].center, (Vec2{-16, 16}));
  EXPECT_EQ(root.children[1].center, (Vec2{16, 16}));
  EXPECT_EQ(root.children[2].center, (Vec2{-16, -16}));
  EXPECT_EQ(root.children[3].center, (Vec2{16, -16}));
  for (const QuadNode& c : root.children) EXPECT_EQ(c.size, 32.0);
}

TEST(BuildQuadTree, DepthCapSignalsInconsistentNMin) {
  const std::vector<FieldUnit> units{FieldUnit::point({32, 32})};
  DecompositionParams p{1e-12, 8, {32, 32}, 64, 32};
  EXPECT_THROW(build_quad_tree(units, p), ValidationError);
  p.max_depth = 64;
  EXPECT_NO_THROW(build_quad_tree(units, p));
}

TEST(BuildQuadTree, ZoneUpperPotentialMatchesZone) {
  const std::vector<FieldUnit> units{FieldUnit::rectangle({10, 10}, {20, 14}), FieldUnit::point({40, 50})};
  const ZoneConfig cfg;
  const QuadNode root = build_quad_tree(units, DecompositionParams::for_field({32, 32}, 64), cfg);
  for (const QuadNode* l : leaves(root)) EXPECT_EQ(l->zone_upper_potential, std::exp(-cfg.lower_edge(l->zone)));
}

TEST(Leaves, OneSubdivisionGivesFour) {
  const QuadNode root = build_quad_tree({}, {1, 32, {0, 0}, 64, 32});
  const auto ls = leaves(root);
  ASSERT_EQ(ls.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(ls[i], &root.children[i]);
}

TEST(LocateLeaf, FindsContainingCell) {
  const std::vector<FieldUnit> units{FieldUnit::point({20, 20})};
  const QuadNode root = build_quad_tree(units, DecompositionParams::for_field({32, 32}, 64));
  gen::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const Vec2 p = gen::point_in(rng, 0, 64);
    const QuadNode* leaf = locate_leaf(root, p);
    ASSERT_NE(leaf, nullptr);
    EXPECT_TRUE(leaf->is_leaf());
    EXPECT_TRUE(leaf->contains(p));
  }
  EXPECT_EQ(locate_leaf(root, {-1, 5}), nullptr);
}

// Property sweep over random fields.

struct RandomField {
  std::vector<FieldUnit> units;
  DecompositionParams params;
};

RandomField random_field(gen::Rng& rng) {
  RandomField f;
  f.params = DecompositionParams::for_field({16, 16}, 32);
  const int count = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < count; ++i) {
    const FieldUnit local = gen::unit(rng, static_cast<UnitKind>(rng() % 4), gen::spd(rng));
    // Re-center the generated unit inside the field.
    const Vec2 shift = gen::point_in(rng, 4, 28);
    switch (local.kind()) {
      case UnitKind::Point: f.units.push_back(FieldUnit::point(local.as_point().location + shift, local.repulsion_matrix())); break;
      case UnitKind::Line:
        f.units.push_back(FieldUnit::line(local.as_line().start + shift, local.as_line().end + shift, local.repulsion_matrix()));
        break;
      case UnitKind::Rectangle:
        f.units.push_back(FieldUnit::rectangle(local.as_rectangle().corner1 + shift, local.as_rectangle().corner2 + shift,
                                               local.repulsion_matrix()));
        break;
      default:
        f.units.push_back(FieldUnit::ellipse(local.as_ellipse().location + shift, local.as_ellipse().shape, local.repulsion_matrix()));
    }
  }
  return f;
}

TEST(QuadTreeProperties, TilingSizingZonesAndDeterminism) {
  gen::Rng rng(77);
  const ZoneConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    const RandomField f = random_field(rng);
    const QuadNode root = build_quad_tree(f.units, f.params, cfg);
    const auto ls = leaves(root);

    double area = 0.0;
    for (const QuadNode* l : ls) area += l->size * l->size;
    EXPECT_NEAR(area / (32.0 * 32.0), 1.0, 1e-9);

    for (std::size_t i = 0; i < ls.size(); ++i) {
      EXPECT_LE(ls[i]->size, f.params.n_max);
      if (ls[i]->zone == 0) {
        EXPECT_LE(ls[i]->size, 2 * f.params.n_min);
      }
      for (std::size_t j = i + 1; j < ls.size(); ++j) {
        const double ox = std::min(ls[i]->max_corner().x, ls[j]->max_corner().x) -
                          std::max(ls[i]->min_corner().x, ls[j]->min_corner().x);
        const double oy = std::min(ls[i]->max_corner().y, ls[j]->max_corner().y) -
                          std::max(ls[i]->min_corner().y, ls[j]->min_corner().y);
        EXPECT_FALSE(ox > 1e-12 && oy > 1e-12);
      }
    }

    // Zone at every node recomputed from raw field evaluations, replaying the
    // farthest-zone drop along the ancestor chain.
    const std::function<void(const QuadNode&, std::vector<const FieldUnit*>)> check =
        [&](const QuadNode& q, std::vector<const FieldUnit*> candidates) {
          int expected = cfg.farthest_zone();
          std::vector<const FieldUnit*> kept;
          for (const FieldUnit* u : candidates) {
            int z;
            if (u->squared_distance(q.center) <= q.size * q.size / 2) {
              z = 0;
            } else {
              z = 1;
              for (double b : cfg.boundaries) z += b <= u->scaled_squared_distance(q.center) ? 1 : 0;
            }
            expected = std::min(expected, z);
            if (z < cfg.farthest_zone()) kept.push_back(u);
          }
          EXPECT_EQ(q.zone, expected) << q.center << " size " << q.size;
          for (const QuadNode& c : q.children) check(c, kept);
        };
    std::vector<const FieldUnit*> all;
    for (const FieldUnit& u : f.units) all.push_back(&u);
    check(root, all);

    // Cells holding an on-unit point are zone 0.
    for (int gy = 0; gy < 64; ++gy) {
      for (int gx = 0; gx < 64; ++gx) {
        const Vec2 p{(gx + 0.5) * 0.5, (gy + 0.5) * 0.5};
        bool on_unit = false;
        for (const FieldUnit& u : f.units) on_unit = on_unit || u.potential(p) == 1.0;
        if (!on_unit) continue;
        for (const QuadNode* l : ls) {
          if (l->contains(p)) {
            EXPECT_EQ(l->zone, 0) << p;
          }
        }
      }
    }

    EXPECT_EQ(build_quad_tree(f.units, f.params, cfg), root);
  }
}

}  // namespace
}  // namespace larp
