#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "transversal/certify.hpp"
#include "transversal/geom.hpp"

using namespace transversal;

namespace {

PointSet equilateral(double circumradius, double phase = 0.0) {
  PointSet out;
  for (int i = 0; i < 3; ++i) {
    const double a = phase + i * kTwoPi / 3.0;
    out.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
  }
  return out;
}

PointSet random_points(std::mt19937_64& rng, int count, double spread = 5.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  PointSet out;
  for (int i = 0; i < count; ++i) out.push_back({u(rng), u(rng)});
  return out;
}

}  // namespace

TEST(ConvexHull, SinglePoint) {
  const PointSet p{{0.0, 0.0}};
  EXPECT_EQ(convex_hull(p), p);
}

TEST(ConvexHull, SquareDropsInteriorPoint) {
  const PointSet p{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const PointSet h = convex_hull(p);
  ASSERT_EQ(h.size(), 4u);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_GT(orient(h[i], h[(i + 1) % 4], h[(i + 2) % 4]), 0.0);
  EXPECT_EQ(std::count(h.begin(), h.end(), Point2{0.5, 0.5}), 0);
}

TEST(ConvexHull, CollinearVerticesRemoved) {
  const PointSet p{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 2}};
  EXPECT_EQ(convex_hull(p).size(), 4u);
  const PointSet line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(convex_hull(line).size(), 2u);
}

TEST(ConvexHull, RandomDiskAgainstOrientationOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    PointSet p;
    for (int i = 0; i < 100; ++i) {
      const double r = std::sqrt(u(rng)), a = kTwoPi * u(rng);
      p.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const PointSet h = convex_hull(p);
    EXPECT_TRUE(oracle::hull_contains_all(h, p, 1e-12));
    for (std::size_t i = 0; i < h.size(); ++i) EXPECT_GT(orient(h[i], h[(i + 1) % h.size()], h[(i + 2) % h.size()]), 0.0);
  }
}

TEST(Width, EquilateralTriangleIsThreeHalvesRadius) {
  for (double r : {0.5, 1.0, 2.0}) EXPECT_NEAR(width(equilateral(r, 0.3)), 1.5 * r, 1e-12);
}

TEST(Width, UnitSquare) {
  const PointSet p{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_NEAR(width(p), 1.0, 1e-15);
}

TEST(Width, DegenerateSetsHaveZeroWidth) {
  EXPECT_EQ(width(PointSet{{1, 2}}), 0.0);
  EXPECT_EQ(width(PointSet{{1, 2}, {3, 4}}), 0.0);
  EXPECT_EQ(width(PointSet{{0, 0}, {1, 1}, {2, 2}}), 0.0);
  EXPECT_THROW(width(PointSet{}), InvalidArgument);
}

TEST(Width, RandomEightPointsMatchDirectionOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet p = random_points(rng, 8);
    EXPECT_NEAR(width(p), oracle::width_bruteforce(p), 1e-9);
  }
}

TEST(Width, NearlyCollinearLeadingVertices) {
  // Hull of a clipped quadtree cover; its first three vertices are almost
  // collinear, which once stalled the caliper at width 0.
  const PointSet hull{{-1.650000, -0.618594}, {-1.175097, -1.237500}, {-1.031250, -1.424965}, {-1.016836, -1.443750},
                      {-0.825000, -1.650000}, {0.825000, -1.650000},   {1.066913, -1.443750},  {1.302096, -1.237500},
                      {1.443750, -1.113272},  {1.606443, -0.825000},   {1.650000, -0.719844},  {1.650000, 0.825000},
                      {1.443750, 1.237500},   {1.237500, 1.443750},    {0.825000, 1.650000},   {-0.825000, 1.650000},
                      {-1.237500, 1.443750},  {-1.443750, 1.237500},   {-1.650000, 0.825000}};
  EXPECT_NEAR(convex_polygon_width(hull), oracle::width_bruteforce(hull), 1e-9);
  EXPECT_NEAR(width(hull), oracle::width_bruteforce(hull), 1e-9);
}

TEST(Width, NearDuplicateVerticesKeepTheHullConvex) {
  // Clipped cover of a pentagon region; the two vertices near (0.67, 1.30)
  // are one rounding step apart and used to form a reflex edge.
  const PointSet pts{{-1.7249390169953034, 0.55901699437494734},   {-1.0621322893124001, -1.4739186730283418},
                     {1.0062305898749053, -1.473918673028342},     {1.0621322893123999, -1.473918673028342},
                     {1.7249390169953025, 0.55901699437494734},    {1.6770509831248424, 0.59380968756439778},
                     {0.67082039324993692, 1.3014748413586763},    {0.6708203932499367, 1.3014748413586765},
                     {0.55901699437494756, 1.3827047654169033},    {0.22360679774997902, 1.6263945375915831},
                     {0.11180339887498944, 1.7076244616498097},    {0.076942093533287098, 1.7329526825623369},
                     {0.055901699437494706, 1.7482394236789229},   {5.1039052151313768e-09, 1.7888543819998315},
                     {-5.1039052116619448e-09, 1.7888543819998315}, {-1.6770509831248424, 0.59380968756439856}};
  const PointSet hull = convex_hull(pts);
  for (std::size_t i = 0; i < hull.size(); ++i)
    EXPECT_GT(orient(hull[i], hull[(i + 1) % hull.size()], hull[(i + 2) % hull.size()]), 0.0) << i;
  for (Point2 p : pts) EXPECT_TRUE(convex_polygon_contains(hull, p, 1e-9)) << p.x << ' ' << p.y;
  EXPECT_NEAR(width(pts), oracle::width_bruteforce(pts), 1e-9);
}

TEST(Width, RegularPolygonsWithSplitEdges) {
  // Extra points just off the middle of an edge, at every rotation of the
  // vertex order, so the caliper starts next to the near-collinear run.
  for (int sides = 3; sides <= 9; ++sides) {
    PointSet poly;
    for (int i = 0; i < sides; ++i) {
      const double a = kTwoPi * i / sides, b = kTwoPi * (i + 1) / sides;
      const Point2 u{std::cos(a), std::sin(a)}, v{std::cos(b), std::sin(b)};
      poly.push_back(u);
      const Point2 m = (u + v) * 0.5;
      poly.push_back(m * (1.0 + 1e-9));
    }
    const PointSet hull = convex_hull(poly);
    const double want = oracle::width_bruteforce(hull);
    for (std::size_t r = 0; r < hull.size(); ++r) {
      PointSet rot(hull.begin() + static_cast<std::ptrdiff_t>(r), hull.end());
      rot.insert(rot.end(), hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(r));
      EXPECT_NEAR(convex_polygon_width(rot), want, 1e-9) << sides << ' ' << r;
    }
  }
}

TEST(Width, EqualsWidthOfHull) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const PointSet p = random_points(rng, 3 + trial % 10);
    EXPECT_NEAR(width(p), width(convex_hull(p)), 1e-12);
  }
}

TEST(Width, OnePointLipschitz) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    PointSet p = random_points(rng, 3 + trial % 8);
    const double before = width(p);
    const double d = 0.1 * u(rng), a = kTwoPi * u(rng);
    p[trial % p.size()] = p[trial % p.size()] + Point2{d * std::cos(a), d * std::sin(a)};
    EXPECT_LE(std::abs(width(p) - before), d + 1e-12);
  }
}

TEST(MinAltitude, Examples) {
  EXPECT_NEAR(min_altitude({0, 0}, {4, 0}, {0, 3}), 2.4, 1e-15);
  const PointSet t = equilateral(1.0);
  EXPECT_NEAR(min_altitude(t[0], t[1], t[2]), 1.5, 1e-15);
  EXPECT_EQ(min_altitude({0, 0}, {1, 0}, {2, 0}), 0.0);
}

TEST(MinAltitude, EqualsTriangleWidthAndHeron) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const PointSet p = random_points(rng, 3);
    const double h = min_altitude(p[0], p[1], p[2]);
    EXPECT_NEAR(h, width(p), 1e-12);
    EXPECT_NEAR(h, oracle::triangle_min_altitude(p[0], p[1], p[2]), 1e-9);
  }
}

TEST(SatisfiesT, EquilateralTriangle) {
  const PointSet t = equilateral(1.0);
  EXPECT_TRUE(satisfies_T(t, 0.75));
  EXPECT_FALSE(satisfies_T(t, 0.74));
}

TEST(SatisfiesT, ExtremalPentagonFailsAsAWhole) {
  const PointSet p = regular_pentagon(extremal_pentagon_side());
  EXPECT_GT(oracle::width_bruteforce(p), 2.0);
  EXPECT_FALSE(satisfies_T(p, 1.0));
  EXPECT_TRUE(satisfies_T3(p, 1.0 + kFloatSlack));
}

TEST(SatisfiesT3, Examples) {
  EXPECT_FALSE(satisfies_T3(equilateral(1.4), 1.0));
  EXPECT_TRUE(satisfies_T3(PointSet{{0, 0}, {5, 7}}, 0.0));
}

TEST(SatisfiesT3, AgreesWithHeronBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ur(0.5, 3.0);
  int disagreements = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const PointSet p = random_points(rng, 3 + trial % 5, 2.0);
    const double r = ur(rng);
    // Skip sets whose decisive triple sits on the boundary.
    if (std::abs(max_triple_width(p) - 2.0 * r) < 1e-9) continue;
    disagreements += satisfies_T3(p, r) != oracle::t3_bruteforce(p, r);
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Contraction, DiagonalAndRotation) {
  EXPECT_TRUE(is_contraction({Mat2::identity(), {}}));
  EXPECT_TRUE(is_contraction({Mat2::diagonal(0.5, 0.9), {}}));
  EXPECT_FALSE(is_contraction({Mat2::diagonal(1.1, 0.5), {}}));
  EXPECT_TRUE(is_contraction({Mat2::rotation(kPi / 6.0) * Mat2::diagonal(1.0, 0.3), {3.0, -1.0}}));
}

TEST(Contraction, ContractionsPreserveT) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Mat2 m{u(rng), u(rng), u(rng), u(rng)};
    const double s = m.max_singular_value();
    if (s == 0.0) continue;
    const double scale = (0.5 + 0.5 * std::abs(u(rng))) / s;
    m = Mat2{m.a * scale, m.b * scale, m.c * scale, m.d * scale};
    const AffineMap f{m, {u(rng), u(rng)}};
    ASSERT_TRUE(is_contraction(f));
    const PointSet p = random_points(rng, 3 + trial % 6, 2.0);
    const double r = 0.5 * width(p) + 0.01;
    ASSERT_TRUE(satisfies_T(p, r));
    EXPECT_TRUE(satisfies_T(f.apply(p), r));
    ++checked;
  }
  EXPECT_GT(checked, 2000);
}

TEST(Perturbation, PointwiseEpsilonMoveKeepsTWithInflatedRadius) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const PointSet p = random_points(rng, 3 + trial % 7, 2.0);
    const double r = 0.5 * width(p);
    const double eps = 0.2 * u(rng);
    PointSet q = p;
    for (Point2& x : q) {
      const double d = eps * std::sqrt(u(rng)), a = kTwoPi * u(rng);
      x = x + Point2{d * std::cos(a), d * std::sin(a)};
    }
    EXPECT_TRUE(satisfies_T(q, r + eps + 1e-12));
  }
}

TEST(Ellipse, BoundaryPoints) {
  const Ellipse e = Ellipse::axis_aligned(2.0, 1.0);
  EXPECT_NEAR(ellipse_boundary_point(e, 0.0).x, 2.0, 1e-15);
  const Point2 top = ellipse_boundary_point(e, kPi / 2.0);
  EXPECT_NEAR(top.x, 0.0, 1e-15);
  EXPECT_NEAR(top.y, 1.0, 1e-15);
  const Point2 left = ellipse_boundary_point(Ellipse::axis_aligned(3.0, 1.62), kPi);
  EXPECT_NEAR(left.x, -3.0, 1e-15);
  EXPECT_NEAR(left.y, 0.0, 1e-15);
  EXPECT_THROW(Ellipse::axis_aligned(1.0, 2.0), InvalidArgument);
}

TEST(MinAreaEllipse, SquareAndTriangle) {
  const Ellipse sq = min_area_ellipse(PointSet{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  EXPECT_NEAR(sq.r1, std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(sq.r2, std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(norm(sq.center), 0.0, 1e-9);
  const Ellipse tri = min_area_ellipse(equilateral(1.0, 0.2));
  EXPECT_NEAR(tri.r1, 1.0, 1e-6);
  EXPECT_NEAR(tri.r2, 1.0, 1e-6);
  EXPECT_THROW(min_area_ellipse(PointSet{{0, 0}, {1, 1}, {2, 2}}), DegenerateInput);
}

TEST(MinAreaEllipse, RecoversAnAffineImageOfTheCircle) {
  // The regular pentagon's minimum ellipse is its circumcircle, so an affine
  // image must come back as the image ellipse.
  PointSet p;
  for (int i = 0; i < 5; ++i) p.push_back({3.0 * std::cos(i * kTwoPi / 5 + 0.1), 1.62 * std::sin(i * kTwoPi / 5 + 0.1)});
  const Ellipse e = min_area_ellipse(p);
  EXPECT_NEAR(e.r1, 3.0, 1e-6);
  EXPECT_NEAR(e.r2, 1.62, 1e-6);
  EXPECT_NEAR(e.area(), kPi * 3.0 * 1.62, 1e-5);
}
