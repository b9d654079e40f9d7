#pragma once

// Planar primitives: hulls, widths, line-transversal predicates for
// translates of a disk, affine contractions and ellipses.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "transversal/error.hpp"

namespace transversal {

/// Conservative margin added on top of every analytic margin in certified
/// comparisons. It absorbs rounding only; no interval arithmetic is done.
inline constexpr double kFloatSlack = 1e-9;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGoldenRatio = std::numbers::phi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

using PointSet = std::vector<Point2>;

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Twice the signed area of (a, b, c); positive for a counterclockwise turn.
constexpr double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

namespace detail {

/// Andrew's monotone chain over points already sorted by (x, y) without
/// duplicates.
inline PointSet monotone_chain(std::span<const Point2> pts) {
  if (pts.size() <= 2) return PointSet(pts.begin(), pts.end());
  PointSet hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {pts.front(), pts.back()};
  return hull;
}

}  // namespace detail

/// Counterclockwise hull with collinear vertices dropped. Degenerate inputs
/// give a single point or the two endpoints of a segment.
inline PointSet convex_hull(std::span<const Point2> ps) {
  PointSet pts(ps.begin(), ps.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  PointSet hull = detail::monotone_chain(pts);
  if (hull.size() < 4) return hull;
  // Rounding can leave near-duplicate vertices whose tiny edge is slightly
  // reflex, which breaks calipers and containment. Dropping vertices within a
  // relative 1e-12 of their neighbours' chord moves the hull by that much.
  double scale = 0.0;
  for (Point2 p : hull) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-12 * (1.0 + scale);
  for (bool changed = true; changed && hull.size() > 3;) {
    changed = false;
    for (std::size_t i = 0; i < hull.size() && hull.size() > 3; ++i) {
      const std::size_t n = hull.size();
      const Point2 a = hull[(i + n - 1) % n], b = hull[i], c = hull[(i + 1) % n];
      const double len = norm(c - a);
      if (len == 0.0 || orient(a, b, c) <= tol * len) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  return hull;
}

/// Width of a convex polygon given counterclockwise without repeated or
/// collinear vertices (rotating calipers over edge/antipodal-vertex pairs).
inline double convex_polygon_width(std::span<const Point2> hull) {
  const std::size_t n = hull.size();
  if (n < 3) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  // Start from the true antipode of the first edge. Starting next to it can
  // stall on a run of nearly collinear vertices and report a tiny width.
  std::size_t j = 0;
  {
    const Point2 e = hull[1] - hull[0];
    for (std::size_t k = 1; k < n; ++k)
      if (cross(e, hull[k] - hull[0]) > cross(e, hull[j] - hull[0])) j = k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = hull[i];
    const Point2 e = hull[(i + 1) % n] - a;
    // Ties advance no further, so the smaller antipodal index wins. The
    // backward climb only matters if rounding bent an edge direction back.
    while (cross(e, hull[(j + 1) % n] - a) > cross(e, hull[j] - a)) j = (j + 1) % n;
    while (cross(e, hull[(j + n - 1) % n] - a) > cross(e, hull[j] - a)) j = (j + n - 1) % n;
    best = std::min(best, cross(e, hull[j] - a) / norm(e));
  }
  return best;
}

/// Point-in-convex-polygon (counterclockwise hull), boundary included.
inline bool convex_polygon_contains(std::span<const Point2> hull, Point2 p, double tol = 0.0) {
  const std::size_t n = hull.size();
  if (n == 0) return false;
  if (n == 1) return distance(hull[0], p) <= tol;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = hull[i], b = hull[(i + 1) % n];
    if (orient(a, b, p) < -tol * distance(a, b)) return false;
  }
  return true;
}

/// Minimum over directions of the extent of the projection of ps.
inline double width(std::span<const Point2> ps) {
  if (ps.empty()) throw InvalidArgument("width of an empty point set");
  const PointSet hull = convex_hull(ps);
  return convex_polygon_width(hull);
}

/// Smallest altitude of triangle abc, i.e. its width. Zero when collinear.
inline double min_altitude(Point2 a, Point2 b, Point2 c) {
  const double longest2 = std::max({dot(b - a, b - a), dot(c - b, c - b), dot(a - c, a - c)});
  if (longest2 == 0.0) return 0.0;
  return std::abs(orient(a, b, c)) / std::sqrt(longest2);
}

/// Property T(rB): the disks of radius r about ps have a common line transversal.
inline bool satisfies_T(std::span<const Point2> ps, double r) {
  if (ps.size() < 3) return true;
  return width(ps) <= 2.0 * r;
}

/// Property T(rB, 3): every three points of ps satisfy T(rB).
inline bool satisfies_T3(std::span<const Point2> ps, double r) {
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (min_altitude(ps[i], ps[j], ps[k]) > 2.0 * r) return false;
  return true;
}

/// Largest width among all triples of ps; T(rB, 3) holds iff this is <= 2r.
inline double max_triple_width(std::span<const Point2> ps) {
  double worst = 0.0;
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) worst = std::max(worst, min_altitude(ps[i], ps[j], ps[k]));
  return worst;
}

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diagonal(double sx, double sy) { return {sx, 0.0, 0.0, sy}; }
  static Mat2 rotation(double theta) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    return {cs, -sn, sn, cs};
  }

  constexpr double determinant() const { return a * d - b * c; }
  constexpr Point2 operator*(Point2 p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  /// Largest singular value, from the closed form for 2x2 matrices.
  double max_singular_value() const {
    const double frob = a * a + b * b + c * c + d * d;
    const double det = determinant();
    const double disc = std::max(0.0, frob * frob - 4.0 * det * det);
    return std::sqrt(0.5 * (frob + std::sqrt(disc)));
  }
};

struct AffineMap {
  Mat2 linear;
  Point2 offset;

  constexpr Point2 operator()(Point2 p) const { return linear * p + offset; }

  PointSet apply(std::span<const Point2> ps) const {
    PointSet out;
    out.reserve(ps.size());
    for (Point2 p : ps) out.push_back((*this)(p));
    return out;
  }

  bool non_degenerate() const { return linear.determinant() != 0.0; }
};

/// ||Mx - My|| <= ||x - y|| for all x, y, up to the float slack.
inline bool is_contraction(const AffineMap& m, double slack = kFloatSlack) {
  return m.linear.max_singular_value() <= 1.0 + slack;
}

/// Elliptical disk with semi-axes r1 >= r2 > 0; `rotation` turns the r1 axis
/// counterclockwise from the x axis.
struct Ellipse {
  Point2 center;
  double r1 = 1.0;
  double r2 = 1.0;
  double rotation = 0.0;

  static Ellipse axis_aligned(double r1, double r2) {
    Ellipse e{{0.0, 0.0}, r1, r2, 0.0};
    if (!e.valid()) throw InvalidArgument("ellipse needs r1 >= r2 > 0");
    return e;
  }

  bool valid() const { return std::isfinite(r1) && std::isfinite(r2) && r2 > 0.0 && r1 >= r2; }
  bool is_axis_aligned_at_origin() const { return rotation == 0.0 && center == Point2{}; }
  double area() const { return kPi * r1 * r2; }

  /// (x/r1)^2 + (y/r2)^2 in the ellipse frame; <= 1 inside.
  double level(Point2 p) const {
    const Point2 local = Mat2::rotation(-rotation) * (p - center);
    return (local.x / r1) * (local.x / r1) + (local.y / r2) * (local.y / r2);
  }
};

inline Point2 ellipse_boundary_point(const Ellipse& e, double alpha) {
  const Point2 local{e.r1 * std::cos(alpha), e.r2 * std::sin(alpha)};
  if (e.rotation == 0.0) return e.center + local;
  return e.center + Mat2::rotation(e.rotation) * local;
}

inline PointSet ellipse_boundary_points(const Ellipse& e, std::span<const double> alphas) {
  PointSet out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(ellipse_boundary_point(e, a));
  return out;
}

struct MinAreaEllipseOptions {
  double tolerance = 1e-13;
  int max_iterations = 100000;
};

/// Minimum-area enclosing ellipse by the Khachiyan barycentric iteration with
/// Todd-Yildirim away steps. Used only as an independent cross-check.
inline Ellipse min_area_ellipse(std::span<const Point2> ps, MinAreaEllipseOptions opts = {}) {
  if (convex_hull(ps).size() < 3) throw DegenerateInput("min_area_ellipse: points are collinear");
  const std::size_t m = ps.size();
  constexpr double dim1 = 3.0;  // d + 1 for d = 2
  std::vector<double> u(m, 1.0 / static_cast<double>(m));
  std::vector<double> kappa(m);

  auto invert3 = [](const std::array<double, 9>& s) {
    const double c00 = s[4] * s[8] - s[5] * s[7];
    const double c01 = s[5] * s[6] - s[3] * s[8];
    const double c02 = s[3] * s[7] - s[4] * s[6];
    const double det = s[0] * c00 + s[1] * c01 + s[2] * c02;
    std::array<double, 9> inv{c00,
                              s[2] * s[7] - s[1] * s[8],
                              s[1] * s[5] - s[2] * s[4],
                              c01,
                              s[0] * s[8] - s[2] * s[6],
                              s[2] * s[3] - s[0] * s[5],
                              c02,
                              s[1] * s[6] - s[0] * s[7],
                              s[0] * s[4] - s[1] * s[3]};
    for (double& v : inv) v /= det;
    return inv;
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    std::array<double, 9> moment{};
    for (std::size_t i = 0; i < m; ++i) {
      const double q[3] = {ps[i].x, ps[i].y, 1.0};
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) moment[3 * r + c] += u[i] * q[r] * q[c];
    }
    const auto inv = invert3(moment);
    std::size_t up = 0, down = m;
    for (std::size_t i = 0; i < m; ++i) {
      const double q[3] = {ps[i].x, ps[i].y, 1.0};
      double acc = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) acc += q[r] * inv[3 * r + c] * q[c];
      kappa[i] = acc;
      if (kappa[i] > kappa[up]) up = i;
      if (u[i] > 0.0 && (down == m || kappa[i] < kappa[down])) down = i;
    }
    const double eps_up = kappa[up] / dim1 - 1.0;
    const double eps_down = down == m ? 0.0 : 1.0 - kappa[down] / dim1;
    if (std::max(eps_up, eps_down) <= opts.tolerance) break;

    std::size_t j = up;
    double step = (kappa[up] - dim1) / (dim1 * (kappa[up] - 1.0));
    if (eps_down > eps_up) {
      j = down;
      step = (kappa[down] - dim1) / (dim1 * (kappa[down] - 1.0));
      step = std::max(step, -u[down] / (1.0 - u[down]));
    }
    for (double& w : u) w *= 1.0 - step;
    u[j] += step;
    if (u[j] < 0.0) u[j] = 0.0;
  }

  Point2 c{};
  for (std::size_t i = 0; i < m; ++i) c = c + u[i] * ps[i];
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 d = ps[i] - c;
    sxx += u[i] * d.x * d.x;
    sxy += u[i] * d.x * d.y;
    syy += u[i] * d.y * d.y;
  }
  // Shape matrix A = S^{-1} / d, rescaled so the farthest point sits on the boundary.
  const double det = sxx * syy - sxy * sxy;
  double a11 = syy / det / 2.0, a12 = -sxy / det / 2.0, a22 = sxx / det / 2.0;
  double reach = 0.0;
  for (Point2 p : ps) {
    const Point2 d = p - c;
    reach = std::max(reach, a11 * d.x * d.x + 2.0 * a12 * d.x * d.y + a22 * d.y * d.y);
  }
  a11 /= reach;
  a12 /= reach;
  a22 /= reach;

  const double mean = 0.5 * (a11 + a22);
  const double spread = std::hypot(0.5 * (a11 - a22), a12);
  const double lam_small = mean - spread;  // along the major axis
  const double lam_big = mean + spread;
  const double theta = 0.5 * std::atan2(-2.0 * a12, a22 - a11);
  return Ellipse{c, 1.0 / std::sqrt(lam_small), 1.0 / std::sqrt(lam_big), theta};
}

}  // namespace transversal
