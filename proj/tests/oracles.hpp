#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's own geometry; each oracle takes a different route to the value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "transversal/geom.hpp"

namespace oracle {

using transversal::Point2;

inline double extent(std::span<const Point2> pts, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  double lo = 1e300, hi = -1e300;
  for (const Point2& p : pts) {
    const double v = p.x * c + p.y * s;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

/// Minimum projection extent: a direction grid over [0, pi), then golden
/// section inside the bracket of every local minimum of the grid.
inline double width_bruteforce(std::span<const Point2> pts, int directions = 20000) {
  if (pts.size() < 2) return 0.0;
  const double step = std::numbers::pi / directions;
  std::vector<double> f(static_cast<std::size_t>(directions));
  for (int i = 0; i < directions; ++i) f[static_cast<std::size_t>(i)] = extent(pts, i * step);
  double best = *std::min_element(f.begin(), f.end());
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < directions; ++i) {
    const double prev = f[static_cast<std::size_t>((i + directions - 1) % directions)];
    const double next = f[static_cast<std::size_t>((i + 1) % directions)];
    const double cur = f[static_cast<std::size_t>(i)];
    if (cur > prev || cur > next) continue;
    double a = (i - 1) * step, b = (i + 1) * step;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = extent(pts, c), fd = extent(pts, d);
    for (int it = 0; it < 100; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = extent(pts, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = extent(pts, d);
      }
    }
    best = std::min({best, fc, fd});
  }
  return best;
}

/// Smallest altitude from Heron's formula: 2 * area / longest side.
inline double triangle_min_altitude(Point2 a, Point2 b, Point2 c) {
  const double x = std::hypot(b.x - c.x, b.y - c.y);
  const double y = std::hypot(a.x - c.x, a.y - c.y);
  const double z = std::hypot(a.x - b.x, a.y - b.y);
  const double longest = std::max({x, y, z});
  if (longest == 0.0) return 0.0;
  // Kahan's stable ordering of Heron's formula.
  double s[3] = {x, y, z};
  std::sort(s, s + 3, [](double u, double v) { return u > v; });
  const double p = (s[0] + (s[1] + s[2])) * (s[2] - (s[0] - s[1])) * (s[2] + (s[0] - s[1])) * (s[0] + (s[1] - s[2]));
  const double area = 0.25 * std::sqrt(std::max(0.0, p));
  return 2.0 * area / longest;
}

/// Width of a set via the max over triples is only a lower bound; this
/// checks T(rB, 3) by brute force over all triples with Heron altitudes.
inline bool t3_bruteforce(std::span<const Point2> pts, double r) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t l = j + 1; l < pts.size(); ++l)
        if (triangle_min_altitude(pts[i], pts[j], pts[l]) > 2.0 * r) return false;
  return true;
}

/// F in product form: 2 cos((a1 - a4)/2) cos((a2 - a3)/2) + cos((a1 + a4 - a2 - a3)/2).
inline double F(double a1, double a2, double a3, double a4) {
  return 2.0 * std::cos(0.5 * (a1 - a4)) * std::cos(0.5 * (a2 - a3)) + std::cos(0.5 * (a1 + a4 - a2 - a3));
}

/// Number of nondecreasing k-sequences over {0, ..., n-1}, by dynamic programming.
inline std::uint64_t nondecreasing_sequences(int k, int n) {
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n), 1);  // length 1 ending at v
  for (int len = 2; len <= k; ++len) {
    std::uint64_t acc = 0;
    for (int v = 0; v < n; ++v) {
      acc += ways[static_cast<std::size_t>(v)];
      ways[static_cast<std::size_t>(v)] = acc;
    }
  }
  std::uint64_t total = 0;
  for (auto w : ways) total += w;
  return total;
}

/// Points left of (or on) every directed hull edge, by brute force.
inline bool hull_contains_all(std::span<const Point2> hull, std::span<const Point2> pts, double tol) {
  const std::size_t m = hull.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a = hull[i], b = hull[(i + 1) % m];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    for (const Point2& p : pts) {
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross < -tol * std::max(1.0, len)) return false;
    }
  }
  return true;
}

/// Pair-grid size by integer counting with the step in thousandths.
inline std::size_t pair_grid_count(int step_milli, int r1_lo, int r1_hi, int r2_lo, int r2_hi) {
  std::size_t count = 0;
  for (int a = r1_lo; a <= r1_hi; ++a) {
    if (a % step_milli) continue;
    for (int b = r2_lo; b <= r2_hi; ++b)
      if (b % step_milli == 0 && a >= b) ++count;
  }
  return count;
}

}  // namespace oracle
