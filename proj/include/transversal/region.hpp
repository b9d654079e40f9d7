#pragma once

// Certified outer approximation of
//   R(Z, eps) ∩ E,  R(Z, eps) = { x : {x} ∪ Z satisfies T((1 + eps)B, 3) },
// by an adaptive quadtree, and an upper bound on the width of that set.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "transversal/error.hpp"
#include "transversal/geom.hpp"

namespace transversal {

struct RegionQuery {
  PointSet z;
  double eps = 0.0;
  Ellipse ellipse;  // axis-aligned and centered at the origin
};

struct Cell {
  Point2 center;
  double half_side = 0.0;

  double half_diagonal() const { return half_side * std::numbers::sqrt2; }
};

enum class CellStatus { Out, Keep };

struct RetainedCell {
  int depth = 0;
  Cell cell;
};

struct OuterApproxStats {
  std::uint64_t tested = 0;
  std::uint64_t kept = 0;
  std::uint64_t discarded = 0;
};

/// Union of `cells` contains R(Z, eps) ∩ E.
struct OuterApprox {
  std::vector<RetainedCell> cells;
  int max_depth_used = 0;
  OuterApproxStats stats;

  bool empty_region() const { return cells.empty(); }
};

enum class RegionVerdict { Verified, Unknown };

constexpr std::string_view to_string(RegionVerdict v) { return v == RegionVerdict::Verified ? "verified" : "unknown"; }

inline constexpr int kDefaultRegionDepth = 9;

/// Default smallest cell half-side, r1 / 2048.
inline double default_min_half_side(const Ellipse& e) { return e.r1 / 2048.0; }

namespace detail {

/// Per-query precomputation shared by the cell classifier and the membership test.
class RegionKernel {
 public:
  RegionKernel(const RegionQuery& q, double slack) : ellipse_(q.ellipse), slack_(slack) {
    if (!q.ellipse.valid() || !q.ellipse.is_axis_aligned_at_origin())
      throw InvalidArgument("region queries need an axis-aligned ellipse centered at the origin");
    if (q.z.empty()) throw InvalidArgument("region query needs a nonempty point set");
    if (q.eps < 0.0) throw InvalidArgument("region inflation must be non-negative");
    limit_ = 2.0 * (1.0 + q.eps);
    admissible_ = max_triple_width(q.z) <= limit_ + slack_;
    exact_admissible_ = satisfies_T3(q.z, 1.0 + q.eps);
    for (std::size_t i = 0; i < q.z.size(); ++i)
      for (std::size_t j = i + 1; j < q.z.size(); ++j)
        if (!(q.z[i] == q.z[j])) pairs_.push_back({q.z[i], q.z[j], dot(q.z[j] - q.z[i], q.z[j] - q.z[i])});
  }

  /// False when some triple of Z certifiably violates the inflated property,
  /// which makes the whole region empty.
  bool admissible() const { return admissible_; }

  bool contains(Point2 x) const {
    if (!exact_admissible_) return false;
    for (const Pair& p : pairs_)
      if (min_altitude(x, p.a, p.b) > limit_) return false;
    return true;
  }

  bool box_outside_ellipse(Point2 c, double h) const {
    const double x = std::clamp(0.0, c.x - h, c.x + h);
    const double y = std::clamp(0.0, c.y - h, c.y + h);
    return (x / ellipse_.r1) * (x / ellipse_.r1) + (y / ellipse_.r2) * (y / ellipse_.r2) > 1.0 + slack_;
  }

  bool box_inside_ellipse(Point2 c, double h) const {
    const double x = std::max(std::abs(c.x - h), std::abs(c.x + h));
    const double y = std::max(std::abs(c.y - h), std::abs(c.y + h));
    return (x / ellipse_.r1) * (x / ellipse_.r1) + (y / ellipse_.r2) * (y / ellipse_.r2) <= 1.0;
  }

  /// Out only when the square certifiably misses R(Z, eps) ∩ E. Width is
  /// 1-Lipschitz in each point, so a center excluded by more than the
  /// half-diagonal excludes the whole square.
  CellStatus classify(Point2 c, double h, bool known_inside) const {
    if (!admissible_) return CellStatus::Out;
    if (!known_inside && box_outside_ellipse(c, h)) return CellStatus::Out;
    const double bound = limit_ + h * std::numbers::sqrt2 + slack_;
    for (const Pair& p : pairs_)
      if (p.altitude_exceeds(c, bound)) return CellStatus::Out;
    return CellStatus::Keep;
  }

  /// Every point of the square lies in R(Z, eps); the caller checks E.
  bool box_inside_region(Point2 c, double h) const {
    if (!exact_admissible_) return false;
    const double bound = limit_ - h * std::numbers::sqrt2;
    if (bound < 0.0) return false;
    for (const Pair& p : pairs_)
      if (p.altitude_exceeds(c, bound)) return false;
    return true;
  }

  /// Appends the vertices of a convex polygon containing the square's part
  /// of R(Z, eps). For x in R, |orient(x, a, b)| <= limit * longest side,
  /// and over the square the longest side is at most its value at the
  /// farthest corner, so each pair confines R to a slab about the line ab.
  void clip_box_to_region(Point2 c, double h, PointSet& out) const {
    constexpr std::size_t kCap = 64;  // each half-plane adds at most one vertex
    std::array<Point2, kCap> buf_a, buf_b;
    Point2* poly = buf_a.data();
    Point2* next = buf_b.data();
    std::size_t n = 4;
    poly[0] = {c.x - h, c.y - h};
    poly[1] = {c.x + h, c.y - h};
    poly[2] = {c.x + h, c.y + h};
    poly[3] = {c.x - h, c.y + h};
    auto far2 = [&](Point2 p) {
      const double dx = std::abs(c.x - p.x) + h, dy = std::abs(c.y - p.y) + h;
      return dx * dx + dy * dy;
    };
    for (const Pair& p : pairs_) {
      const double reach = (limit_ + slack_) * std::sqrt(std::max({p.ab2, far2(p.a), far2(p.b)}));
      const double oc = orient(c, p.a, p.b);
      const double spread = h * (std::abs(p.a.y - p.b.y) + std::abs(p.b.x - p.a.x));
      if (std::abs(oc) + spread <= reach) continue;  // square inside the slab
      for (double sign : {1.0, -1.0}) {
        if (sign * oc + spread <= reach) continue;
        // Keep sign * orient(x, a, b) <= reach.
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const Point2 u = poly[i], v = poly[(i + 1) % n];
          const double fu = sign * orient(u, p.a, p.b) - reach, fv = sign * orient(v, p.a, p.b) - reach;
          if (fu <= 0.0) next[m++] = u;
          if ((fu < 0.0 && fv > 0.0) || (fu > 0.0 && fv < 0.0)) next[m++] = u + (v - u) * (fu / (fu - fv));
        }
        std::swap(poly, next);
        n = m;
        if (n == 0) return;
      }
    }
    out.insert(out.end(), poly, poly + n);
  }

  const Ellipse& ellipse() const { return ellipse_; }

 private:
  Ellipse ellipse_;
  double slack_;
  double limit_ = 2.0;
  bool admissible_ = true;
  bool exact_admissible_ = true;
  struct Pair {
    Point2 a, b;
    double ab2;  // squared length of ab

    /// min_altitude(x, a, b) > bound, compared in squared form.
    bool altitude_exceeds(Point2 x, double bound) const {
      const double o = orient(x, a, b);
      const double longest2 = std::max({ab2, dot(x - a, x - a), dot(x - b, x - b)});
      return o * o > bound * bound * longest2;
    }
  };

  std::vector<Pair> pairs_;
};

struct GridCell {
  std::int32_t ix = 0;
  std::int32_t iy = 0;
  bool inside = false;
};

/// Level-by-level quadtree over the square [-r1, r1]^2. At depth d a cell
/// (ix, iy) has half-side r1 / 2^d. Cells certifiably contained in
/// R(Z, eps) ∩ E are settled: none of their children could be discarded, so
/// they are reported once and not refined. `on_level(depth, half_side, kept,
/// settled, last)` runs after each level and returns true to stop early; it
/// may drop cells from `kept` that need no further refinement.
template <typename OnLevel>
void refine_levels(const RegionKernel& kernel, int max_depth, double min_half_side, OuterApproxStats& stats,
                   OnLevel&& on_level) {
  const double r1 = kernel.ellipse().r1;
  std::vector<GridCell> level{GridCell{}};
  std::vector<GridCell> kept, settled;
  for (int depth = 0;; ++depth) {
    const double h = std::ldexp(r1, -depth);
    kept.clear();
    settled.clear();
    for (const GridCell& g : level) {
      const Point2 c{-r1 + (2.0 * g.ix + 1.0) * h, -r1 + (2.0 * g.iy + 1.0) * h};
      ++stats.tested;
      if (kernel.classify(c, h, g.inside) == CellStatus::Out) {
        ++stats.discarded;
        continue;
      }
      ++stats.kept;
      const bool inside = g.inside || kernel.box_inside_ellipse(c, h);
      if (inside && kernel.box_inside_region(c, h)) {
        settled.push_back({g.ix, g.iy, true});
      } else {
        kept.push_back({g.ix, g.iy, inside});
      }
    }
    const bool last = depth >= max_depth || h < min_half_side || kept.empty();
    if (on_level(depth, h, kept, std::span<const GridCell>(settled), last) || last) return;
    level.clear();
    level.reserve(kept.size() * 4);
    for (const GridCell& g : kept)
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) level.push_back({2 * g.ix + a, 2 * g.iy + b, g.inside});
  }
}

/// Hull of all corners of same-size grid cells, using only the lowest and
/// highest cell of each column.
inline PointSet grid_cells_hull(std::span<const GridCell> cells, double r1, double h) {
  if (cells.empty()) return {};
  std::int32_t lo = cells.front().ix, hi = cells.front().ix;
  for (const GridCell& g : cells) {
    lo = std::min(lo, g.ix);
    hi = std::max(hi, g.ix);
  }
  const std::size_t cols = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::int32_t> bottom(cols, INT32_MAX), top(cols, INT32_MIN);
  for (const GridCell& g : cells) {
    auto& b = bottom[static_cast<std::size_t>(g.ix - lo)];
    auto& t = top[static_cast<std::size_t>(g.ix - lo)];
    b = std::min(b, g.iy);
    t = std::max(t, g.iy);
  }
  PointSet corners;
  corners.reserve(cols * 4);
  for (std::size_t c = 0; c < cols; ++c) {
    if (bottom[c] == INT32_MAX) continue;
    const double x0 = -r1 + 2.0 * h * static_cast<double>(lo + static_cast<std::int32_t>(c));
    const double x1 = x0 + 2.0 * h;
    const double y0 = -r1 + 2.0 * h * bottom[c];
    const double y1 = -r1 + 2.0 * h * (top[c] + 1);
    corners.push_back({x0, y0});
    corners.push_back({x1, y0});
    corners.push_back({x0, y1});
    corners.push_back({x1, y1});
  }
  return convex_hull(corners);
}

/// Hull of a column profile: column c spans x in [-r1 + 2hc, -r1 + 2h(c+1)]
/// and rows lo[c]..hi[c] (edge indices), empty when lo[c] > hi[c].
inline PointSet column_profile_hull(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi, double r1,
                                    double h) {
  const std::size_t cols = lo.size();
  PointSet pts;
  pts.reserve(2 * cols + 2);
  const auto empty = [&](std::size_t c) { return lo[c] > hi[c]; };
  for (std::size_t line = 0; line <= cols; ++line) {
    std::int64_t a = std::numeric_limits<std::int64_t>::max(), b = std::numeric_limits<std::int64_t>::min();
    if (line > 0 && !empty(line - 1)) {
      a = std::min(a, lo[line - 1]);
      b = std::max(b, hi[line - 1]);
    }
    if (line < cols && !empty(line)) {
      a = std::min(a, lo[line]);
      b = std::max(b, hi[line]);
    }
    if (a > b) continue;
    const double x = -r1 + 2.0 * h * static_cast<double>(line);
    pts.push_back({x, -r1 + 2.0 * h * static_cast<double>(a)});
    pts.push_back({x, -r1 + 2.0 * h * static_cast<double>(b)});
  }
  return monotone_chain(pts);
}

/// Upper bound on the width of conv(hull) ∩ E: in every direction the
/// support function of the intersection is at most the smaller of the two.
/// Any direction gives an upper bound; edge normals of the hull and a fixed
/// fan of `fan` directions are tried.
inline double clipped_width_bound(std::span<const Point2> hull, const Ellipse& e, int fan = 256) {
  if (hull.size() < 3) return convex_polygon_width(hull);
  auto extent = [&](Point2 u) {
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    for (const Point2& v : hull) {
      const double d = dot(v, u);
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    const double he = std::sqrt(e.r1 * e.r1 * u.x * u.x + e.r2 * e.r2 * u.y * u.y);
    return std::min(hi, he) + std::min(-lo, he);
  };
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = hull[(i + 1) % n] - hull[i];
    const double len = norm(d);
    if (len > 0.0) best = std::min(best, extent({d.y / len, -d.x / len}));
  }
  for (int i = 0; i < fan; ++i) {
    const double t = kPi * static_cast<double>(i) / static_cast<double>(fan);
    best = std::min(best, extent({std::cos(t), std::sin(t)}));
  }
  return best;
}

}  // namespace detail

/// True iff every triple of {x} ∪ Z has width <= 2(1 + eps).
inline bool region_contains(const RegionQuery& q, Point2 x) {
  return detail::RegionKernel(q, kFloatSlack).contains(x);
}

inline CellStatus classify_cell(const RegionQuery& q, const Cell& c, double slack = kFloatSlack) {
  if (!(c.half_side > 0.0)) throw InvalidArgument("cell half-side must be positive");
  return detail::RegionKernel(q, slack).classify(c.center, c.half_side, false);
}

/// Quadtree cover of R(Z, eps) ∩ E starting from the square circumscribing
/// [-r1, r1] x [-r2, r2]. Keep cells are refined until depth `max_depth` or
/// until their half-side drops below `min_half_side`.
inline OuterApprox outer_approx(const RegionQuery& q, int max_depth, double min_half_side,
                                double slack = kFloatSlack) {
  if (max_depth < 0) throw InvalidArgument("max_depth must be non-negative");
  const detail::RegionKernel kernel(q, slack);
  OuterApprox out;
  const double r1 = q.ellipse.r1;
  detail::refine_levels(kernel, max_depth, min_half_side, out.stats,
                        [&](int depth, double h, std::vector<detail::GridCell>& kept,
                            std::span<const detail::GridCell> settled, bool last) {
                          out.max_depth_used = depth;
                          for (const auto& g : settled)
                            out.cells.push_back(
                                {depth, Cell{{-r1 + (2.0 * g.ix + 1.0) * h, -r1 + (2.0 * g.iy + 1.0) * h}, h}});
                          if (last) {
                            out.cells.reserve(out.cells.size() + kept.size());
                            for (const auto& g : kept)
                              out.cells.push_back(
                                  {depth, Cell{{-r1 + (2.0 * g.ix + 1.0) * h, -r1 + (2.0 * g.iy + 1.0) * h}, h}});
                          }
                          return false;
                        });
  return out;
}

/// Width of the hull of all retained cell corners; bounds the width of
/// conv(R(Z, eps) ∩ E) from above.
inline double region_width_upper_bound(const OuterApprox& oa) {
  if (oa.cells.empty()) throw InvalidArgument("region_width_upper_bound of an empty cover");
  PointSet corners;
  corners.reserve(oa.cells.size() * 4);
  for (const RetainedCell& rc : oa.cells) {
    const Point2 c = rc.cell.center;
    const double h = rc.cell.half_side;
    corners.push_back({c.x - h, c.y - h});
    corners.push_back({c.x + h, c.y - h});
    corners.push_back({c.x - h, c.y + h});
    corners.push_back({c.x + h, c.y + h});
  }
  return width(corners);
}

struct RegionCheck {
  RegionVerdict verdict = RegionVerdict::Unknown;
  double width_bound = 0.0;
  int depth = -1;               // -1 when decided from E alone
  bool empty = false;           // every cell was discarded
  bool cover_is_ellipse = false;
  PointSet hull;                // hull of the cover at the deciding level
  OuterApproxStats stats;
};

/// Tries to certify that R(Z, eps) ∩ E satisfies T(rho B), refining level by
/// level and stopping as soon as the cover's hull is narrow enough.
inline RegionCheck check_region(const RegionQuery& q, double rho, int max_depth, double min_half_side,
                                double slack = kFloatSlack) {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  const detail::RegionKernel kernel(q, slack);
  const double threshold = 2.0 * rho - slack;
  RegionCheck out;
  // The region sits inside E, whose width is 2 r2.
  if (2.0 * q.ellipse.r2 <= threshold) {
    out.verdict = RegionVerdict::Verified;
    out.width_bound = 2.0 * q.ellipse.r2;
    out.cover_is_ellipse = true;
    return out;
  }
  const double r1 = q.ellipse.r1;
  // Per-column extremes, in row-edge units of the current level, of the
  // settled cells and of everything retained.
  std::vector<std::int64_t> settled_lo, settled_hi, lo, hi;
  settled_lo.assign(1, std::numeric_limits<std::int64_t>::max());
  settled_hi.assign(1, std::numeric_limits<std::int64_t>::min());
  detail::refine_levels(
      kernel, max_depth, min_half_side, out.stats,
      [&](int depth, double h, std::vector<detail::GridCell>& kept, std::span<const detail::GridCell> settled,
          bool last) {
        out.depth = depth;
        if (depth > 0) {
          // Each column splits into two; settled extents carry over doubled.
          std::vector<std::int64_t> nlo(settled_lo.size() * 2), nhi(settled_hi.size() * 2);
          for (std::size_t c = 0; c < settled_lo.size(); ++c) {
            const bool any = settled_lo[c] != std::numeric_limits<std::int64_t>::max();
            nlo[2 * c] = nlo[2 * c + 1] = any ? 2 * settled_lo[c] : settled_lo[c];
            nhi[2 * c] = nhi[2 * c + 1] = any ? 2 * settled_hi[c] : settled_hi[c];
          }
          settled_lo = std::move(nlo);
          settled_hi = std::move(nhi);
        }
        for (const auto& g : settled) {
          auto c = static_cast<std::size_t>(g.ix);
          settled_lo[c] = std::min<std::int64_t>(settled_lo[c], g.iy);
          settled_hi[c] = std::max<std::int64_t>(settled_hi[c], g.iy + 1);
        }
        if (!settled.empty()) {
          // Settled cells lie inside the region, so their hull already bounds
          // its width from below.
          const PointSet sh = detail::column_profile_hull(settled_lo, settled_hi, r1, h);
          const double w = convex_polygon_width(sh);
          if (w > threshold) {
            out.hull = sh;
            out.width_bound = w;
            out.verdict = RegionVerdict::Unknown;
            return true;
          }
        }
        lo = settled_lo;
        hi = settled_hi;
        for (const auto& g : kept) {
          auto c = static_cast<std::size_t>(g.ix);
          lo[c] = std::min<std::int64_t>(lo[c], g.iy);
          hi[c] = std::max<std::int64_t>(hi[c], g.iy + 1);
        }
        out.hull = detail::column_profile_hull(lo, hi, r1, h);
        if (out.hull.empty()) {
          out.empty = true;
          out.width_bound = 0.0;
          out.verdict = RegionVerdict::Verified;
          return true;
        }
        out.width_bound = convex_polygon_width(out.hull);
        if (out.width_bound > threshold)
          out.width_bound = std::min(out.width_bound, detail::clipped_width_bound(out.hull, q.ellipse));
        // Clipping trims roughly a cell per side, so it is only tried when
        // that could close the gap.
        if (out.width_bound > threshold && out.width_bound - threshold < 4.0 * std::numbers::sqrt2 * h) {
          // Replace the unsettled squares by their slab-clipped parts.
          PointSet pts = detail::column_profile_hull(settled_lo, settled_hi, r1, h);
          for (const auto& g : kept) {
            const Point2 c{-r1 + (2.0 * g.ix + 1.0) * h, -r1 + (2.0 * g.iy + 1.0) * h};
            kernel.clip_box_to_region(c, h, pts);
          }
          PointSet clipped = convex_hull(pts);
          const double w = std::min(convex_polygon_width(clipped), detail::clipped_width_bound(clipped, q.ellipse));
          if (w < out.width_bound) {
            out.width_bound = w;
            out.hull = std::move(clipped);
          }
        }
        if (out.width_bound <= threshold) {
          out.verdict = RegionVerdict::Verified;
          return true;
        }
        // A cell between the settled extremes of its own column lies in the
        // settled hull and cannot move the final hull.
        if (!last) {
          std::erase_if(kept, [&](const detail::GridCell& g) {
            const auto c = static_cast<std::size_t>(g.ix);
            return settled_lo[c] <= g.iy && g.iy + 1 <= settled_hi[c];
          });
        }
        return false;
      });
  return out;
}

/// Verified iff the cover's hull width is at most 2 rho minus the slack.
/// Never refutes: an outer cover cannot certify failure.
inline RegionVerdict region_satisfies_T(const RegionQuery& q, double rho, int max_depth = kDefaultRegionDepth,
                                        double min_half_side = -1.0, double slack = kFloatSlack) {
  if (min_half_side < 0.0) min_half_side = default_min_half_side(q.ellipse);
  return check_region(q, rho, max_depth, min_half_side, slack).verdict;
}

/// `depth,cx,cy,half_side` rows, preceded by that header.
inline void write_cells_csv(std::ostream& os, const OuterApprox& oa) {
  const auto old = os.precision(17);
  os << "depth,cx,cy,half_side\n";
  for (const RetainedCell& rc : oa.cells)
    os << rc.depth << ',' << rc.cell.center.x << ',' << rc.cell.center.y << ',' << rc.cell.half_side << '\n';
  os.precision(old);
}

}  // namespace transversal
