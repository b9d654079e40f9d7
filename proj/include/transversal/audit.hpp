#pragma once

// Soundness sampling: re-checks pruned cubes on exact tuples drawn from
// inside them, using the public predicates rather than the round kernel.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "transversal/geom.hpp"
#include "transversal/john.hpp"
#include "transversal/region.hpp"
#include "transversal/search.hpp"

namespace transversal {

struct SoundnessViolation {
  AngleCube cube;
  PruneReason reason = PruneReason::TransversalViolated;
  std::vector<double> angles;
  std::string detail;
};

struct SoundnessReport {
  std::array<std::uint64_t, kReasonCount> cubes{};
  std::array<std::uint64_t, kReasonCount> samples{};
  std::uint64_t region_points = 0;  // member points checked against covers
  std::vector<SoundnessViolation> violations;

  std::uint64_t total_samples() const {
    std::uint64_t s = 0;
    for (auto v : samples) s += v;
    return s;
  }
  bool clean() const { return violations.empty(); }
};

namespace detail {

/// Ordered angles drawn uniformly from the half-open cube; equal indices are
/// sorted within their shared arc.
inline std::vector<double> sample_tuple(const AngleCube& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(c.k);
  const double step = kTwoPi / static_cast<double>(c.n);
  for (int i = 0; i < c.k; ++i) a[i] = (static_cast<double>(c.p[i]) + u(rng)) * step;
  std::sort(a.begin(), a.end());
  return a;
}

inline bool strictly_increasing(const std::vector<double>& a) {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i - 1] < a[i])) return false;
  return true;
}

inline PointSet tuple_points(const Ellipse& e, const std::vector<double>& angles) {
  return ellipse_boundary_points(e, angles);
}

}  // namespace detail

/// Checks `tuples_per_cube` exact tuples inside every audited cube against
/// the defining predicate of its prune reason:
///  - TransversalViolated: the tuple's points fail T(B, 3);
///  - JohnInfeasible: the center's largest and smallest of the five values
///    keep their signs (k = 5), or F keeps the center's sign (k = 4);
///  - LargeArc: some cyclic gap of the tuple exceeds 2 pi / 3;
///  - RegionVerified: points of R(Z') ∩ E lie in R(Z, eps) and in the hull
///    that certified the cube, and Z' itself lies in that hull;
///  - CenterCheckPassed: the center tuple passes an independent recheck.
inline SoundnessReport check_soundness(const CampaignConfig& cfg, const std::vector<AuditRecord>& records,
                                       int tuples_per_cube = 10, std::uint64_t seed = 1,
                                       int region_points_per_tuple = 16) {
  SoundnessReport rep;
  std::mt19937_64 rng(seed);
  const Ellipse e = Ellipse::axis_aligned(cfg.r1, cfg.r2);
  const double tol = 1e-9;

  auto violation = [&](const AuditRecord& r, const std::vector<double>& a, std::string what) {
    rep.violations.push_back({r.cube, r.reason, a, std::move(what)});
  };

  for (const AuditRecord& r : records) {
    const auto idx = static_cast<std::size_t>(r.reason);
    ++rep.cubes[idx];
    const AngleCube& c = r.cube;

    if (r.reason == PruneReason::CenterCheckPassed) {
      ++rep.samples[idx];
      const std::vector<double> a = center_angles(c);
      if (c.has_repeated_index()) continue;  // not a configuration of k distinct points
      const AngleTuple t{std::span<const double>(a)};
      bool ok = max_arc_gap(t) > kTwoPi / 3.0;
      if (!ok && c.k == 5) {
        const auto v = five_point_values(t);
        ok = *std::max_element(v.begin(), v.end()) > cfg.slack && *std::min_element(v.begin(), v.end()) < -cfg.slack;
      } else if (!ok) {
        ok = std::abs(four_point_john_residual(t)) > cfg.slack;
      }
      const PointSet z = detail::tuple_points(e, a);
      ok = ok || !satisfies_T3(z, 1.0 + cfg.slack);
      ok = ok || check_region({z, 0.0, e}, cfg.rho, cfg.region_depth, cfg.effective_min_half_side(), cfg.slack)
                         .verdict == RegionVerdict::Verified;
      if (!ok) violation(r, a, "center tuple passes no check");
      continue;
    }

    // The certifying cover of the cube center, needed for region audits.
    RegionCheck cover;
    PointSet center_z;
    double eps = 0.0;
    if (r.reason == PruneReason::RegionVerified) {
      eps = cfg.r1 * kPi / static_cast<double>(c.n);
      center_z = detail::tuple_points(e, center_angles(c));
      cover = check_region({center_z, eps, e}, cfg.rho, cfg.region_depth, cfg.effective_min_half_side(), cfg.slack);
      if (cover.verdict != RegionVerdict::Verified) {
        violation(r, center_angles(c), "center cover does not verify on recomputation");
        continue;
      }
    }

    // Center signs, for JohnInfeasible audits.
    double center_f = 0.0;
    std::size_t center_hi = 0, center_lo = 0;
    if (r.reason == PruneReason::JohnInfeasible) {
      // Raw values: a cube with a repeated index has equal center angles.
      const std::vector<double> b = center_angles(c);
      if (c.k == 5) {
        const auto v = detail::five_values_raw(b.data());
        center_hi = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        center_lo = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
      } else {
        center_f = john_functional(b[0], b[1], b[2], b[3]);
      }
    }

    for (int s = 0; s < tuples_per_cube; ++s) {
      const std::vector<double> a = detail::sample_tuple(c, rng);
      if (!detail::strictly_increasing(a)) continue;  // measure-zero tie
      ++rep.samples[idx];
      const AngleTuple t{std::span<const double>(a)};
      switch (r.reason) {
        case PruneReason::TransversalViolated:
          if (satisfies_T3(detail::tuple_points(e, a), 1.0)) violation(r, a, "tuple satisfies T(B, 3)");
          break;
        case PruneReason::JohnInfeasible:
          // The rule claims more than "not John": the signs seen at the
          // center hold on the whole cube.
          if (c.k == 5) {
            const auto v = five_point_values(t);
            if (!(v[center_hi] > 0.0 && v[center_lo] < 0.0)) violation(r, a, "five values lose the center's sign split");
          } else {
            const double f = four_point_john_residual(t);
            if (f == 0.0 || (f > 0.0) != (center_f > 0.0)) violation(r, a, "functional changes sign inside the cube");
          }
          break;
        case PruneReason::LargeArc:
          if (!(max_arc_gap(t) > kTwoPi / 3.0)) violation(r, a, "no arc gap above 2 pi / 3");
          break;
        case PruneReason::RegionVerified: {
          const PointSet zp = detail::tuple_points(e, a);
          if (cover.cover_is_ellipse) break;  // E itself is narrow enough
          for (const Point2& z : zp) {
            if (!cover.empty && satisfies_T3(zp, 1.0) && !convex_polygon_contains(cover.hull, z, tol))
              violation(r, a, "tuple point outside the certifying hull");
          }
          const RegionQuery exact{zp, 0.0, e};
          const RegionQuery inflated{center_z, eps, e};
          std::uniform_real_distribution<double> ux(-cfg.r1, cfg.r1), uy(-cfg.r2, cfg.r2);
          int found = 0;
          for (int tries = 0; found < region_points_per_tuple && tries < 64 * region_points_per_tuple; ++tries) {
            const Point2 x{ux(rng), uy(rng)};
            if (e.level(x) > 1.0 || !region_contains(exact, x)) continue;
            ++found;
            ++rep.region_points;
            if (!region_contains(inflated, x)) violation(r, a, "member of R(Z') outside R(Z, eps)");
            if (cover.empty || !convex_polygon_contains(cover.hull, x, tol))
              violation(r, a, "member of R(Z') ∩ E outside the certifying hull");
          }
          break;
        }
        case PruneReason::CenterCheckPassed:
          break;
      }
    }
  }
  return rep;
}

}  // namespace transversal
