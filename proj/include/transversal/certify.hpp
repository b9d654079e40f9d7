#pragma once

// Bound assembly: the pair grids, the part (a) check, the pentagon example
// and the inequality chain that turns sub-certificates into lambda <= 1.645.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transversal/error.hpp"
#include "transversal/geom.hpp"
#include "transversal/john.hpp"
#include "transversal/search.hpp"

namespace transversal {

// ---------------------------------------------------------------- part (a)

struct PartAReport {
  double height = 0.0;            // of the triangle N Z, 1.5 tau
  bool height_exceeds_two = false;
  std::uint64_t triples_checked = 0;
  std::uint64_t john_triples = 0;
  double max_gap_deviation = 0.0;  // over John triples, from 2 pi / 3
  bool equilateral_is_john = false;
  bool ok = false;
};

/// For k = 3 the only John configurations on the circle are equilateral.
/// Checked over all triples (0, 2 pi i / m, 2 pi j / m) with 0 < i < j < m;
/// m should be a multiple of 3 so the equilateral triple is on the grid.
inline PartAReport check_part_a(int m = 360) {
  if (m < 3) throw InvalidArgument("part (a) grid needs at least 3 steps");
  PartAReport rep;
  rep.height = 1.5 * kGoldenRatio;
  rep.height_exceeds_two = rep.height > 2.0 + kFloatSlack;
  const double step = kTwoPi / m;
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const AngleTuple t{0.0, i * step, j * step};
      ++rep.triples_checked;
      if (simplex_condition(t, 0.0) != TriState::Yes) continue;
      ++rep.john_triples;
      rep.max_gap_deviation = std::max(rep.max_gap_deviation, std::abs(max_arc_gap(t) - kTwoPi / 3.0));
      if (3 * i == m && 3 * j == 2 * m) rep.equilateral_is_john = true;
    }
  }
  rep.ok = rep.height_exceeds_two && rep.john_triples > 0 && rep.max_gap_deviation < 1e-6 &&
           (m % 3 != 0 || rep.equilateral_is_john);
  return rep;
}

inline bool verify_part_a() { return check_part_a().ok; }

// ---------------------------------------------------------------- pair grid

struct PairGrid {
  double step = 0.015;
  double r1_lo = 1.62, r1_hi = 3.0;
  double r2_lo = 1.62, r2_hi = 2.0;
  double tolerance = kFloatSlack;
};

struct AxisPair {
  double r1 = 0.0;
  double r2 = 0.0;
  friend bool operator==(const AxisPair&, const AxisPair&) = default;
};

namespace detail {

/// Multiples m * step inside [lo - tol, hi + tol], ascending.
inline std::vector<double> grid_multiples(double step, double lo, double hi, double tol) {
  std::vector<double> out;
  if (hi + tol < lo - tol) return out;
  const auto first = static_cast<long long>(std::floor((lo - tol) / step)) - 1;
  const auto last = static_cast<long long>(std::ceil((hi + tol) / step)) + 1;
  for (long long m = first; m <= last; ++m) {
    const double v = static_cast<double>(m) * step;
    if (v >= lo - tol && v <= hi + tol) out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// All (r1, r2) on the grid with r1 >= r2, sorted by r1 then r2. A range
/// that contains no multiple of the step (such as [2, 2] at step 0.015,
/// since 2 / 0.015 = 133.33) yields nothing.
inline std::vector<AxisPair> enumerate_pair_grid(const PairGrid& g) {
  if (!(g.step > 0.0) || !std::isfinite(g.step)) throw InvalidArgument("pair grid step must be positive");
  const auto r1s = detail::grid_multiples(g.step, g.r1_lo, g.r1_hi, g.tolerance);
  const auto r2s = detail::grid_multiples(g.step, g.r2_lo, g.r2_hi, g.tolerance);
  std::vector<AxisPair> out;
  for (double a : r1s)
    for (double b : r2s)
      if (a >= b - g.tolerance) out.push_back({a, b});
  return out;
}

// ---------------------------------------------------------------- pentagon

/// Regular pentagon with the given side, centered at the origin, one vertex
/// on the positive y axis.
inline PointSet regular_pentagon(double side) {
  const double circumradius = side / (2.0 * std::sin(kPi / 5.0));
  PointSet out;
  for (int i = 0; i < 5; ++i) {
    const double a = kPi / 2.0 + i * kTwoPi / 5.0;
    out.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
  }
  return out;
}

/// Side of the pentagon whose vertex triples all have width exactly 2, i.e.
/// the extremal set for T(B, 3) with B the unit disk. Half the side of the
/// pentagon written for the unit-diameter normalization, 2 / sqrt(tau + 2).
inline double extremal_pentagon_side() { return 4.0 / std::sqrt(kGoldenRatio + 2.0); }

/// width / 2 of the extremal pentagon: a set with T(B, 3) that needs the
/// blow-up tau, so lambda(B, 3) >= tau.
inline double pentagon_lower_bound() {
  const PointSet p = regular_pentagon(extremal_pentagon_side());
  if (!satisfies_T3(p, 1.0 + kFloatSlack)) throw Error("extremal pentagon fails T(B, 3)");
  return width(p) / 2.0;
}

// ---------------------------------------------------------------- assembly

enum class BoundStatus { Complete, Partial };

constexpr std::string_view to_string(BoundStatus s) { return s == BoundStatus::Complete ? "Complete" : "Partial"; }

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// The (r1, r2) pair the lemma15 campaign must clear.
inline constexpr AxisPair kLemma15Pair{3.0, 1.62};

/// Center-check resolution matching the pi / 960 angle grid of part (c).
inline constexpr int kPartCCenterResolution = 1920;

struct BoundInputs {
  std::optional<bool> part_a;  // unset: not run
  std::vector<Certificate> certificates;
  PairGrid grid;  // required pairs for parts (b) and (c)
};

struct BoundReport {
  BoundStatus status = BoundStatus::Partial;
  std::optional<double> bound;  // 1.645 when Complete
  bool part_a = false;
  bool lemma15 = false;
  std::size_t grid_b_required = 0, grid_b_verified = 0;
  std::size_t grid_c_required = 0, grid_c_verified = 0;
  std::vector<InequalityCheck> inequalities;
  std::vector<std::string> gaps;
};

inline std::vector<InequalityCheck> bound_inequalities(double slack = kFloatSlack) {
  const double tau = kGoldenRatio;
  const double budget_r1 = 3.0;  // worst case of r'_1 <= 3
  std::vector<InequalityCheck> out{
      {"(1.635 / 1.62) * tau < 1.635", 1.635 / 1.62 * tau, 1.635, false},
      {"(1.635 / (0.995 * 1.62)) * tau < 1.645", 1.635 / (0.995 * 1.62) * tau, 1.645, false},
      {"3 pi / 1920 < 0.005", 3.0 * kPi / 1920.0, 0.005, false},
      {"r'_1 * 3 pi / 1920 < r'_1 * 0.005 at r'_1 = 3", budget_r1 * 3.0 * kPi / 1920.0, budget_r1 * 0.005, false},
  };
  for (auto& q : out) q.holds = q.lhs + slack < q.rhs;
  return out;
}

namespace detail {

inline bool same_pair(const CampaignConfig& c, AxisPair p, double tol) {
  return std::abs(c.r1 - p.r1) <= tol && std::abs(c.r2 - p.r2) <= tol;
}

inline std::string pair_label(AxisPair p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.4f, %.4f)", p.r1, p.r2);
  return buf;
}

/// Whether an Empty certificate proves its part of the theorem, and if not
/// why. Part (b) and (c) need rho <= tau; part (c) needs its center round,
/// when one ran, at the pi / 960 grid.
inline std::optional<std::string> certificate_shortfall(const Certificate& c) {
  if (c.verdict != Verdict::Empty) return "verdict " + std::string(to_string(c.verdict));
  if (c.config.mode == Mode::Lemma15) return std::nullopt;
  if (c.config.rho > kGoldenRatio + c.config.slack) return "rho above tau";
  if (c.config.mode == Mode::GridC && c.config.center_check_n != 0 &&
      c.config.center_check_n != kPartCCenterResolution &&
      static_cast<int>(c.rounds.back().n) == c.config.center_check_n)
    return "center check at n = " + std::to_string(c.config.center_check_n);
  return std::nullopt;
}

}  // namespace detail

/// Re-checks every certificate's bookkeeping (InconsistentInputs on any
/// mismatch), matches certificates to the required pairs and re-evaluates
/// the numeric chain. Complete only when nothing is missing.
inline BoundReport assemble_bound(const BoundInputs& in) {
  for (const Certificate& c : in.certificates) check_certificate_consistency(c);

  BoundReport rep;
  rep.inequalities = bound_inequalities();
  for (const auto& q : rep.inequalities)
    if (!q.holds) rep.gaps.push_back("inequality fails: " + q.name);

  rep.part_a = in.part_a.value_or(false);
  if (!in.part_a) rep.gaps.push_back("part (a): not run");
  else if (!*in.part_a) rep.gaps.push_back("part (a): check failed");

  const double tol = in.grid.tolerance;
  // Best evidence for one (mode, pair): verified, or the reason it is not.
  auto cover = [&](Mode mode, AxisPair pair) -> std::optional<std::string> {
    std::optional<std::string> why = "missing";
    for (const Certificate& c : in.certificates) {
      if (c.config.mode != mode || !detail::same_pair(c.config, pair, tol)) continue;
      auto s = detail::certificate_shortfall(c);
      if (!s) return std::nullopt;
      why = std::move(s);
    }
    return why;
  };

  if (auto why = cover(Mode::Lemma15, kLemma15Pair)) rep.gaps.push_back("lemma15 " + detail::pair_label(kLemma15Pair) + ": " + *why);
  else rep.lemma15 = true;

  const auto pairs = enumerate_pair_grid(in.grid);
  rep.grid_b_required = rep.grid_c_required = pairs.size();
  for (Mode mode : {Mode::GridB, Mode::GridC}) {
    std::size_t& verified = mode == Mode::GridB ? rep.grid_b_verified : rep.grid_c_verified;
    for (AxisPair p : pairs) {
      if (auto why = cover(mode, p)) rep.gaps.push_back(std::string(to_string(mode)) + " " + detail::pair_label(p) + ": " + *why);
      else ++verified;
    }
  }
  if (pairs.empty()) rep.gaps.push_back("pair grid is empty");

  if (rep.gaps.empty()) {
    rep.status = BoundStatus::Complete;
    rep.bound = 1.645;
  }
  return rep;
}

}  // namespace transversal
