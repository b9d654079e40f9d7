#pragma once

// Divide-and-conquer search over products of angle arcs
//   I^p_n = [2 p pi / n, 2 (p + 1) pi / n].
// Each round evaluates sufficient pruning rules at cube centers with
// Lipschitz margins; unresolved cubes are halved in every coordinate and the
// resolution n doubles.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "transversal/detail/hash.hpp"
#include "transversal/detail/parallel.hpp"
#include "transversal/error.hpp"
#include "transversal/geom.hpp"
#include "transversal/john.hpp"
#include "transversal/region.hpp"

namespace transversal {

enum class Mode { Lemma15, GridB, GridC };

constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Lemma15: return "lemma15";
    case Mode::GridB: return "grid-b";
    case Mode::GridC: return "grid-c";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "lemma15") return Mode::Lemma15;
  if (s == "grid-b") return Mode::GridB;
  if (s == "grid-c") return Mode::GridC;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

/// Number of angles per configuration searched in each mode.
constexpr int cube_dimension(Mode m) { return m == Mode::GridB ? 4 : 5; }

enum class PruneReason : std::uint8_t {
  TransversalViolated,
  JohnInfeasible,
  LargeArc,
  RegionVerified,
  CenterCheckPassed,
};

inline constexpr std::size_t kReasonCount = 5;
inline constexpr std::array<PruneReason, kReasonCount> kAllReasons{
    PruneReason::TransversalViolated, PruneReason::JohnInfeasible, PruneReason::LargeArc,
    PruneReason::RegionVerified, PruneReason::CenterCheckPassed};

constexpr std::string_view to_string(PruneReason r) {
  switch (r) {
    case PruneReason::TransversalViolated: return "TransversalViolated";
    case PruneReason::JohnInfeasible: return "JohnInfeasible";
    case PruneReason::LargeArc: return "LargeArc";
    case PruneReason::RegionVerified: return "RegionVerified";
    case PruneReason::CenterCheckPassed: return "CenterCheckPassed";
  }
  return "?";
}

inline PruneReason parse_reason(std::string_view s) {
  for (PruneReason r : kAllReasons)
    if (to_string(r) == s) return r;
  throw InvalidArgument("unknown prune reason '" + std::string(s) + "'");
}

/// Product of the arcs I^{p_1}_n x ... x I^{p_k}_n with p_1 <= ... <= p_k < n.
struct AngleCube {
  std::uint32_t n = 0;
  std::uint8_t k = 0;
  std::array<std::uint16_t, 5> p{};

  friend bool operator==(const AngleCube&, const AngleCube&) = default;
  friend auto operator<=>(const AngleCube&, const AngleCube&) = default;

  bool valid() const {
    if (k < 1 || k > 5 || n == 0) return false;
    for (int i = 0; i < k; ++i) {
      if (p[i] >= n) return false;
      if (i > 0 && p[i] < p[i - 1]) return false;
    }
    return true;
  }

  bool has_repeated_index() const {
    for (int i = 1; i < k; ++i)
      if (p[i] == p[i - 1]) return true;
    return false;
  }
};

inline std::uint64_t cube_fingerprint(const AngleCube& c) {
  detail::Fnv1a h;
  h.update_u64(c.n);
  h.update_u64(c.k);
  for (int i = 0; i < c.k; ++i) h.update_u64(c.p[i]);
  return h.value();
}

/// C(n0 + k - 1, k): the number of ordered index multisets.
inline std::uint64_t count_initial_cubes(int k, int n0) {
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n0 + i - 1) / static_cast<std::uint64_t>(i);
  return result;
}

/// Calls fn(cube) for every ordered cube at resolution n0, lexicographically.
template <typename Fn>
void for_each_initial_cube(int k, int n0, Fn&& fn) {
  if (k < 1 || k > 5) throw InvalidArgument("cube dimension must be in [1, 5]");
  if (n0 < 1 || n0 > 65535) throw InvalidArgument("resolution out of range");
  AngleCube c;
  c.n = static_cast<std::uint32_t>(n0);
  c.k = static_cast<std::uint8_t>(k);
  c.p.fill(0);
  while (true) {
    fn(static_cast<const AngleCube&>(c));
    int i = k - 1;
    while (i >= 0 && c.p[i] == n0 - 1) --i;
    if (i < 0) return;
    ++c.p[i];
    for (int j = i + 1; j < k; ++j) c.p[j] = c.p[i];
  }
}

inline std::vector<AngleCube> initial_cubes(int k, int n0) {
  std::vector<AngleCube> out;
  out.reserve(static_cast<std::size_t>(count_initial_cubes(k, n0)));
  for_each_initial_cube(k, n0, [&](const AngleCube& c) { out.push_back(c); });
  return out;
}

/// beta_i = 2 (p_i + 1/2) pi / n; every point of the cube lies within pi/n
/// of the center in each coordinate.
inline std::vector<double> center_angles(const AngleCube& c) {
  std::vector<double> out(c.k);
  for (int i = 0; i < c.k; ++i) out[i] = (2.0 * c.p[i] + 1.0) * kPi / static_cast<double>(c.n);
  return out;
}

/// Children at resolution 2n with p'_i in {2 p_i, 2 p_i + 1}, keeping only
/// nondecreasing index tuples, in lexicographic order.
inline void subdivide_into(const AngleCube& c, std::vector<AngleCube>& out) {
  const unsigned combos = 1u << c.k;
  for (unsigned mask = 0; mask < combos; ++mask) {
    AngleCube child;
    child.n = 2 * c.n;
    child.k = c.k;
    bool ordered = true;
    for (int i = 0; i < c.k; ++i) {
      const unsigned bit = (mask >> (c.k - 1 - i)) & 1u;
      child.p[i] = static_cast<std::uint16_t>(2u * c.p[i] + bit);
      if (i > 0 && child.p[i] < child.p[i - 1]) {
        ordered = false;
        break;
      }
    }
    if (ordered) out.push_back(child);
  }
}

inline std::vector<AngleCube> subdivide(const AngleCube& c) {
  if (2ull * c.n > 65536ull) throw InvalidArgument("resolution would overflow the index type");
  std::vector<AngleCube> out;
  subdivide_into(c, out);
  return out;
}

struct CampaignConfig {
  Mode mode = Mode::Lemma15;
  double r1 = 3.0;
  double r2 = 1.62;
  int n0 = 60;
  int depth_cap = 6;  // deepest subdivision level evaluated; rounds t = 0..depth_cap
  int region_depth = kDefaultRegionDepth;
  double region_min_half_side = 0.0;  // 0 selects r1 / 2048
  double rho = kGoldenRatio;
  int center_check_n = 1920;  // grid-c only; 0 disables the center-check round
  double slack = kFloatSlack;
  std::size_t max_listed_survivors = 10000;
  int threads = 1;  // does not affect results

  static CampaignConfig defaults_for(Mode m) {
    CampaignConfig c;
    c.mode = m;
    c.n0 = m == Mode::Lemma15 ? 60 : 120;
    c.depth_cap = m == Mode::GridC ? 4 : (m == Mode::Lemma15 ? 6 : 5);
    return c;
  }

  double effective_min_half_side() const { return region_min_half_side > 0.0 ? region_min_half_side : r1 / 2048.0; }

  std::uint32_t resolution(int round) const { return static_cast<std::uint32_t>(n0) << round; }

  void validate() const {
    if (!(std::isfinite(r1) && std::isfinite(r2) && r2 > 0.0 && r1 >= r2))
      throw ConfigError("need finite r1 >= r2 > 0");
    if (n0 < 6 || n0 % 6 != 0) throw ConfigError("n0 must be a positive multiple of 6");
    if (depth_cap < 0 || depth_cap > 15) throw ConfigError("depth cap must be in [0, 15]");
    if (static_cast<std::uint64_t>(n0) << depth_cap > 32768)
      throw ConfigError("n0 * 2^depth_cap must not exceed 32768");
    if (region_depth < 0 || region_depth > 20) throw ConfigError("region depth must be in [0, 20]");
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    if (!(slack >= 0.0)) throw ConfigError("slack must be non-negative");
    if (region_min_half_side < 0.0) throw ConfigError("region min half-side must be non-negative");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (center_check_n < 0) throw ConfigError("center-check resolution must be non-negative");
    if (mode == Mode::GridC && center_check_n != 0) {
      bool reachable = false;
      for (int t = 0; t <= depth_cap; ++t) reachable = reachable || resolution(t) == static_cast<std::uint32_t>(center_check_n);
      if (!reachable && center_check_n < static_cast<int>(resolution(depth_cap))) {
        throw ConfigError("grid-c center-check resolution is not n0 * 2^t for any round");
      }
    }
  }

  /// Canonical text of every value that affects results (threads excluded).
  std::string canonical() const {
    std::string s;
    s += "mode=" + std::string(to_string(mode));
    s += ";r1=" + detail::exact_double(r1);
    s += ";r2=" + detail::exact_double(r2);
    s += ";n0=" + std::to_string(n0);
    s += ";depth_cap=" + std::to_string(depth_cap);
    s += ";region_depth=" + std::to_string(region_depth);
    s += ";region_min_half_side=" + detail::exact_double(effective_min_half_side());
    s += ";rho=" + detail::exact_double(rho);
    s += ";center_check_n=" + std::to_string(mode == Mode::GridC ? center_check_n : 0);
    s += ";slack=" + detail::exact_double(slack);
    s += ";max_listed_survivors=" + std::to_string(max_listed_survivors);
    return s;
  }

  std::string hash() const {
    detail::Fnv1a h;
    h.update(canonical());
    return detail::hex64(h.value());
  }
};

/// Rule evaluation at one resolution. Cosines and boundary points of all
/// cube centers are tabulated once per round.
class RuleKernel {
 public:
  RuleKernel(const CampaignConfig& cfg, std::uint32_t n)
      : cfg_(cfg), n_(n), ellipse_(Ellipse::axis_aligned(cfg.r1, cfg.r2)) {
    const double step = kPi / static_cast<double>(n);
    cos_.resize(2 * n + 1);
    for (std::size_t m = 0; m < cos_.size(); ++m) cos_[m] = std::cos(static_cast<double>(m) * step);
    points_.resize(n);
    for (std::uint32_t p = 0; p < n; ++p) {
      const double beta = (2.0 * p + 1.0) * step;
      points_[p] = {cfg.r1 * std::cos(beta), cfg.r2 * std::sin(beta)};
    }
    lipschitz_ = step;  // largest coordinate distance from the center
    john_margin_ = 3.0 * lipschitz_ + cfg.slack;
    eps_ = cfg.r1 * lipschitz_;
    transversal_limit_ = 2.0 * (1.0 + eps_ + cfg.slack);
  }

  std::uint32_t resolution() const { return n_; }
  double inflation() const { return eps_; }
  double john_margin() const { return john_margin_; }

  /// Functional value at the center for index positions (a, b, c, d).
  double functional(const AngleCube& q, int a, int b, int c, int d) const {
    const int pa = q.p[a], pb = q.p[b], pc = q.p[c], pd = q.p[d];
    return cos_at(pa + pb - pc - pd) + cos_at(pa - pb + pc - pd) + cos_at(pa - pb - pc + pd);
  }

  std::array<double, 5> five_values(const AngleCube& q) const {
    return {functional(q, 0, 1, 2, 3), functional(q, 1, 2, 3, 4), -functional(q, 2, 3, 4, 0),
            functional(q, 3, 4, 0, 1), -functional(q, 4, 0, 1, 2)};
  }

  /// Some cyclic center gap exceeds 2*pi/3. With 3 | n the gap of every
  /// tuple canonically assigned to this cube is then at least 2*pi/3 too.
  bool large_arc(const AngleCube& q) const {
    const std::int64_t n = n_;
    std::int64_t worst = static_cast<std::int64_t>(q.p[0]) + n - q.p[q.k - 1];
    for (int i = 1; i < q.k; ++i) worst = std::max<std::int64_t>(worst, q.p[i] - q.p[i - 1]);
    return 3 * worst > n;
  }

  /// The functional moves by less than 3 pi / n inside the cube, so a
  /// center value beyond that margin fixes the sign everywhere.
  bool john_infeasible(const AngleCube& q) const {
    if (q.k == 4) return std::abs(functional(q, 0, 1, 2, 3)) > john_margin_;
    const auto v = five_values(q);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > john_margin_ && *lo < -john_margin_;
  }

  /// Boundary points move by at most r1 pi / n, so a center triple wider
  /// than 2(1 + r1 pi / n) rules out T(B, 3) for every tuple in the cube.
  bool transversal_violated(const AngleCube& q) const {
    return max_center_triple_width(q) > transversal_limit_;
  }

  double max_center_triple_width(const AngleCube& q) const {
    double worst = 0.0;
    for (int i = 0; i < q.k; ++i)
      for (int j = i + 1; j < q.k; ++j)
        for (int l = j + 1; l < q.k; ++l)
          worst = std::max(worst, min_altitude(points_[q.p[i]], points_[q.p[j]], points_[q.p[l]]));
    return worst;
  }

  PointSet center_points(const AngleCube& q) const {
    PointSet z(q.k);
    for (int i = 0; i < q.k; ++i) z[i] = points_[q.p[i]];
    return z;
  }

  RegionQuery region_query(const AngleCube& q, double eps) const { return {center_points(q), eps, ellipse_}; }

  RegionCheck region_check(const AngleCube& q, double eps) const {
    return check_region(region_query(q, eps), cfg_.rho, cfg_.region_depth, cfg_.effective_min_half_side(), cfg_.slack);
  }

  bool region_verified(const AngleCube& q) const {
    return region_check(q, eps_).verdict == RegionVerdict::Verified;
  }

  /// Cube rules, cheapest first.
  std::optional<PruneReason> evaluate(const AngleCube& q) const {
    if (cfg_.mode == Mode::Lemma15) {
      if (large_arc(q)) return PruneReason::LargeArc;
      if (john_infeasible(q)) return PruneReason::JohnInfeasible;
      if (transversal_violated(q)) return PruneReason::TransversalViolated;
      return std::nullopt;
    }
    if (large_arc(q)) return PruneReason::LargeArc;
    if (john_infeasible(q)) return PruneReason::JohnInfeasible;
    if (transversal_violated(q)) return PruneReason::TransversalViolated;
    if (region_verified(q)) return PruneReason::RegionVerified;
    return std::nullopt;
  }

  /// Final grid-c round: only the center tuple itself is claimed.
  bool center_passes(const AngleCube& q) const {
    if (q.has_repeated_index()) return true;  // not a set of k distinct points
    if (large_arc(q)) return true;
    if (q.k == 5) {
      const auto v = five_values(q);
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      if (*hi > cfg_.slack && *lo < -cfg_.slack) return true;
    } else if (std::abs(functional(q, 0, 1, 2, 3)) > cfg_.slack) {
      return true;
    }
    if (max_center_triple_width(q) > 2.0 * (1.0 + cfg_.slack)) return true;
    return region_check(q, 0.0).verdict == RegionVerdict::Verified;
  }

 private:
  double cos_at(int m) const { return cos_[static_cast<std::size_t>(m < 0 ? -m : m)]; }

  CampaignConfig cfg_;
  std::uint32_t n_;
  Ellipse ellipse_;
  std::vector<double> cos_;
  PointSet points_;
  double lipschitz_ = 0.0;
  double john_margin_ = 0.0;
  double eps_ = 0.0;
  double transversal_limit_ = 0.0;
};

namespace detail {

inline CampaignConfig rule_config(Mode mode, double r1, double r2, std::uint32_t n, double rho, double slack) {
  CampaignConfig cfg = CampaignConfig::defaults_for(mode);
  cfg.r1 = r1;
  cfg.r2 = r2;
  cfg.rho = rho;
  cfg.slack = slack;
  (void)n;
  return cfg;
}

}  // namespace detail

/// Rules of the five-point minimal-ellipse search: sign-split John values at
/// the center, or a center triple violating the inflated transversal property.
inline std::optional<PruneReason> prune_lemma15(const AngleCube& c, double r1, double r2,
                                                double slack = kFloatSlack) {
  if (c.k != 5 || !c.valid()) throw InvalidArgument("prune_lemma15 needs a valid 5-dimensional cube");
  const RuleKernel kernel(detail::rule_config(Mode::Lemma15, r1, r2, c.n, kGoldenRatio, slack), c.n);
  return kernel.evaluate(c);
}

/// Rules of the four-point search: large arc, functional margin, inflated
/// transversal property, then the certified region width check.
inline std::optional<PruneReason> prune_grid_b(const AngleCube& c, double r1, double r2, double rho = kGoldenRatio,
                                               int region_depth = kDefaultRegionDepth, double slack = kFloatSlack) {
  if (c.k != 4 || !c.valid()) throw InvalidArgument("prune_grid_b needs a valid 4-dimensional cube");
  if (c.n % 3 != 0) throw InvalidArgument("grid-b cubes need a resolution divisible by 3");
  CampaignConfig cfg = detail::rule_config(Mode::GridB, r1, r2, c.n, rho, slack);
  cfg.region_depth = region_depth;
  const RuleKernel kernel(cfg, c.n);
  return kernel.evaluate(c);
}

/// Five-point analogue of the grid-b rules with the sign-split John test.
inline std::optional<PruneReason> prune_grid_c(const AngleCube& c, double r1, double r2, double rho = kGoldenRatio,
                                               int region_depth = kDefaultRegionDepth, double slack = kFloatSlack) {
  if (c.k != 5 || !c.valid()) throw InvalidArgument("prune_grid_c needs a valid 5-dimensional cube");
  if (c.n % 3 != 0) throw InvalidArgument("grid-c cubes need a resolution divisible by 3");
  CampaignConfig cfg = detail::rule_config(Mode::GridC, r1, r2, c.n, rho, slack);
  cfg.region_depth = region_depth;
  const RuleKernel kernel(cfg, c.n);
  return kernel.evaluate(c);
}

enum class Verdict { Empty, Exhausted, DepthCapReached };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Empty: return "Empty";
    case Verdict::Exhausted: return "Exhausted";
    case Verdict::DepthCapReached: return "DepthCapReached";
  }
  return "?";
}

inline Verdict parse_verdict(std::string_view s) {
  for (Verdict v : {Verdict::Empty, Verdict::Exhausted, Verdict::DepthCapReached})
    if (to_string(v) == s) return v;
  throw InvalidArgument("unknown verdict '" + std::string(s) + "'");
}

struct RoundStats {
  std::uint32_t n = 0;
  std::uint64_t cubes_in = 0;
  std::array<std::uint64_t, kReasonCount> pruned{};
  /// Cubes passed on to the next round. In a final round this counts the
  /// unresolved cubes, which are reported as survivors instead.
  std::uint64_t subdivided = 0;

  std::uint64_t pruned_total() const {
    std::uint64_t s = 0;
    for (auto v : pruned) s += v;
    return s;
  }
  bool conserved() const { return cubes_in == pruned_total() + subdivided; }
  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

/// Audit record of a campaign.
struct Certificate {
  std::string config_hash;
  CampaignConfig config;
  std::vector<RoundStats> rounds;
  Verdict verdict = Verdict::DepthCapReached;
  std::uint64_t survivor_count = 0;
  std::vector<AngleCube> survivors;  // at most config.max_listed_survivors
  double wall_seconds = 0.0;
};

/// Bookkeeping identities every certificate must satisfy; throws
/// InconsistentInputs otherwise.
inline void check_certificate_consistency(const Certificate& c) {
  if (c.config_hash != c.config.hash()) throw InconsistentInputs("certificate config hash does not match its config");
  if (c.rounds.empty()) throw InconsistentInputs("certificate has no rounds");
  for (std::size_t t = 0; t < c.rounds.size(); ++t) {
    const RoundStats& r = c.rounds[t];
    if (!r.conserved()) throw InconsistentInputs("round " + std::to_string(t) + " does not conserve cubes");
    if (r.n != c.config.resolution(static_cast<int>(t)))
      throw InconsistentInputs("round " + std::to_string(t) + " breaks the doubling schedule");
    if (t > 0 && r.cubes_in > 0 && c.rounds[t - 1].subdivided == 0)
      throw InconsistentInputs("round " + std::to_string(t) + " has input after an empty round");
  }
  if (c.rounds.front().cubes_in != count_initial_cubes(cube_dimension(c.config.mode), c.config.n0))
    throw InconsistentInputs("first round does not cover every initial cube");
  const std::uint64_t last = c.rounds.back().subdivided;
  if (static_cast<int>(c.rounds.size()) > c.config.depth_cap + 1) throw InconsistentInputs("more rounds than the depth cap");
  if (c.verdict == Verdict::Empty && (last != 0 || c.survivor_count != 0))
    throw InconsistentInputs("verdict Empty with unresolved cubes in the last round");
  if (c.verdict != Verdict::Empty && (last == 0 || c.survivor_count != last))
    throw InconsistentInputs("non-empty verdict disagrees with the last round");
  if (c.survivors.size() > c.survivor_count) throw InconsistentInputs("more listed survivors than counted");
}

struct AuditRecord {
  AngleCube cube;
  PruneReason reason = PruneReason::TransversalViolated;
  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

namespace detail {

/// Keeps the `capacity` records of smallest pseudo-random priority per
/// reason. The kept set does not depend on insertion order, so partial
/// reservoirs from any chunking merge to the same sample.
class AuditReservoir {
 public:
  AuditReservoir(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), seed_(seed) {}

  void offer(const AngleCube& c, PruneReason r) {
    if (capacity_ == 0) return;
    push({splitmix64(cube_fingerprint(c) ^ seed_), AuditRecord{c, r}});
  }

  void merge(const AuditReservoir& other) {
    for (const auto& heap : other.heaps_) {
      auto copy = heap;
      while (!copy.empty()) {
        push(copy.top());
        copy.pop();
      }
    }
  }

  std::vector<AuditRecord> records() const {
    std::vector<AuditRecord> out;
    for (const auto& heap : heaps_) {
      std::vector<Entry> items;
      auto copy = heap;
      while (!copy.empty()) {
        items.push_back(copy.top());
        copy.pop();
      }
      std::sort(items.begin(), items.end(), Less{});
      for (const auto& e : items) out.push_back(e.record);
    }
    return out;
  }

 private:
  struct Entry {
    std::uint64_t priority;
    AuditRecord record;
  };
  struct Less {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.priority != b.priority) return a.priority < b.priority;
      return a.record.cube < b.record.cube;
    }
  };

  void push(const Entry& e) {
    auto& heap = heaps_[static_cast<std::size_t>(e.record.reason)];
    if (heap.size() < capacity_) {
      heap.push(e);
    } else if (Less{}(e, heap.top())) {
      heap.pop();
      heap.push(e);
    }
  }

  std::size_t capacity_;
  std::uint64_t seed_;
  std::array<std::priority_queue<Entry, std::vector<Entry>, Less>, kReasonCount> heaps_;
};

}  // namespace detail

struct RunOptions {
  std::string checkpoint_path;  // empty: no checkpoints
  bool resume = false;
  std::size_t audit_per_reason = 0;
  std::uint64_t audit_seed = 0x5eedf00dULL;
  std::function<void(const RoundStats&)> on_round;
};

struct CampaignOutcome {
  Certificate certificate;
  std::vector<AuditRecord> audit;  // sampled pruned cubes, grouped by reason
};

}  // namespace transversal
