#pragma once

// Sign criteria deciding when the unit circle is the minimum-area ellipse of
// a few points on it, written in terms of the angles of those points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>

#include "transversal/error.hpp"
#include "transversal/geom.hpp"

namespace transversal {

enum class TriState { Yes, No, Unknown };

constexpr std::string_view to_string(TriState t) {
  switch (t) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "?";
}

/// Three to five angles (radians) of points on a circle or ellipse.
class AngleTuple {
 public:
  static constexpr std::size_t kMax = 5;

  AngleTuple() = default;
  AngleTuple(std::initializer_list<double> alphas) : AngleTuple(std::span<const double>(alphas.begin(), alphas.size())) {}
  explicit AngleTuple(std::span<const double> alphas) {
    if (alphas.size() < 3 || alphas.size() > kMax) throw InvalidArgument("angle tuple needs 3 to 5 angles");
    size_ = alphas.size();
    std::copy(alphas.begin(), alphas.end(), values_.begin());
  }

  std::size_t size() const { return size_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return {values_.data(), size_}; }

  /// 0 <= a_1 < a_2 < ... < a_k < 2*pi.
  bool is_ordered() const {
    if (size_ == 0 || !(values_[0] >= 0.0) || !(values_[size_ - 1] < kTwoPi)) return false;
    for (std::size_t i = 1; i < size_; ++i)
      if (!(values_[i - 1] < values_[i])) return false;
    return true;
  }

 private:
  std::array<double, kMax> values_{};
  std::size_t size_ = 0;
};

/// The half-angle cosine functional
///   cos((a1+a2-a3-a4)/2) + cos((a1-a2+a3-a4)/2) + cos((a1-a2-a3+a4)/2).
/// It vanishes on four-point John configurations of the circle and is
/// 3-Lipschitz in the max-norm of its arguments.
inline double john_functional(double a1, double a2, double a3, double a4) {
  return std::cos(0.5 * (a1 + a2 - a3 - a4)) + std::cos(0.5 * (a1 - a2 + a3 - a4)) +
         std::cos(0.5 * (a1 - a2 - a3 + a4));
}

namespace detail {

inline void require_ordered(const AngleTuple& t, std::size_t k) {
  if (t.size() != k) throw InvalidArgument("angle tuple has the wrong arity");
  if (!t.is_ordered()) throw NotOrdered();
}

/// Five-value sign vector on raw angles; the alternating signs encode the
/// wrap of a_1 past 2*pi. No ordering check.
inline std::array<double, 5> five_values_raw(const double* a) {
  return {john_functional(a[0], a[1], a[2], a[3]), john_functional(a[1], a[2], a[3], a[4]),
          -john_functional(a[2], a[3], a[4], a[0]), john_functional(a[3], a[4], a[0], a[1]),
          -john_functional(a[4], a[0], a[1], a[2])};
}

inline TriState classify_sign_vector(std::span<const double> values, double margin) {
  bool all_pos = true, all_neg = true, any_pos = false, any_neg = false;
  for (double v : values) {
    all_pos = all_pos && v > margin;
    all_neg = all_neg && v < -margin;
    any_pos = any_pos || v > margin;
    any_neg = any_neg || v < -margin;
  }
  if (all_pos || all_neg) return TriState::Yes;
  if (any_pos && any_neg) return TriState::No;
  return TriState::Unknown;
}

/// Solves a dense n x n system in place by Gaussian elimination with partial
/// pivoting. Returns false when a pivot falls below `tiny`.
template <std::size_t N>
bool solve_dense(std::array<std::array<double, N + 1>, N>& aug, std::size_t n, double tiny) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    if (std::abs(aug[piv][col]) < tiny) return false;
    std::swap(aug[piv], aug[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = aug[r][col] / aug[col][col];
      for (std::size_t c = col; c <= n; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) aug[r][n] /= aug[r][r];
  return true;
}

using Lifted = std::array<double, 4>;

/// Minimum of ||sum w_j q_j|| over sum w_j = 1 restricted to the points in
/// `mask`. Returns false when the subset is affinely dependent.
inline bool affine_min_norm(std::span<const Lifted> q, unsigned mask, std::array<double, 5>& w, double& dist) {
  std::array<std::size_t, 5> idx{};
  std::size_t m = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (mask & (1u << i)) idx[m++] = i;
  // KKT system [G 1; 1^T 0] [w; lambda] = [0; 1], right-hand side in column m + 1.
  std::array<std::array<double, 7>, 6> sys{};
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double g = 0.0;
      for (int d = 0; d < 4; ++d) g += q[idx[r]][d] * q[idx[c]][d];
      sys[r][c] = g;
    }
    sys[r][m] = 1.0;
    sys[m][r] = 1.0;
  }
  sys[m][m + 1] = 1.0;
  if (!solve_dense<6>(sys, m + 1, 1e-12)) return false;
  w.fill(0.0);
  Lifted p{};
  for (std::size_t r = 0; r < m; ++r) {
    w[idx[r]] = sys[r][m + 1];
    for (int d = 0; d < 4; ++d) p[d] += w[idx[r]] * q[idx[r]][d];
  }
  dist = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
  return true;
}

}  // namespace detail

/// (cos a, sin a, cos 2a, sin 2a).
inline std::array<double, 4> lifted_point(double alpha) {
  return {std::cos(alpha), std::sin(alpha), std::cos(2.0 * alpha), std::sin(2.0 * alpha)};
}

/// Functional value for an ordered 4-tuple; zero is necessary for the unit
/// circle to be the minimum-area ellipse of the four points.
inline double four_point_john_residual(const AngleTuple& t) {
  detail::require_ordered(t, 4);
  return john_functional(t[0], t[1], t[2], t[3]);
}

/// The five functional values whose common strict sign characterizes
/// five-point John configurations on the unit circle.
inline std::array<double, 5> five_point_values(const AngleTuple& t) {
  detail::require_ordered(t, 5);
  return detail::five_values_raw(t.values().data());
}

/// Yes when all five values share a sign beyond `margin`, No when two values
/// of opposite sign both exceed it, Unknown otherwise.
inline TriState is_john_five(const AngleTuple& t, double margin) {
  if (margin < 0.0) throw InvalidArgument("margin must be non-negative");
  const auto v = five_point_values(t);
  return detail::classify_sign_vector(v, margin);
}

/// Largest cyclic gap a_{i+1} - a_i with a_{k+1} = a_1 + 2*pi.
inline double max_arc_gap(const AngleTuple& t) {
  if (!t.is_ordered()) throw NotOrdered();
  const std::size_t k = t.size();
  double gap = t[0] + kTwoPi - t[k - 1];
  for (std::size_t i = 1; i < k; ++i) gap = std::max(gap, t[i] - t[i - 1]);
  return gap;
}

struct SimplexResult {
  TriState verdict = TriState::Unknown;
  double distance = 0.0;               // from the origin to the lifted hull
  std::array<double, 5> weights{};     // barycentric weights when inside
};

/// Decides whether the origin of R^4 lies in the hull of the lifted points.
/// Exhaustive active-set search over faces (k <= 5, at most 31 faces).
/// "Inside" means within `tolerance` of the hull.
inline SimplexResult simplex_condition_detail(const AngleTuple& t, double margin, double tolerance = kFloatSlack) {
  const std::size_t k = t.size();
  std::array<detail::Lifted, 5> q{};
  for (std::size_t i = 0; i < k; ++i) q[i] = lifted_point(t[i]);
  const std::span<const detail::Lifted> pts(q.data(), k);

  SimplexResult out;
  out.distance = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::array<double, 5> w{};
    double dist = 0.0;
    if (!detail::affine_min_norm(pts, mask, w, dist)) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask & (1u << i)) && w[i] < 0.0) feasible = false;
    if (feasible && dist < out.distance) {
      out.distance = dist;
      out.weights = w;
    }
  }

  if (out.distance > tolerance) {
    out.verdict = out.distance > margin ? TriState::No : TriState::Unknown;
    return out;
  }
  std::array<double, 5> w{};
  double dist = 0.0;
  if (detail::affine_min_norm(pts, (1u << k) - 1, w, dist)) {
    out.weights = w;
    const double smallest = *std::min_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    out.verdict = (smallest >= margin || margin == 0.0) ? TriState::Yes : TriState::Unknown;
  } else {
    // Non-unique representation: only the margin-free claim is made.
    out.verdict = margin == 0.0 ? TriState::Yes : TriState::Unknown;
  }
  return out;
}

inline TriState simplex_condition(const AngleTuple& t, double margin) {
  return simplex_condition_detail(t, margin).verdict;
}

/// det of the 4x4 matrix with columns (cos a_j, sin a_j, cos 2a_j, sin 2a_j).
inline double delta_determinant(const AngleTuple& t) {
  detail::require_ordered(t, 4);
  std::array<std::array<double, 4>, 4> m{};
  for (std::size_t j = 0; j < 4; ++j) {
    const auto l = lifted_point(t[j]);
    for (std::size_t i = 0; i < 4; ++i) m[i][j] = l[i];
  }
  double det = 1.0;
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace transversal
