#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dskp/scalar.hpp"

namespace dskp {

enum class ProjState { finite, infinity, undefined };

// A point of CP^1 as a homogeneous pair [p : q].
//   finite    <=> q != 0
//   infinity  <=> q == 0, p != 0
//   undefined <=> p == q == 0
// Undefined is an ordinary value: arithmetic propagates it and equality
// rejects it, so singularities can be observed rather than thrown.
template <ScalarField S>
class ProjValue {
 public:
  ProjValue() : p_(S(0)), q_(S(1)) {}
  ProjValue(const S& v) : p_(v), q_(S(1)) {}  // NOLINT(runtime/explicit)
  ProjValue(const S& p, const S& q) : p_(p), q_(q) { canonicalize(); }
  static ProjValue infinity() { return ProjValue(S(1), S(0)); }
  static ProjValue undefined() { return ProjValue(S(0), S(0)); }

  const S& num() const { return p_; }
  const S& den() const { return q_; }

  ProjState state() const {
    if (!q_.is_zero()) return ProjState::finite;
    if (!p_.is_zero()) return ProjState::infinity;
    return ProjState::undefined;
  }
  bool is_finite() const { return state() == ProjState::finite; }
  bool is_infinite() const { return state() == ProjState::infinity; }
  bool is_undefined() const { return state() == ProjState::undefined; }

  // Finite value in the affine chart; only valid when is_finite().
  S affine() const { return p_ / q_; }

  friend ProjValue operator+(const ProjValue& a, const ProjValue& b) {
    return ProjValue(a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_);
  }
  friend ProjValue operator-(const ProjValue& a, const ProjValue& b) {
    return ProjValue(a.p_ * b.q_ - b.p_ * a.q_, a.q_ * b.q_);
  }
  friend ProjValue operator*(const ProjValue& a, const ProjValue& b) {
    return ProjValue(a.p_ * b.p_, a.q_ * b.q_);
  }
  friend ProjValue operator/(const ProjValue& a, const ProjValue& b) {
    return ProjValue(a.p_ * b.q_, a.q_ * b.p_);
  }
  ProjValue operator-() const { return ProjValue(-p_, q_); }
  ProjValue inv() const { return ProjValue(q_, p_); }
  ProjValue conj() const { return ProjValue(p_.conj(), q_.conj()); }

  // Projective equality by cross-multiplication; undefined equals nothing.
  friend bool operator==(const ProjValue& a, const ProjValue& b) {
    if (a.is_undefined() || b.is_undefined()) return false;
    return a.p_ * b.q_ == b.p_ * a.q_;
  }
  friend bool operator!=(const ProjValue& a, const ProjValue& b) { return !(a == b); }

  std::string str() const {
    switch (state()) {
      case ProjState::infinity: return "inf";
      case ProjState::undefined: return "nan";
      default: return affine().str();
    }
  }

  static std::optional<ProjValue> parse(const std::string& s) {
    if (s == "inf") return infinity();
    if (s == "nan") return undefined();
    auto v = S::parse(s);
    if (!v) return std::nullopt;
    return ProjValue(*v);
  }

 private:
  void canonicalize() {
    if constexpr (ScalarTraits<S>::exact) {
      if (!q_.is_zero()) {
        p_ = p_ / q_;
        q_ = S(1);
      } else if (!p_.is_zero()) {
        p_ = S(1);
      }
    } else {
      // Keep magnitudes near 1 so tolerance comparisons stay meaningful.
      double np = std::abs(p_.to_complex()), nq = std::abs(q_.to_complex());
      if (p_.is_zero() && q_.is_zero()) {
        p_ = S(0);
        q_ = S(0);
      } else if (nq >= np) {
        p_ = p_ / q_;
        q_ = S(1);
      } else {
        q_ = q_ / p_;
        p_ = S(1);
      }
    }
  }

  S p_, q_;
};

// p_a*q_b - p_b*q_a: the numerator of a-b over the common denominator.
template <ScalarField S>
S proj_diff_num(const ProjValue<S>& a, const ProjValue<S>& b) {
  return a.num() * b.den() - b.num() * a.den();
}

// Cross-ratio (a-b)(c-d) / ((b-c)(d-a)) with the common denominator Π q
// cancelled, so a single infinite argument behaves correctly.
template <ScalarField S>
ProjValue<S> cross_ratio(const ProjValue<S>& a, const ProjValue<S>& b, const ProjValue<S>& c,
                         const ProjValue<S>& d) {
  if (a.is_undefined() || b.is_undefined() || c.is_undefined() || d.is_undefined())
    return ProjValue<S>::undefined();
  return ProjValue<S>(proj_diff_num(a, b) * proj_diff_num(c, d),
                      proj_diff_num(b, c) * proj_diff_num(d, a));
}

// Six-point multi-ratio (x1-x2)(x3-x4)(x5-x6) / ((x2-x3)(x4-x5)(x6-x1)),
// with inputs ordered (x_{-e3}, x_{+e2}, x_{-e1}, x_{+e3}, x_{-e2}, x_{+e1})
// around an octahedron. The recurrence is the relation multi_ratio6 = -1.
template <ScalarField S>
ProjValue<S> multi_ratio6(const std::array<ProjValue<S>, 6>& x) {
  for (const auto& v : x)
    if (v.is_undefined()) return ProjValue<S>::undefined();
  S num = proj_diff_num(x[0], x[1]) * proj_diff_num(x[2], x[3]) * proj_diff_num(x[4], x[5]);
  S den = proj_diff_num(x[1], x[2]) * proj_diff_num(x[3], x[4]) * proj_diff_num(x[5], x[0]);
  return ProjValue<S>(num, den);
}

// Solves multi_ratio6 = -1 for the value in slot `unknown` (0-based), given
// the five other slots. The relation is linear-fractional in each variable;
// a degenerate linear equation yields undefined.
template <ScalarField S>
ProjValue<S> solve_multi_ratio6(std::array<ProjValue<S>, 6> x, std::size_t unknown) {
  for (std::size_t s = 0; s < 6; ++s)
    if (s != unknown && x[s].is_undefined()) return ProjValue<S>::undefined();

  // Numerator factor pairs (0,1)(2,3)(4,5), denominator pairs (1,2)(3,4)(5,0).
  static constexpr int num_pairs[3][2] = {{0, 1}, {2, 3}, {4, 5}};
  static constexpr int den_pairs[3][2] = {{1, 2}, {3, 4}, {5, 0}};

  // factor (a, X) = p_a q - p q_a; factor (X, b) = p q_b - p_b q.
  auto linear_coeffs = [&](int first, int second, S& cp, S& cq) {
    if (static_cast<std::size_t>(first) == unknown) {
      cp = x[second].den();
      cq = -x[second].num();
    } else {
      cp = -x[first].den();
      cq = x[first].num();
    }
  };

  S c_num(1), c_den(1);
  S np(0), nq(0), dp(0), dq(0);
  for (auto& pr : num_pairs) {
    if (static_cast<std::size_t>(pr[0]) == unknown || static_cast<std::size_t>(pr[1]) == unknown) {
      linear_coeffs(pr[0], pr[1], np, nq);
    } else {
      c_num = c_num * proj_diff_num(x[pr[0]], x[pr[1]]);
    }
  }
  for (auto& pr : den_pairs) {
    if (static_cast<std::size_t>(pr[0]) == unknown || static_cast<std::size_t>(pr[1]) == unknown) {
      linear_coeffs(pr[0], pr[1], dp, dq);
    } else {
      c_den = c_den * proj_diff_num(x[pr[0]], x[pr[1]]);
    }
  }

  // num + den = 0  =>  (c_num*np + c_den*dp) p + (c_num*nq + c_den*dq) q = 0.
  S cp = c_num * np + c_den * dp;
  S cq = c_num * nq + c_den * dq;
  if (cp.is_zero() && cq.is_zero()) return ProjValue<S>::undefined();
  return ProjValue<S>(-cq, cp);
}

// Solves the octahedron relation for the apex (+e3 slot) given the bottom
// (-e3) and the four equatorial values.
template <ScalarField S>
ProjValue<S> solve_octahedron(const ProjValue<S>& bottom, const ProjValue<S>& plus_e1,
                              const ProjValue<S>& minus_e1, const ProjValue<S>& plus_e2,
                              const ProjValue<S>& minus_e2) {
  std::array<ProjValue<S>, 6> x = {bottom, plus_e2, minus_e1, ProjValue<S>::undefined(), minus_e2,
                                   plus_e1};
  return solve_multi_ratio6(x, 3);
}

// Solves cross_ratio = rho for the value in slot `unknown` (0-based) of
// (x0, x1, x2, x3); the relation is linear-fractional in each slot.
template <ScalarField S>
ProjValue<S> solve_cross_ratio_slot(std::array<ProjValue<S>, 4> x, std::size_t unknown,
                                    const ProjValue<S>& rho) {
  if (rho.is_undefined()) return ProjValue<S>::undefined();
  for (std::size_t s = 0; s < 4; ++s)
    if (s != unknown && x[s].is_undefined()) return ProjValue<S>::undefined();

  static constexpr int num_pairs[2][2] = {{0, 1}, {2, 3}};
  static constexpr int den_pairs[2][2] = {{1, 2}, {3, 0}};
  auto linear_coeffs = [&](int first, int second, S& cp, S& cq) {
    if (static_cast<std::size_t>(first) == unknown) {
      cp = x[second].den();
      cq = -x[second].num();
    } else {
      cp = -x[first].den();
      cq = x[first].num();
    }
  };
  S c_num(1), c_den(1), np(0), nq(0), dp(0), dq(0);
  for (auto& pr : num_pairs) {
    if (static_cast<std::size_t>(pr[0]) == unknown || static_cast<std::size_t>(pr[1]) == unknown)
      linear_coeffs(pr[0], pr[1], np, nq);
    else
      c_num = c_num * proj_diff_num(x[pr[0]], x[pr[1]]);
  }
  for (auto& pr : den_pairs) {
    if (static_cast<std::size_t>(pr[0]) == unknown || static_cast<std::size_t>(pr[1]) == unknown)
      linear_coeffs(pr[0], pr[1], dp, dq);
    else
      c_den = c_den * proj_diff_num(x[pr[0]], x[pr[1]]);
  }
  // num * rho_q - rho_p * den = 0.
  S cp = rho.den() * c_num * np - rho.num() * c_den * dp;
  S cq = rho.den() * c_num * nq - rho.num() * c_den * dq;
  if (cp.is_zero() && cq.is_zero()) return ProjValue<S>::undefined();
  return ProjValue<S>(-cq, cp);
}

// Solves cross_ratio(a, b, X, d) = rho for X.
template <ScalarField S>
ProjValue<S> solve_cross_ratio(const ProjValue<S>& a, const ProjValue<S>& b, const ProjValue<S>& d,
                               const ProjValue<S>& rho) {
  return solve_cross_ratio_slot<S>({a, b, ProjValue<S>::undefined(), d}, 2, rho);
}

// ((1/n) sum v_i^{-1})^{-1} with projective arithmetic.
template <ScalarField S>
ProjValue<S> harmonic_mean(const std::vector<ProjValue<S>>& vs) {
  if (vs.empty()) return ProjValue<S>::undefined();
  ProjValue<S> sum(S(0));
  for (const auto& v : vs) sum = sum + v.inv();
  return ProjValue<S>(S(static_cast<long>(vs.size()))) / sum;
}

}  // namespace dskp
