#pragma once

#include <optional>
#include <vector>

#include "dskp/proj.hpp"

namespace dskp {

// 2x2 matrix acting on CP^1 by z -> (az+b)/(cz+d).
template <ScalarField S>
struct Mobius {
  S a{1}, b{0}, c{0}, d{1};

  static Mobius identity() { return {}; }

  ProjValue<S> apply(const ProjValue<S>& z) const {
    if (z.is_undefined()) return ProjValue<S>::undefined();
    return ProjValue<S>(a * z.num() + b * z.den(), c * z.num() + d * z.den());
  }

  // this after other: (this*other)(z) = this(other(z)).
  Mobius compose(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  // Projective inverse (adjugate); valid when the determinant is nonzero.
  Mobius inverse() const { return {d, -b, -c, a}; }

  S determinant() const { return a * d - b * c; }
  bool is_degenerate() const { return determinant().is_zero(); }
};

template <ScalarField S>
struct FixedPointResult {
  bool every_point_fixed = false;       // scalar multiple of the identity
  bool irrational_discriminant = false; // exact backend only: no root in Q(i)
  std::vector<ProjValue<S>> points;
};

// Fixed points of a Mobius transform: roots of c z^2 + (d-a) z - b = 0 in
// homogeneous form. The exact backend reports failure when the discriminant
// has no square root in Q(i); the float backend always produces roots.
template <ScalarField S>
FixedPointResult<S> mobius_fixed_points(const Mobius<S>& m) {
  FixedPointResult<S> res;
  S t = m.d - m.a;
  if (m.c.is_zero() && t.is_zero() && m.b.is_zero()) {
    res.every_point_fixed = true;
    return res;
  }
  if (m.c.is_zero()) {
    res.points.push_back(ProjValue<S>::infinity());
    if (!t.is_zero()) {
      res.points.push_back(ProjValue<S>(m.b, t));
    } else {
      res.points.push_back(ProjValue<S>::infinity());  // parabolic, double root
    }
    return res;
  }
  S disc = t * t + S(4) * m.b * m.c;
  auto root = disc.sqrt();
  if (!root) {
    res.irrational_discriminant = true;
    return res;
  }
  S two_c = S(2) * m.c;
  res.points.push_back(ProjValue<S>(-t + *root, two_c));
  res.points.push_back(ProjValue<S>(-t - *root, two_c));
  return res;
}

}  // namespace dskp
