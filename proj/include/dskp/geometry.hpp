#pragma once

#include "dskp/proj.hpp"

namespace dskp {

// Planar constructions on CP^1 values, written with complex conjugation so
// that every output of the exact backend stays in Q(i). Radii are never taken:
// circles are handled through centers, member points and squared distances.

template <ScalarField S>
ProjValue<S> midpoint(const ProjValue<S>& a, const ProjValue<S>& b) {
  return (a + b) / ProjValue<S>(S(2));
}

// |a-b|^2 as a value (real and nonnegative for finite inputs).
template <ScalarField S>
ProjValue<S> sq_dist(const ProjValue<S>& a, const ProjValue<S>& b) {
  ProjValue<S> d = a - b;
  return d * d.conj();
}

// Reflection of z across the line through a and b.
template <ScalarField S>
ProjValue<S> reflect_line(const ProjValue<S>& a, const ProjValue<S>& b, const ProjValue<S>& z) {
  ProjValue<S> dir = b - a;
  if (dir.is_undefined() || a.is_undefined() || z.is_undefined() || (dir == ProjValue<S>(S(0))))
    return ProjValue<S>::undefined();
  return a + dir * (z - a).conj() / dir.conj();
}

// Reflection of z across the perpendicular bisector of [a, b]; swaps a and b.
template <ScalarField S>
ProjValue<S> reflect_bisector(const ProjValue<S>& a, const ProjValue<S>& b,
                              const ProjValue<S>& z) {
  ProjValue<S> dir = b - a;
  if (dir.is_undefined() || z.is_undefined() || (dir == ProjValue<S>(S(0))))
    return ProjValue<S>::undefined();
  ProjValue<S> mid = midpoint(a, b);
  return mid - dir * (z - mid).conj() / dir.conj();
}

// Center of the circle through three points; undefined for collinear input.
template <ScalarField S>
ProjValue<S> circumcenter(const ProjValue<S>& p1, const ProjValue<S>& p2,
                          const ProjValue<S>& p3) {
  if (p1.is_undefined() || p2.is_undefined() || p3.is_undefined())
    return ProjValue<S>::undefined();
  ProjValue<S> n1 = p1 * p1.conj(), n2 = p2 * p2.conj(), n3 = p3 * p3.conj();
  ProjValue<S> num = n1 * (p2.conj() - p3.conj()) + n2 * (p3.conj() - p1.conj()) +
                     n3 * (p1.conj() - p2.conj());
  ProjValue<S> den = p1 * (p2.conj() - p3.conj()) + p2 * (p3.conj() - p1.conj()) +
                     p3 * (p1.conj() - p2.conj());
  return num / den;
}

// The second intersection point of two circles that share the point z: the
// reflection of z across the line joining the centers.
template <ScalarField S>
ProjValue<S> other_intersection(const ProjValue<S>& center1, const ProjValue<S>& center2,
                                const ProjValue<S>& shared) {
  return reflect_line(center1, center2, shared);
}

template <ScalarField S>
bool is_real_value(const ProjValue<S>& v) {
  if (v.is_infinite()) return true;  // real projective line contains infinity
  if (!v.is_finite()) return false;
  return v.affine().is_real();
}

// Two circles given by center + squared radius meet orthogonally iff the
// squared center distance equals the sum of the squared radii.
template <ScalarField S>
bool circles_orthogonal(const ProjValue<S>& c1, const ProjValue<S>& r1sq, const ProjValue<S>& c2,
                        const ProjValue<S>& r2sq) {
  return sq_dist(c1, c2) == r1sq + r2sq;
}

// Rational point on the unit circle: t -> ((1-t^2) + 2t i) / (1+t^2).
inline GaussianRational unit_circle_point(const mpq_class& t) {
  mpq_class den = 1 + t * t;
  return GaussianRational(mpq_class((1 - t * t) / den), mpq_class(2 * t / den));
}

}  // namespace dskp
