#pragma once

#include <stdexcept>
#include <vector>

#include "dskp/lattice.hpp"
#include "dskp/proj.hpp"

namespace dskp {

// Closed row of values indexed by all integers with period m.
template <ScalarField S>
struct CyclicRow {
  std::vector<ProjValue<S>> v;

  int period() const { return static_cast<int>(v.size()); }
  const ProjValue<S>& at(int i) const { return v[mod(i, period())]; }
  ProjValue<S>& at(int i) { return v[mod(i, period())]; }

  bool constant() const {
    for (const auto& x : v)
      if (x.is_undefined() || !(x == v[0])) return false;
    return true;
  }
  bool any_undefined() const {
    for (const auto& x : v)
      if (x.is_undefined()) return true;
    return false;
  }
};

// Row j of a rotated lattice map: values z~_{i,j} for i of fixed parity
// ([i+j]_2 = 0), closed with period 2m in i. Entry t holds i = 2t + parity.
template <ScalarField S>
struct ZRow {
  int parity = 0;
  std::vector<ProjValue<S>> v;

  int m() const { return static_cast<int>(v.size()); }
  const ProjValue<S>& at(int i) const {
    if (mod(i, 2) != parity) throw std::invalid_argument("zrow parity mismatch");
    return v[mod((i - parity) / 2, m())];
  }
  ProjValue<S>& at(int i) {
    if (mod(i, 2) != parity) throw std::invalid_argument("zrow parity mismatch");
    return v[mod((i - parity) / 2, m())];
  }

  static ZRow constant_row(int m, int parity, const ProjValue<S>& value) {
    ZRow r;
    r.parity = parity;
    r.v.assign(m, value);
    return r;
  }

  bool constant() const {
    for (const auto& x : v)
      if (x.is_undefined() || !(x == v[0])) return false;
    return true;
  }
  bool any_undefined() const {
    for (const auto& x : v)
      if (x.is_undefined()) return true;
    return false;
  }
};

// Edge labels alpha, beta: Z -> nonzero scalars with period m, plus gamma.
template <ScalarField S>
struct EdgeLabels {
  std::vector<S> alpha, beta;
  S gamma{1};

  int period() const { return static_cast<int>(alpha.size()); }
  const S& a(int i) const { return alpha[mod(i, period())]; }
  const S& b(int j) const { return beta[mod(j, static_cast<int>(beta.size()))]; }

  static EdgeLabels holomorphic(int m) {
    EdgeLabels l;
    l.alpha.assign(m, S(-1));
    l.beta.assign(m, S(1));
    l.gamma = S(1);
    return l;
  }
};

}  // namespace dskp
