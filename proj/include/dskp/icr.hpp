#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dskp/dimer.hpp"
#include "dskp/kernel.hpp"
#include "dskp/mobius.hpp"
#include "dskp/random.hpp"
#include "dskp/zigzag.hpp"

namespace dskp {

// Integrable cross-ratio maps: z on Z^2 with face cross-ratios alpha_i/beta_j,
// and Backlund pairs z,w coupled by side cross-ratios alpha_i/gamma and
// beta_j/gamma.

// Face cross-ratio of the quad at (i,j): cro(z_{i,j}, z_{i+1,j}, z_{i+1,j+1}, z_{i,j+1}).
template <ScalarField S>
ProjValue<S> icr_rho(const EdgeLabels<S>& labels, int i, int j) {
  return ProjValue<S>(labels.a(i)) / ProjValue<S>(labels.b(j));
}

// One propagation step in rotated coordinates: given rows j-1 and j (as
// abstract rows; `ucur` is the lattice row index of `cur`), produces row j+1.
template <ScalarField S>
ZRow<S> icr_step(const ZRow<S>& prev, const ZRow<S>& cur, const EdgeLabels<S>& labels, int ucur) {
  ZRow<S> next;
  next.parity = prev.parity;
  next.v.resize(prev.m());
  int u = ucur - 1;  // quads are based two rows below the output
  for (int t = 0; t < prev.m(); ++t) {
    int i = 2 * t + next.parity;
    ProjValue<S> rho = icr_rho(labels, (i + u) / 2, (u - i) / 2);
    next.at(i) = solve_cross_ratio(prev.at(i), cur.at(i + 1), cur.at(i - 1), rho);
  }
  return next;
}

// Dense propagation on a window from the diagonals i+j in {0,1}: dz holds
// z~_n = z_{(n+[n]_2)/2, ([n]_2-n)/2} for n in [n0, n1].
template <ScalarField S>
std::map<std::pair<int, int>, ProjValue<S>> icr_window(const std::map<int, ProjValue<S>>& dz,
                                                       const EdgeLabels<S>& labels, int sum_max) {
  std::map<std::pair<int, int>, ProjValue<S>> z;
  for (const auto& [n, val] : dz) {
    int h = mod(n, 2);
    z[{(n + h) / 2, (h - n) / 2}] = val;
  }
  for (int s = 2; s <= sum_max; ++s) {
    for (auto it = z.begin(); it != z.end(); ++it) {
      auto [i, j] = it->first;
      if (i + j != s - 2) continue;
      auto right = z.find({i + 1, j});
      auto up = z.find({i, j + 1});
      if (right == z.end() || up == z.end()) continue;
      z[{i + 1, j + 1}] =
          solve_cross_ratio(it->second, right->second, up->second, icr_rho(labels, i, j));
    }
  }
  return z;
}

// Explicit Mobius transport of a Backlund partner along the two directions.
template <ScalarField S>
Mobius<S> backlund_mobius(const ProjValue<S>& z1, const ProjValue<S>& z2, const S& label,
                          const S& gamma) {
  // w' = (w (g z1 + (l-g) z2) - l z1 z2) / (w l + g (z1 - z2) - l z1)
  S a = gamma * z1.affine() + (label - gamma) * z2.affine();
  S b = -label * z1.affine() * z2.affine();
  S c = label;
  S d = gamma * (z1.affine() - z2.affine()) - label * z1.affine();
  return Mobius<S>{a, b, c, d};
}

// A Backlund pair restricted to the initial diagonals, in rotated form.
template <ScalarField S>
struct BacklundRows {
  int m = 0;  // closure period (rows are 2m-periodic in the first index)
  EdgeLabels<S> labels;
  ZRow<S> z0, z1, w0, w1;
};

// Exact generator of a closed singular pair: z~_0 = 0, free alpha, w rows
// random, gamma = 1. The remaining data is forced: z~_1 by the alpha side
// condition, beta by the other side condition.
template <ScalarField S>
BacklundRows<S> make_singular_icr_pair(int m, Rng& rng) {
  for (;;) {
    BacklundRows<S> pair;
    pair.m = m;
    pair.labels.gamma = S(1);
    for (int l = 0; l < m; ++l) pair.labels.alpha.push_back(rng.nonzero_scalar<S>());
    pair.z0 = ZRow<S>::constant_row(m, 0, ProjValue<S>(S(0)));
    pair.w0.parity = 0;
    pair.w1.parity = 1;
    for (int l = 0; l < m; ++l) {
      pair.w0.v.push_back(rng.nonzero_value<S>());
      pair.w1.v.push_back(rng.nonzero_value<S>());
    }
    pair.z1.parity = 1;
    pair.z1.v.resize(m);
    bool ok = true;
    std::vector<S> beta(m);
    for (int l = 0; l < m && ok; ++l) {
      // cro(z_{l,-l}, z_{l+1,-l}, w_{l+1,-l}, w_{l,-l}) = alpha_l
      ProjValue<S> z = solve_cross_ratio_slot<S>(
          {ProjValue<S>(S(0)), ProjValue<S>::undefined(), pair.w1.at(2 * l + 1),
           pair.w0.at(2 * l)},
          1, ProjValue<S>(pair.labels.alpha[l]));
      if (!z.is_finite() || z == ProjValue<S>(S(0))) ok = false;
      pair.z1.at(2 * l + 1) = z;
      // beta_{-l-1} = cro(z_{l+1,-l-1}, z_{l+1,-l}, w_{l+1,-l}, w_{l+1,-l-1})
      ProjValue<S> b = cross_ratio(ProjValue<S>(S(0)), z, pair.w1.at(2 * l + 1),
                                   pair.w0.at(2 * l + 2));
      if (!b.is_finite() || b == ProjValue<S>(S(0))) ok = false;
      if (ok) beta[mod(-l - 1, m)] = b.affine();
    }
    if (!ok) continue;
    pair.labels.beta = beta;
    return pair;
  }
}

// Closed Backlund partner of a closed map given by rows (z~_0, z~_1): composes
// the 2m Mobius transports around one period and seeds a fixed point. The
// exact backend refuses irrational fixed points.
template <ScalarField S>
struct ClosedPartnerResult {
  bool ok = false;
  bool irrational = false;
  ZRow<S> w0, w1;
};

template <ScalarField S>
ClosedPartnerResult<S> backlund_closed(const ZRow<S>& z0, const ZRow<S>& z1,
                                       const EdgeLabels<S>& labels) {
  int m = z0.m();
  ClosedPartnerResult<S> res;
  Mobius<S> around = Mobius<S>::identity();
  for (int l = 0; l < m; ++l) {
    // w_{l,-l} -> w_{l+1,-l} -> w_{l+1,-l-1}
    Mobius<S> m1 = backlund_mobius(z0.at(2 * l), z1.at(2 * l + 1), labels.a(l), labels.gamma);
    Mobius<S> m2 = backlund_mobius(z0.at(2 * l + 2), z1.at(2 * l + 1), labels.b(-l - 1),
                                   labels.gamma);
    // m2 maps w_{l+1,-l-1} to w_{l+1,-l}; invert to descend.
    around = m2.inverse().compose(m1).compose(around);
  }
  auto fixed = mobius_fixed_points(around);
  if (fixed.irrational_discriminant) {
    res.irrational = true;
    return res;
  }
  if (fixed.points.empty()) return res;
  ProjValue<S> what = fixed.points[0];
  res.w0.parity = 0;
  res.w0.v.resize(m);
  res.w1.parity = 1;
  res.w1.v.resize(m);
  ProjValue<S> w = what;
  for (int l = 0; l < m; ++l) {
    res.w0.at(2 * l) = w;
    Mobius<S> m1 = backlund_mobius(z0.at(2 * l), z1.at(2 * l + 1), labels.a(l), labels.gamma);
    ProjValue<S> wr = m1.apply(w);
    res.w1.at(2 * l + 1) = wr;
    Mobius<S> m2 = backlund_mobius(z0.at(2 * l + 2), z1.at(2 * l + 1), labels.b(-l - 1),
                                   labels.gamma);
    w = m2.inverse().apply(wr);
  }
  res.ok = (w == what);  // closure around the period
  return res;
}

// Extends a Backlund partner over a window of z values from a single seed.
// Each unknown neighbour is solved from a side condition; when a cell is
// reachable along several routes the values must agree (multi-dimensional
// consistency), which is checked rather than assumed.
template <ScalarField S>
struct BacklundExtension {
  std::map<std::pair<int, int>, ProjValue<S>> w;
  bool consistent = true;
};

template <ScalarField S>
BacklundExtension<S> backlund_extend_window(
    const std::map<std::pair<int, int>, ProjValue<S>>& z, const EdgeLabels<S>& labels,
    std::pair<int, int> seed_at, const ProjValue<S>& seed) {
  BacklundExtension<S> ext;
  ProjValue<S> gamma(labels.gamma);
  ext.w[seed_at] = seed;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [ij, wv] : ext.w) {
      auto [i, j] = ij;
      auto offer = [&](int ni, int nj, const ProjValue<S>& val) {
        auto it = ext.w.find({ni, nj});
        if (it == ext.w.end()) {
          ext.w[{ni, nj}] = val;
          progress = true;
        } else if (!(it->second == val)) {
          ext.consistent = false;
        }
      };
      // cro(z_{i,j}, z_{i+1,j}, w_{i+1,j}, w_{i,j}) = alpha_i / gamma
      if (z.count({i, j}) && z.count({i + 1, j}))
        offer(i + 1, j,
              solve_cross_ratio(z.at({i, j}), z.at({i + 1, j}), wv,
                                ProjValue<S>(labels.a(i)) / gamma));
      if (z.count({i - 1, j}) && z.count({i, j}))
        offer(i - 1, j,
              solve_cross_ratio_slot<S>({z.at({i - 1, j}), z.at({i, j}), wv,
                                         ProjValue<S>::undefined()},
                                        3, ProjValue<S>(labels.a(i - 1)) / gamma));
      // cro(z_{i,j}, z_{i,j+1}, w_{i,j+1}, w_{i,j}) = beta_j / gamma
      if (z.count({i, j}) && z.count({i, j + 1}))
        offer(i, j + 1,
              solve_cross_ratio(z.at({i, j}), z.at({i, j + 1}), wv,
                                ProjValue<S>(labels.b(j)) / gamma));
      if (z.count({i, j - 1}) && z.count({i, j}))
        offer(i, j - 1,
              solve_cross_ratio_slot<S>({z.at({i, j - 1}), z.at({i, j}), wv,
                                         ProjValue<S>::undefined()},
                                        3, ProjValue<S>(labels.b(j - 1)) / gamma));
      if (progress) break;
    }
  }
  return ext;
}

// Side cross-ratio checks of a pair on the initial diagonals.
template <ScalarField S>
bool backlund_side_conditions_hold(const BacklundRows<S>& pair) {
  ProjValue<S> gamma(pair.labels.gamma);
  for (int l = 0; l < pair.m; ++l) {
    ProjValue<S> c1 = cross_ratio(pair.z0.at(2 * l), pair.z1.at(2 * l + 1),
                                  pair.w1.at(2 * l + 1), pair.w0.at(2 * l));
    if (!(c1 == ProjValue<S>(pair.labels.a(l)) / gamma)) return false;
    ProjValue<S> c2 = cross_ratio(pair.z0.at(2 * l + 2), pair.z1.at(2 * l + 1),
                                  pair.w1.at(2 * l + 1), pair.w0.at(2 * l + 2));
    if (!(c2 == ProjValue<S>(pair.labels.b(-l - 1)) / gamma)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Explicit solution: the weight grid interleaves the pair's rotated rows by
// the diagonal class [i-j]_4, and the solution value is the dimer ratio of the
// diamond of size i+j-1 with the appropriate center.

template <ScalarField S>
ProjValue<S> backlund_weight(const BacklundRows<S>& pair, int i, int j) {
  int n = i + j;
  int h = mod(n, 2);
  int r = mod(i - j, 4);
  const ZRow<S>& row = (r == 0 || r == 3) ? (h == 0 ? pair.z0 : pair.z1)
                                          : (h == 0 ? pair.w0 : pair.w1);
  return row.at(n);
}

// Same weight pattern addressed in rotated coordinates relative to a diamond
// center with coordinate sums cu = ci+cj and cd = ci-cj.
template <ScalarField S>
ProjValue<S> backlund_weight(const BacklundRows<S>& pair, int x, int y, int cu, int cd) {
  int n = y + cu;
  int h = mod(n, 2);
  int r = mod(x + cd, 4);
  const ZRow<S>& row = (r == 0 || r == 3) ? (h == 0 ? pair.z0 : pair.z1)
                                          : (h == 0 ? pair.w0 : pair.w1);
  return row.at(n);
}

// Evaluate the explicit solution on a weighted diamond. The weighted ratio of
// partition functions needs nonzero weights (inverse weights appear); the
// kernel expression covers singular data with vanishing weights.
template <ScalarField S>
ProjValue<S> explicit_value(const AztecDiamond& a, const FaceWeights<S>& w) {
  bool nonzero = true;
  ProjValue<S> zero(S(0));
  for (const auto& v : w.w)
    if (!v.is_finite() || v == zero) nonzero = false;
  if (nonzero) return ratio_y(a, w);
  return ratio_via_kernel(a, w);
}

// z_{i,j} (in unrotated indices) via the dimer ratio; valid for i+j >= 1.
template <ScalarField S>
ProjValue<S> icr_explicit_z(const BacklundRows<S>& pair, int i, int j) {
  AztecDiamond a(j, i - 2 * j, i + j - 1);
  auto w = FaceWeights<S>::from_function(
      a, [&](int fi, int fj) { return backlund_weight(pair, fi, fj); });
  return explicit_value(a, w);
}

template <ScalarField S>
ProjValue<S> icr_explicit_w(const BacklundRows<S>& pair, int i, int j) {
  AztecDiamond a(j + 1, i - 2 * j - 1, i + j - 1);
  auto w = FaceWeights<S>::from_function(
      a, [&](int fi, int fj) { return backlund_weight(pair, fi, fj); });
  return explicit_value(a, w);
}

// ---------------------------------------------------------------------------
// Dual map: integral of the dual 1-form with increments alpha_i/(z-z') and
// beta_j/(z-z'). On a closed map the integral around one period is the
// additive monodromy.

template <ScalarField S>
struct DualMapResult {
  bool closed = true;       // discrete closedness of the 1-form on every quad
  bool three_legged = true; // three-point identity on every quad
  std::map<std::pair<int, int>, ProjValue<S>> zstar;
};

template <ScalarField S>
DualMapResult<S> dual_map(const std::map<std::pair<int, int>, ProjValue<S>>& z,
                          const EdgeLabels<S>& labels, std::pair<int, int> base) {
  DualMapResult<S> res;
  auto dstar_x = [&](int i, int j) {
    return ProjValue<S>(labels.a(i)) / (z.at({i, j}) - z.at({i + 1, j}));
  };
  auto dstar_y = [&](int i, int j) {
    return ProjValue<S>(labels.b(j)) / (z.at({i, j}) - z.at({i, j + 1}));
  };
  // Closedness and the three-legged identity on every full quad.
  for (const auto& [ij, val] : z) {
    auto [i, j] = ij;
    if (!z.count({i + 1, j}) || !z.count({i, j + 1}) || !z.count({i + 1, j + 1})) continue;
    ProjValue<S> across = dstar_x(i, j) + dstar_y(i + 1, j);
    ProjValue<S> up = dstar_y(i, j) + dstar_x(i, j + 1);
    if (!(across == up)) res.closed = false;
    ProjValue<S> lhs = -dstar_x(i, j) + dstar_y(i, j);
    ProjValue<S> rhs = (ProjValue<S>(labels.a(i)) - ProjValue<S>(labels.b(j))) /
                       (z.at({i + 1, j + 1}) - z.at({i, j}));
    if (!(lhs == rhs)) res.three_legged = false;
  }
  // Integrate along a spanning order (row-major from the base point).
  res.zstar[base] = ProjValue<S>(S(0));
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [ij, val] : res.zstar) {
      auto [i, j] = ij;
      auto relax = [&](int ni, int nj, const ProjValue<S>& inc) {
        if (z.count({ni, nj}) && !res.zstar.count({ni, nj})) {
          res.zstar[{ni, nj}] = val + inc;
          progress = true;
        }
      };
      if (z.count({i + 1, j})) relax(i + 1, j, dstar_x(i, j));
      if (z.count({i, j + 1})) relax(i, j + 1, dstar_y(i, j));
      if (z.count({i - 1, j})) relax(i - 1, j, -dstar_x(i - 1, j));
      if (z.count({i, j - 1})) relax(i, j - 1, -dstar_y(i, j - 1));
      if (progress) break;
    }
  }
  return res;
}

// Additive monodromy of the dual map of a closed map, integrated along the
// zigzag path inside the two initial rows: z*_{(i,j)} - z*_{(i+m,j-m)}.
template <ScalarField S>
ProjValue<S> dual_monodromy(const ZRow<S>& z0, const ZRow<S>& z1, const EdgeLabels<S>& labels) {
  int m = z0.m();
  ProjValue<S> total(S(0));
  for (int l = 0; l < m; ++l) {
    ProjValue<S> za = z0.at(2 * l), zmid = z1.at(2 * l + 1), zb = z0.at(2 * l + 2);
    total = total + ProjValue<S>(labels.a(l)) / (zmid - za) -
            ProjValue<S>(labels.b(-l - 1)) / (zmid - zb);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Singularity checker: closed map with z~_0 = 0 propagated 2m-2 steps. The
// final row must be constant, with value given by two closed forms.

template <ScalarField S>
struct IcrSingularReport {
  bool completed = false;       // no unexpected undefined before the final row
  int first_undefined_row = -1; // diagnostics for early breakdown
  bool final_constant = false;
  ProjValue<S> final_value;
  ProjValue<S> label_sum_form;  // sum(alpha-beta) / weighted inverse sum
  ProjValue<S> monodromy_form;  // sum(alpha-beta) / M[z*]
  bool forms_match = false;
};

template <ScalarField S>
IcrSingularReport<S> check_icr_singularity(const ZRow<S>& z1, const EdgeLabels<S>& labels) {
  int m = z1.m();
  IcrSingularReport<S> rep;
  ZRow<S> prev = ZRow<S>::constant_row(m, 0, ProjValue<S>(S(0)));
  ZRow<S> cur = z1;
  for (int row = 2; row <= 2 * m - 1; ++row) {
    ZRow<S> next = icr_step(prev, cur, labels, row - 1);
    if (next.any_undefined() && row < 2 * m - 1) {
      rep.first_undefined_row = row;
      return rep;
    }
    prev = cur;
    cur = next;
  }
  rep.completed = true;
  rep.final_constant = cur.constant();
  rep.final_value = cur.v[0];

  ProjValue<S> num(S(0)), den(S(0));
  for (int l = 0; l < m; ++l) {
    num = num + ProjValue<S>(labels.a(l)) - ProjValue<S>(labels.b(l));
    den = den + (ProjValue<S>(labels.a(l)) - ProjValue<S>(labels.b(-l - 1))) / z1.at(2 * l + 1);
  }
  rep.label_sum_form = num / den;
  ZRow<S> z0 = ZRow<S>::constant_row(m, 0, ProjValue<S>(S(0)));
  rep.monodromy_form = num / dual_monodromy(z0, z1, labels);
  rep.forms_match = rep.final_constant && rep.final_value == rep.label_sum_form &&
                    rep.final_value == rep.monodromy_form;
  return rep;
}

// ---------------------------------------------------------------------------
// Cylinder kernel for the singular pair: quotient of the size-(2m-3) diamond
// used for w~_{2m-2,2m-2} by the closure period. The kernel of the quotient
// operator has dimension exactly m, spanned by the zero-column indicators and
// one weighted vector.

template <ScalarField S>
struct CylinderKernelReport {
  int nullity = 0;
  bool zero_column_vectors_in_kernel = false;
  bool weighted_vector_in_kernel = false;
};

template <ScalarField S>
CylinderKernelReport<S> check_cylinder_kernel(const BacklundRows<S>& pair) {
  int m = pair.m;
  int size = 2 * m - 3;
  // Center of the diamond computing w_{2m-2,0} = w~_{2m-2,2m-2}.
  int ci = 1, cj = 2 * m - 3;
  int cu = ci + cj, cd = ci - cj;

  auto weight_at = [&](int x, int ymod) { return backlund_weight(pair, x, ymod, cu, cd); };
  auto cy = cylinder_operator<S>(size, m, weight_at);

  CylinderKernelReport<S> rep;
  auto basis = cylinder_kernel(cy);
  rep.nullity = static_cast<int>(basis.size());

  auto in_kernel = [&](const std::vector<S>& v) {
    std::size_t nb = cy.blacks.size();
    for (std::size_t c = 0; c < 2 * nb; ++c) {
      S acc(0);
      for (std::size_t f = 0; f < cy.faces.size(); ++f) acc += cy.dbar(f, c) * v[f];
      if (!acc.is_zero()) return false;
    }
    return true;
  };

  // Indicator vectors of the zero columns.
  rep.zero_column_vectors_in_kernel = true;
  int zero_columns = 0;
  for (int x = -size; x <= size; ++x) {
    int r = mod(x + cd, 4);
    int n_parity = mod(x + cu, 2);
    if (!((r == 0 || r == 3) && n_parity == 0)) continue;
    ++zero_columns;
    std::vector<S> v(cy.faces.size(), S(0));
    for (std::size_t f = 0; f < cy.faces.size(); ++f)
      if (cy.faces[f].first == x) v[f] = S(1);
    if (!in_kernel(v)) rep.zero_column_vectors_in_kernel = false;
  }
  if (zero_columns != m - 1) rep.zero_column_vectors_in_kernel = false;

  // The weighted vector with entries tied to the face weights.
  std::vector<S> v(cy.faces.size(), S(0));
  for (std::size_t f = 0; f < cy.faces.size(); ++f) {
    auto [x, ymod] = cy.faces[f];
    int r = mod(x + cd, 4);
    int n = ymod + cu;
    bool z_type = (r == 0 || r == 3);
    if (mod(n, 2) == 1) {
      int l = mod((n - 1) / 2, m);
      S coeff = pair.labels.a(l) - pair.labels.b(-l - 1);
      const ZRow<S>& row = z_type ? pair.z1 : pair.w1;
      v[f] = coeff / row.at(n).affine();
    } else {
      v[f] = S(-1) / pair.w0.at(n).affine();
    }
  }
  rep.weighted_vector_in_kernel = in_kernel(v);
  return rep;
}

}  // namespace dskp
