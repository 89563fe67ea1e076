#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dskp/aztec.hpp"
#include "dskp/config.hpp"

namespace dskp {

// Face weights for a diamond, by face index.
template <ScalarField S>
struct FaceWeights {
  std::vector<ProjValue<S>> w;

  static FaceWeights from_initial_data(const AztecDiamond& a, const InitialData<S>& init) {
    FaceWeights fw;
    std::vector<std::pair<int, int>> missing;
    for (auto [i, j] : a.faces()) {
      auto v = init.get(i, j);
      if (!v) missing.emplace_back(i, j);
      else fw.w.push_back(*v);
    }
    if (!missing.empty()) throw MissingCellsError(std::move(missing));
    return fw;
  }

  static FaceWeights from_function(const AztecDiamond& a,
                                   const std::function<ProjValue<S>(int, int)>& f) {
    FaceWeights fw;
    for (auto [i, j] : a.faces()) fw.w.push_back(f(i, j));
    return fw;
  }

  bool all_finite() const {
    for (const auto& v : w)
      if (!v.is_finite()) return false;
    return true;
  }

  FaceWeights inverted() const {
    FaceWeights out;
    for (const auto& v : w) out.w.push_back(v.inv());
    return out;
  }

  ProjValue<S> product() const {
    ProjValue<S> p(S(1));
    for (const auto& v : w) p = p * v;
    return p;
  }
};

inline std::uint64_t count_matchings(const AztecDiamond& a) {
  int nv = static_cast<int>(a.vertices().size());
  std::vector<char> matched(nv, 0);
  std::uint64_t count = 0;
  std::function<void(int)> rec = [&](int from) {
    int v = from;
    while (v < nv && matched[v]) ++v;
    if (v == nv) {
      ++count;
      return;
    }
    matched[v] = 1;
    for (int e : a.incident_edges()[v]) {
      const auto& ed = a.edges()[e];
      int other = ed.white == v ? ed.black : ed.white;
      if (matched[other]) continue;
      matched[other] = 1;
      rec(v + 1);
      matched[other] = 0;
    }
    matched[v] = 0;
  };
  rec(0);
  return count;
}

// Z = sum over oriented dimer configurations of prod phi_e a_{f(e)}, where
// f(e) is the face right of the directed edge. The two orientations of a
// matched edge sum to phi_{(w,b)} (a_right - a_left), which is what the
// recursion multiplies per edge. Infinite or undefined weights make the sum
// meaningless, so they yield undefined.
template <ScalarField S>
ProjValue<S> partition_function(const AztecDiamond& a, const FaceWeights<S>& weights,
                                const KasteleynOrientation& phi) {
  if (a.size() > max_aztec_size())
    throw std::runtime_error("aztec diamond size exceeds the enumeration guard");
  if (!weights.all_finite()) return ProjValue<S>::undefined();

  int nv = static_cast<int>(a.vertices().size());
  std::vector<S> factor;
  factor.reserve(a.edges().size());
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    const auto& ed = a.edges()[e];
    S diff = weights.w[ed.face_right].affine() - weights.w[ed.face_left].affine();
    factor.push_back(phi.sign(static_cast<int>(e)) == 1 ? diff : -diff);
  }

  std::vector<char> matched(nv, 0);
  S total(0);
  std::function<void(int, const S&)> rec = [&](int from, const S& acc) {
    int v = from;
    while (v < nv && matched[v]) ++v;
    if (v == nv) {
      total += acc;
      return;
    }
    matched[v] = 1;
    for (int e : a.incident_edges()[v]) {
      const auto& ed = a.edges()[e];
      int other = ed.white == v ? ed.black : ed.white;
      if (matched[other]) continue;
      if (factor[e].is_zero()) continue;  // branch contributes nothing
      matched[other] = 1;
      rec(v + 1, acc * factor[e]);
      matched[other] = 0;
    }
    matched[v] = 0;
  };
  rec(0, S(1));
  return ProjValue<S>(total);
}

// Reference implementation summing over every orientation of every matching
// separately; exponential in the matching size, used to cross-check the
// factorized sum on small diamonds.
template <ScalarField S>
ProjValue<S> partition_function_bruteforce(const AztecDiamond& a, const FaceWeights<S>& weights,
                                           const KasteleynOrientation& phi) {
  if (!weights.all_finite()) return ProjValue<S>::undefined();
  int nv = static_cast<int>(a.vertices().size());
  std::vector<char> matched(nv, 0);
  std::vector<int> chosen;
  S total(0);
  std::function<void(int)> rec = [&](int from) {
    int v = from;
    while (v < nv && matched[v]) ++v;
    if (v == nv) {
      // Expand all 2^|M| orientations of this matching.
      int ne = static_cast<int>(chosen.size());
      for (std::uint32_t bits = 0; bits < (1u << ne); ++bits) {
        S term(1);
        for (int t = 0; t < ne; ++t) {
          const auto& ed = a.edges()[chosen[t]];
          int s = phi.sign(chosen[t]);
          if (bits & (1u << t)) {
            term = term * (s == 1 ? weights.w[ed.face_right].affine()
                                  : -weights.w[ed.face_right].affine());
          } else {
            term = term * (s == 1 ? -weights.w[ed.face_left].affine()
                                  : weights.w[ed.face_left].affine());
          }
        }
        total += term;
      }
      return;
    }
    matched[v] = 1;
    for (int e : a.incident_edges()[v]) {
      const auto& ed = a.edges()[e];
      int other = ed.white == v ? ed.black : ed.white;
      if (matched[other]) continue;
      matched[other] = 1;
      chosen.push_back(e);
      rec(v + 1);
      chosen.pop_back();
      matched[other] = 0;
    }
    matched[v] = 0;
  };
  rec(0);
  return ProjValue<S>(total);
}

// Y = (prod over all faces of a_f) * Z(a^{-1}) / Z(a). Independent of the
// choice of Kasteleyn orientation. Y(A_0[a]) = a.
template <ScalarField S>
ProjValue<S> ratio_y(const AztecDiamond& a, const FaceWeights<S>& weights,
                     const KasteleynOrientation& phi) {
  ProjValue<S> z_inv = partition_function(a, weights.inverted(), phi);
  ProjValue<S> z = partition_function(a, weights, phi);
  return weights.product() * z_inv / z;
}

template <ScalarField S>
ProjValue<S> ratio_y(const AztecDiamond& a, const FaceWeights<S>& weights) {
  return ratio_y(a, weights, default_kasteleyn(a));
}

}  // namespace dskp
