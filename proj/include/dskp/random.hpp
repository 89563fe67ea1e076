#pragma once

#include <random>
#include <vector>

#include "dskp/proj.hpp"
#include "dskp/scalar.hpp"

namespace dskp {

// Deterministic source of small exact values. Numerators and denominators are
// kept in single digits so that products over matchings stay fast.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long integer(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(gen_);
  }

  mpq_class rational() {
    mpq_class q(integer(-9, 9), integer(1, 9));
    q.canonicalize();
    return q;
  }

  mpq_class nonzero_rational() {
    for (;;) {
      mpq_class q = rational();
      if (q != 0) return q;
    }
  }

  GaussianRational gaussian() { return GaussianRational(rational(), rational()); }

  GaussianRational nonzero_gaussian() {
    for (;;) {
      GaussianRational g = gaussian();
      if (!g.is_zero()) return g;
    }
  }

  GaussianRational real_gaussian() { return GaussianRational(rational(), 0); }
  GaussianRational nonzero_real_gaussian() { return GaussianRational(nonzero_rational(), 0); }

  template <ScalarField S>
  S nonzero_scalar() {
    if constexpr (ScalarTraits<S>::exact) {
      return nonzero_gaussian();
    } else {
      return to_float(nonzero_gaussian());
    }
  }

  template <ScalarField S>
  ProjValue<S> nonzero_value() {
    return ProjValue<S>(nonzero_scalar<S>());
  }

  // n pairwise distinct nonzero scalars.
  template <ScalarField S>
  std::vector<S> distinct_nonzero(int n) {
    std::vector<S> out;
    while (static_cast<int>(out.size()) < n) {
      S cand = nonzero_scalar<S>();
      bool fresh = true;
      for (const auto& v : out)
        if (v == cand) fresh = false;
      if (fresh) out.push_back(cand);
    }
    return out;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dskp
