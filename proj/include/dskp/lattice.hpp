#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dskp/matrix.hpp"
#include "dskp/proj.hpp"
#include "dskp/random.hpp"

namespace dskp {

// Point of the octahedral-tetrahedral lattice: i+j+k even.
struct LatticePoint {
  int i = 0, j = 0, k = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

inline int height_parity(int i, int j) { return ((i + j) % 2 + 2) % 2; }
inline int mod(int a, int m) { return ((a % m) + m) % m; }

class MissingCellsError : public std::runtime_error {
 public:
  explicit MissingCellsError(std::vector<std::pair<int, int>> cells)
      : std::runtime_error(describe(cells)), cells_(std::move(cells)) {}
  const std::vector<std::pair<int, int>>& cells() const { return cells_; }

 private:
  static std::string describe(const std::vector<std::pair<int, int>>& cells) {
    std::string s = "initial data window too small; missing cells:";
    std::size_t shown = 0;
    for (const auto& c : cells) {
      if (shown++ == 8) {
        s += " ...";
        break;
      }
      s += " (" + std::to_string(c.first) + "," + std::to_string(c.second) + ")";
    }
    return s;
  }
  std::vector<std::pair<int, int>> cells_;
};

enum class PeriodKind { simple, doubly };

// Initial values a_{i,j} living on heights 0/1 (h = [i+j]_2). Periodic data
// is stored on a fundamental domain and unrolled by index reduction, so
// arbitrarily large windows cost nothing.
template <ScalarField S>
class InitialData {
 public:
  using Value = ProjValue<S>;

  InitialData() = default;
  InitialData(int m, PeriodKind kind) : period_m_(m), kind_(kind) {}

  bool periodic() const { return period_m_ > 0; }
  int period() const { return period_m_; }
  PeriodKind period_kind() const { return kind_; }

  void set(int i, int j, const Value& v) { cells_[reduce(i, j)] = v; }

  std::optional<Value> get(int i, int j) const {
    auto it = cells_.find(reduce(i, j));
    if (it == cells_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::pair<int, int>, Value>& cells() const { return cells_; }

  // Checks the declared periodicities on every stored pair that is related by
  // a period vector (meaningful for data loaded from files, where the window
  // may store redundant translates).
  bool periodicity_consistent() const {
    if (!periodic()) return true;
    for (const auto& [ij, v] : cells_) {
      auto [i, j] = ij;
      auto probe = [&](int di, int dj) {
        auto it = cells_.find(std::make_pair(i + di, j + dj));
        return it == cells_.end() || it->second == v;
      };
      if (!probe(period_m_, period_m_)) return false;
      if (kind_ == PeriodKind::doubly && !probe(period_m_, -period_m_)) return false;
    }
    return true;
  }

 private:
  std::pair<int, int> reduce(int i, int j) const {
    if (!periodic()) return {i, j};
    int u = i + j, v = i - j;
    u = mod(u, 2 * period_m_);
    if (kind_ == PeriodKind::doubly) v = mod(v, 2 * period_m_);
    return {(u + v) / 2, (u - v) / 2};
  }

  std::map<std::pair<int, int>, Value> cells_;
  int period_m_ = 0;
  PeriodKind kind_ = PeriodKind::simple;
};

enum class CellFlag { initial, computed, undefined };

template <ScalarField S>
struct SlabCell {
  ProjValue<S> value;
  CellFlag flag = CellFlag::computed;
};

// The computed solution on 0 <= k <= kmax, together with the initial data it
// was propagated from. Immutable once built.
template <ScalarField S>
class SolutionSlab {
 public:
  using Value = ProjValue<S>;

  SolutionSlab(std::shared_ptr<const InitialData<S>> init,
               std::map<LatticePoint, SlabCell<S>> cells)
      : init_(std::move(init)), cells_(std::move(cells)) {}

  const InitialData<S>& initial() const { return *init_; }
  const std::map<LatticePoint, SlabCell<S>>& cells() const { return cells_; }

  std::optional<Value> value(int i, int j, int k) const {
    auto it = cells_.find(LatticePoint{i, j, k});
    if (it == cells_.end()) return std::nullopt;
    return it->second.value;
  }

  void to_csv(std::ostream& os) const {
    os << "i,j,k,value,flag\n";
    for (const auto& [p, c] : cells_) {
      const char* f = c.flag == CellFlag::initial    ? "initial"
                      : c.flag == CellFlag::computed ? "computed"
                                                     : "undefined";
      os << p.i << "," << p.j << "," << p.k << "," << c.value.str() << "," << f << "\n";
    }
  }

 private:
  std::shared_ptr<const InitialData<S>> init_;
  std::map<LatticePoint, SlabCell<S>> cells_;
};

// Layer-by-layer evaluation of the recurrence toward positive k. Every target
// must have its dependence cone inside the (possibly unrolled) window. An
// octahedron whose five known values coincide propagates the constant; any
// undefined input or degenerate solve yields an undefined apex.
template <ScalarField S>
SolutionSlab<S> propagate(std::shared_ptr<const InitialData<S>> init,
                          const std::vector<LatticePoint>& targets) {
  std::set<LatticePoint> needed;
  std::vector<LatticePoint> stack;
  for (const auto& t : targets) {
    if ((t.i + t.j + t.k) % 2 != 0) throw std::invalid_argument("target not on the lattice");
    if (t.k < 0) throw std::invalid_argument("negative heights: reflect indices instead");
    stack.push_back(t);
  }
  while (!stack.empty()) {
    LatticePoint p = stack.back();
    stack.pop_back();
    if (!needed.insert(p).second) continue;
    if (p.k <= 1) continue;
    stack.push_back({p.i + 1, p.j, p.k - 1});
    stack.push_back({p.i - 1, p.j, p.k - 1});
    stack.push_back({p.i, p.j + 1, p.k - 1});
    stack.push_back({p.i, p.j - 1, p.k - 1});
    stack.push_back({p.i, p.j, p.k - 2});
  }

  std::map<LatticePoint, SlabCell<S>> cells;
  std::vector<std::pair<int, int>> missing;
  for (const auto& p : needed) {
    if (p.k > 1) continue;
    auto v = init->get(p.i, p.j);
    if (!v) {
      missing.emplace_back(p.i, p.j);
      continue;
    }
    cells[p] = SlabCell<S>{*v, CellFlag::initial};
  }
  if (!missing.empty()) throw MissingCellsError(std::move(missing));

  auto at = [&cells](int i, int j, int k) -> const ProjValue<S>& {
    return cells.at(LatticePoint{i, j, k}).value;
  };
  std::vector<LatticePoint> order(needed.begin(), needed.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const LatticePoint& a, const LatticePoint& b) { return a.k < b.k; });
  for (const auto& p : order) {
    if (p.k <= 1) continue;
    const auto& bottom = at(p.i, p.j, p.k - 2);
    const auto& pe1 = at(p.i + 1, p.j, p.k - 1);
    const auto& me1 = at(p.i - 1, p.j, p.k - 1);
    const auto& pe2 = at(p.i, p.j + 1, p.k - 1);
    const auto& me2 = at(p.i, p.j - 1, p.k - 1);
    ProjValue<S> apex;
    if (!bottom.is_undefined() && bottom == pe1 && bottom == me1 && bottom == pe2 &&
        bottom == me2) {
      apex = bottom;  // constant-octahedron convention
    } else {
      apex = solve_octahedron(bottom, pe1, me1, pe2, me2);
    }
    cells[p] = SlabCell<S>{apex, apex.is_undefined() ? CellFlag::undefined : CellFlag::computed};
  }
  return SolutionSlab<S>(std::move(init), std::move(cells));
}

// Every interior octahedron with all seven values defined satisfies the
// relation exactly; used as a structural invariant in tests.
template <ScalarField S>
bool slab_satisfies_recurrence(const SolutionSlab<S>& slab) {
  ProjValue<S> minus_one(S(-1));
  for (const auto& [p, c] : slab.cells()) {
    if (p.k < 2) continue;
    auto bottom = slab.value(p.i, p.j, p.k - 2);
    auto pe1 = slab.value(p.i + 1, p.j, p.k - 1);
    auto me1 = slab.value(p.i - 1, p.j, p.k - 1);
    auto pe2 = slab.value(p.i, p.j + 1, p.k - 1);
    auto me2 = slab.value(p.i, p.j - 1, p.k - 1);
    if (!bottom || !pe1 || !me1 || !pe2 || !me2) continue;
    std::array<ProjValue<S>, 6> x = {*bottom, *pe2, *me1, c.value, *me2, *pe1};
    ProjValue<S> mr = multi_ratio6(x);
    if (mr.is_undefined()) continue;  // degenerate cells carry no constraint
    if (!(mr == minus_one)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structured initial data.

// Doubly periodic data with constant even layer d; the odd layer is given on
// one m x m fundamental domain indexed by (a,b) -> (u,v) = (2a+1, 2b+1).
template <ScalarField S>
std::shared_ptr<InitialData<S>> make_dodgson(int m, const ProjValue<S>& d,
                                             const std::vector<std::vector<ProjValue<S>>>& odd) {
  if (static_cast<int>(odd.size()) != m) throw std::invalid_argument("odd layer: need m rows");
  for (const auto& row : odd)
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("odd layer: need m columns");
  auto init = std::make_shared<InitialData<S>>(m, PeriodKind::doubly);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int u = 2 * a, v = 2 * b;
      init->set((u + v) / 2, (u - v) / 2, d);
      u = 2 * a + 1;
      v = 2 * b + 1;
      init->set((u + v) / 2, (u - v) / 2, odd[a][b]);
    }
  return init;
}

// Dodgson data whose odd layer is invariant under (a,b) -> (a+1,b+p); the odd
// layer then takes exactly the m given values, one per orbit.
template <ScalarField S>
std::shared_ptr<InitialData<S>> make_dodgson_cyclic(int m, int p,
                                                    const std::vector<ProjValue<S>>& values) {
  if (static_cast<int>(values.size()) != m) throw std::invalid_argument("need m values");
  std::vector<std::vector<ProjValue<S>>> odd(m, std::vector<ProjValue<S>>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) odd[a][b] = values[mod(b - p * a, m)];
  return make_dodgson(m, ProjValue<S>(S(0)), odd);
}

// Simply periodic data whose height-0 diagonals with [i-j]_{2p} = 0 are
// constant. The window spans SW-NE diagonals v = i-j in [vmin, vmax].
template <ScalarField S>
std::shared_ptr<InitialData<S>> make_devron(int m, int p, int vmin, int vmax, Rng& rng) {
  auto init = std::make_shared<InitialData<S>>(m, PeriodKind::simple);
  std::map<int, ProjValue<S>> diag_value;
  for (int u = 0; u < 2 * m; ++u)
    for (int v = vmin; v <= vmax; ++v) {
      if (mod(u + v, 2) != 0) continue;
      int i = (u + v) / 2, j = (u - v) / 2;
      if (u % 2 == 0 && mod(v, 2 * p) == 0) {
        auto [it, fresh] = diag_value.try_emplace(v, ProjValue<S>());
        if (fresh) it->second = rng.nonzero_value<S>();
        init->set(i, j, it->second);
      } else {
        init->set(i, j, rng.nonzero_value<S>());
      }
    }
  return init;
}

// Dense random window, no periodicity.
template <ScalarField S>
std::shared_ptr<InitialData<S>> make_random_window(int i0, int i1, int j0, int j1, Rng& rng) {
  auto init = std::make_shared<InitialData<S>>();
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) init->set(i, j, rng.nonzero_value<S>());
  return init;
}

// Random window with the even layer pinned to d.
template <ScalarField S>
std::shared_ptr<InitialData<S>> make_constant_even_window(int i0, int i1, int j0, int j1,
                                                          const ProjValue<S>& d, Rng& rng) {
  auto init = std::make_shared<InitialData<S>>();
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j)
      init->set(i, j, height_parity(i, j) == 0 ? d : rng.nonzero_value<S>());
  return init;
}

// ---------------------------------------------------------------------------
// Singularity checkers.

template <ScalarField S>
struct ConstancyReport {
  bool all_defined = true;
  bool constant = false;
  ProjValue<S> value;
  std::optional<std::pair<LatticePoint, LatticePoint>> violation;
  // Set when the cyclic hypothesis holds on the odd layer (d = 0).
  bool harmonic_applicable = false;
  bool harmonic_matches = false;
  ProjValue<S> harmonic;
};

// Checks that x(.,.,m) is independent of (i,j) on the computed slab; when the
// initial data is cyclic Dodgson with d = 0, also checks the harmonic-mean
// value of the m odd-layer orbit values.
template <ScalarField S>
ConstancyReport<S> check_dodgson(const SolutionSlab<S>& slab, int m) {
  ConstancyReport<S> rep;
  std::optional<LatticePoint> first;
  for (const auto& [p, c] : slab.cells()) {
    if (p.k != m) continue;
    if (c.value.is_undefined()) {
      rep.all_defined = false;
      continue;
    }
    if (!first) {
      first = p;
      rep.value = c.value;
      rep.constant = true;
    } else if (!(c.value == rep.value)) {
      rep.constant = false;
      rep.violation = std::make_pair(*first, p);
      return rep;
    }
  }

  const auto& init = slab.initial();
  if (init.periodic() && init.period() == m && init.period_kind() == PeriodKind::doubly) {
    ProjValue<S> zero(S(0));
    // Odd layer as an m x m table in (a,b) coordinates.
    std::vector<std::vector<ProjValue<S>>> odd(m, std::vector<ProjValue<S>>(m));
    bool even_all_zero = true, have_all = true;
    for (int a = 0; a < m && have_all; ++a)
      for (int b = 0; b < m && have_all; ++b) {
        int u = 2 * a + 1, v = 2 * b + 1;
        auto val = init.get((u + v) / 2, (u - v) / 2);
        if (!val) have_all = false;
        else odd[a][b] = *val;
        auto ev = init.get(a + b, a - b);
        if (!ev || !(*ev == zero)) even_all_zero = false;
      }
    if (have_all && even_all_zero) {
      for (int p = 1; p < m && !rep.harmonic_applicable; ++p) {
        bool cyclic = true;
        for (int a = 0; a < m && cyclic; ++a)
          for (int b = 0; b < m && cyclic; ++b)
            if (!(odd[a][b] == odd[mod(a + 1, m)][mod(b + p, m)])) cyclic = false;
        if (cyclic) {
          rep.harmonic_applicable = true;
          std::vector<ProjValue<S>> vals;
          for (int b = 0; b < m; ++b) vals.push_back(odd[0][b]);
          rep.harmonic = harmonic_mean(vals);
          rep.harmonic_matches = rep.constant && rep.value == rep.harmonic;
        }
      }
    }
  }
  return rep;
}

template <ScalarField S>
struct DevronReport {
  int height = 0;
  bool all_checked_defined = true;
  bool coincide = true;
  int pairs_checked = 0;
  std::optional<std::pair<LatticePoint, LatticePoint>> violation;
};

// Checks x(i,j,k) = x(i+1,j+1,k) at k = (m-2)p+2 on diagonals with
// [i-j-mp]_{2p} = 0, over every pair present in the slab.
template <ScalarField S>
DevronReport<S> check_devron(const SolutionSlab<S>& slab, int m, int p) {
  DevronReport<S> rep;
  rep.height = (m - 2) * p + 2;
  for (const auto& [pt, c] : slab.cells()) {
    if (pt.k != rep.height) continue;
    if (mod(pt.i - pt.j - m * p, 2 * p) != 0) continue;
    auto other = slab.value(pt.i + 1, pt.j + 1, pt.k);
    if (!other) continue;
    ++rep.pairs_checked;
    if (c.value.is_undefined() || other->is_undefined()) {
      rep.all_checked_defined = false;
      continue;
    }
    if (!(c.value == *other)) {
      rep.coincide = false;
      rep.violation = std::make_pair(pt, LatticePoint{pt.i + 1, pt.j + 1, pt.k});
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// N-matrix evaluation for constant-even-layer data: builds the k x k matrix of
// shifted inverses, inverts it exactly, and returns d + sum of the entries of
// the inverse. A singular matrix signals an undefined solution value.
template <ScalarField S>
ProjValue<S> nmat_value(const InitialData<S>& init, const ProjValue<S>& d,
                        const LatticePoint& target) {
  int i = target.i, j = target.j, k = target.k;
  if (k < 1 || (i + j + k) % 2 != 0) throw std::invalid_argument("bad target");
  if (!d.is_finite()) return ProjValue<S>::undefined();
  S dv = d.affine();
  Matrix<S> n(k, k);
  std::vector<std::pair<int, int>> missing;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      auto cell = init.get(i - a + b, j + k - 1 - a - b);
      if (!cell) {
        missing.emplace_back(i - a + b, j + k - 1 - a - b);
        continue;
      }
      if (!cell->is_finite()) return ProjValue<S>::undefined();
      S diff = cell->affine() - dv;
      if (diff.is_zero()) return ProjValue<S>::undefined();
      n(a, b) = S(1) / diff;
    }
  if (!missing.empty()) throw MissingCellsError(std::move(missing));
  auto inv = n.inverse();
  if (!inv) return ProjValue<S>::undefined();
  S sum(0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) sum += (*inv)(a, b);
  return ProjValue<S>(dv + sum);
}

// N-matrix index layout, exposed so tests can pin it against the documented
// k = 4 example.
inline std::pair<int, int> nmat_cell_index(int i, int j, int k, int a, int b) {
  return {i - a + b, j + k - 1 - a - b};
}

// ---------------------------------------------------------------------------
// Pair-singularity experiment: initial data constrained by
//   a_{i,j} = a_{i+m,j+m} = a_{i+p-1,j+p+1},  and
//   a_{i,j} = a_{i+1,j+1} whenever [i+j]_4 = 0,
// propagated to height m. Reports (never asserts) which of the two
// every-other-diagonal coincidence families holds there.
struct PairSingReport {
  bool constraints_hold = false;
  bool family_m = false;    // x(i,j,m) = x(i+1,j+1,m) for [i+j]_4 = [m]_4
  bool family_m2 = false;   // same for [i+j]_4 = [m+2]_4
  int pairs_m = 0, pairs_m2 = 0;
};

template <ScalarField S>
PairSingReport experiment_pairsing(int m, int p, Rng& rng) {
  if (m < 2 || p < 2 || m % 2 != 0 || p % 2 != 0)
    throw std::invalid_argument("pair singularity experiment needs even m, p >= 2");

  // Canonical representative under the lattice spanned by (m,m) and (p-1,p+1),
  // plus the pairing of even cells.
  auto canonical = [&](int i, int j) {
    int u = i + j, v = i - j;
    int vp = mod(v, 2);          // reduce v to {0,1} via (2p,-2) steps in (u,v)
    u += p * (v - vp);
    v = vp;
    u = mod(u, 2 * m);
    if (v == 0 && mod(u, 4) == 2) u = mod(u - 2, 2 * m);  // a_{i,j} = a_{i+1,j+1} pairing
    return std::make_pair(u, v);
  };

  std::map<std::pair<int, int>, ProjValue<S>> table;
  auto value = [&](int i, int j) -> ProjValue<S> {
    auto key = canonical(i, j);
    auto [it, fresh] = table.try_emplace(key, ProjValue<S>());
    if (fresh) it->second = rng.nonzero_value<S>();
    return it->second;
  };

  int radius = m + 4;
  auto init = std::make_shared<InitialData<S>>();
  for (int i = -radius - 2; i <= radius + 2; ++i)
    for (int j = -radius - 2; j <= radius + 2; ++j) init->set(i, j, value(i, j));

  PairSingReport rep;
  rep.constraints_hold = true;
  for (int i = -radius / 2; i <= radius / 2; ++i)
    for (int j = -radius / 2; j <= radius / 2; ++j) {
      if (!(*init->get(i, j) == *init->get(i + m, j + m))) rep.constraints_hold = false;
      if (!(*init->get(i, j) == *init->get(i + p - 1, j + p + 1))) rep.constraints_hold = false;
      if (mod(i + j, 4) == 0 && !(*init->get(i, j) == *init->get(i + 1, j + 1)))
        rep.constraints_hold = false;
    }

  std::vector<LatticePoint> targets;
  for (int i = 0; i < 4; ++i)
    for (int j = -2; j <= 2; ++j) {
      if (mod(i + j + m, 2) != 0) continue;
      targets.push_back({i, j, m});
      targets.push_back({i + 1, j + 1, m});
    }
  auto slab = propagate<S>(init, targets);

  rep.family_m = rep.family_m2 = true;
  for (const auto& t : targets) {
    auto a = slab.value(t.i, t.j, t.k), b = slab.value(t.i + 1, t.j + 1, t.k);
    if (!a || !b || a->is_undefined() || b->is_undefined()) continue;
    bool eq = (*a == *b);
    if (mod(t.i + t.j, 4) == mod(m, 4)) {
      ++rep.pairs_m;
      if (!eq) rep.family_m = false;
    } else {
      ++rep.pairs_m2;
      if (!eq) rep.family_m2 = false;
    }
  }
  return rep;
}

}  // namespace dskp
