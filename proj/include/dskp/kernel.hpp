#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "dskp/dimer.hpp"
#include "dskp/matrix.hpp"

namespace dskp {

// The |F| x 2|B| operator whose transpose's kernel encodes the solution. For
// a black vertex b and an adjacent face f (in the rotated frame): +1 when b
// is east or north of f, -1 when west or south; the second copy of B carries
// the same signs scaled by the face weight.
template <ScalarField S>
struct OperatorD {
  Matrix<S> d;                 // |F| rows, 2|B| columns
  std::vector<int> blacks;     // black vertex ids, column order
  const AztecDiamond* diamond = nullptr;
};

template <ScalarField S>
OperatorD<S> operator_d(const AztecDiamond& a, const FaceWeights<S>& weights) {
  if (!weights.all_finite()) throw std::invalid_argument("operator needs finite face weights");
  const auto& blacks = a.black_vertices();
  std::size_t nb = blacks.size();
  OperatorD<S> out;
  out.d = Matrix<S>(a.faces().size(), 2 * nb);
  out.blacks = blacks;
  out.diamond = &a;

  std::map<std::pair<int, int>, int> face_at;
  for (std::size_t f = 0; f < a.faces().size(); ++f) face_at[a.face_rotated(f)] = static_cast<int>(f);

  for (std::size_t c = 0; c < nb; ++c) {
    auto [x, y] = a.vertex_rotated(blacks[c]);
    auto put = [&](int fx, int fy, int sign) {
      auto it = face_at.find({fx, fy});
      if (it == face_at.end()) return;
      int f = it->second;
      out.d(f, c) = S(sign);
      out.d(f, nb + c) = sign == 1 ? weights.w[f].affine() : -weights.w[f].affine();
    };
    put(x - 1, y, +1);  // b east of its west face
    put(x + 1, y, -1);
    put(x, y + 1, -1);  // b south of its north face
    put(x, y - 1, +1);
  }
  return out;
}

// Evaluates the solution value as the weighted ratio of the leftmost entries
// of a kernel vector of D^T. A kernel of dimension >= 2 means the value is
// undefined.
template <ScalarField S>
ProjValue<S> ratio_via_kernel(const AztecDiamond& a, const FaceWeights<S>& weights) {
  if (!weights.all_finite()) return ProjValue<S>::undefined();
  if (a.size() == 0) return weights.w[0];
  OperatorD<S> op = operator_d(a, weights);
  std::size_t nf = a.faces().size(), nc = op.d.cols();
  Matrix<S> dt(nc, nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t c = 0; c < nc; ++c) dt(c, f) = op.d(f, c);
  auto basis = dt.nullspace();
  if (basis.size() != 1) return ProjValue<S>::undefined();
  const auto& v = basis[0];
  S num(0), den(0);
  for (int f : a.leftmost_faces()) {
    num += weights.w[f].affine() * v[f];
    den += v[f];
  }
  return ProjValue<S>(num, den);
}

// Quotient of the rotated diamond by the vertical translation Y -> Y + 2m,
// giving a graph on a cylinder. Faces keep their (periodic) weights. For the
// diamond sizes used here (size >= m) every residue class is populated, so
// the quotient is built directly on residues.
template <ScalarField S>
struct CylinderOperator {
  int size = 0;
  int circumference = 0;  // 2m
  std::vector<std::pair<int, int>> faces;   // (X, Y mod 2m)
  std::vector<std::pair<int, int>> blacks;  // (X, Y mod 2m)
  std::vector<ProjValue<S>> face_weights;
  Matrix<S> dbar;  // |F| rows, 2|B| columns

  int face_index(int x, int ymod) const {
    auto it = face_at.find({x, ymod});
    return it == face_at.end() ? -1 : it->second;
  }
  std::map<std::pair<int, int>, int> face_at;
};

template <ScalarField S>
CylinderOperator<S> cylinder_operator(int size, int m,
                                      const std::function<ProjValue<S>(int, int)>& weight_at) {
  CylinderOperator<S> cy;
  cy.size = size;
  cy.circumference = 2 * m;
  for (int x = -size; x <= size; ++x)
    for (int y = 0; y < 2 * m; ++y)
      if (mod(x + y, 2) == 0) {
        cy.face_at[{x, y}] = static_cast<int>(cy.faces.size());
        cy.faces.emplace_back(x, y);
        auto w = weight_at(x, y);
        if (!w.is_finite()) throw std::invalid_argument("cylinder weights must be finite");
        cy.face_weights.push_back(w);
      }
  for (int x = -(size - 1); x <= size - 1; ++x)
    for (int y = 0; y < 2 * m; ++y)
      if (mod(x, 2) == 0 && mod(x + y, 2) == 1) cy.blacks.emplace_back(x, y);

  std::size_t nb = cy.blacks.size();
  cy.dbar = Matrix<S>(cy.faces.size(), 2 * nb);
  for (std::size_t c = 0; c < nb; ++c) {
    auto [x, y] = cy.blacks[c];
    auto put = [&](int fx, int fy, int sign) {
      int f = cy.face_index(fx, mod(fy, 2 * m));
      if (f < 0) return;
      cy.dbar(f, c) = S(sign);
      cy.dbar(f, nb + c) =
          sign == 1 ? cy.face_weights[f].affine() : -cy.face_weights[f].affine();
    };
    put(x - 1, y, +1);
    put(x + 1, y, -1);
    put(x, y + 1, -1);
    put(x, y - 1, +1);
  }
  return cy;
}

// Nullspace basis of Dbar^T, as vectors indexed by cylinder faces.
template <ScalarField S>
std::vector<std::vector<S>> cylinder_kernel(const CylinderOperator<S>& cy) {
  std::size_t nf = cy.faces.size(), nc = cy.dbar.cols();
  Matrix<S> dt(nc, nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t c = 0; c < nc; ++c) dt(c, f) = cy.dbar(f, c);
  return dt.nullspace();
}

}  // namespace dskp
