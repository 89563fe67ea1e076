#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dskp/lattice.hpp"

namespace dskp {

// Aztec diamond of a given size centered at a face of the square lattice.
//
// Faces are lattice points (i,j): internal when |i-ci|+|j-cj| < size, open
// when the distance equals size. Vertices are the unit squares incident to an
// internal face; a vertex is stored by the lattice point at its lower-left
// corner, so vertex (a,b) is the square with corners (a,b) .. (a+1,b+1).
// An edge joins two squares sharing a lattice edge; the faces adjacent to it
// are the endpoints of that shared lattice edge.
//
// The rotated frame used by the kernel operator maps a face (i,j) to
//   X = (i-j) - (ci-cj),  Y = (i+j) - (ci+cj)
// and a vertex (a,b) to X = (a-b)-(ci-cj), Y = (a+b+1)-(ci+cj). Faces sit on
// X+Y even, vertices on X+Y odd, and the corners of a face are its four
// lattice neighbours in (X,Y). Black vertices are those with X even.
class AztecDiamond {
 public:
  struct Edge {
    int white, black;        // vertex indices
    int face_right, face_left;  // faces right/left when traveling white -> black
  };

  AztecDiamond(int ci, int cj, int size) : ci_(ci), cj_(cj), size_(size) {
    if (size < 0) throw std::invalid_argument("negative size");
    build();
  }

  int center_i() const { return ci_; }
  int center_j() const { return cj_; }
  int size() const { return size_; }

  const std::vector<std::pair<int, int>>& faces() const { return faces_; }
  const std::vector<std::pair<int, int>>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& black_vertices() const { return blacks_; }
  const std::vector<std::vector<int>>& incident_edges() const { return incident_; }
  const std::vector<std::vector<int>>& internal_face_edges() const { return internal_face_edges_; }
  const std::vector<int>& internal_faces() const { return internal_; }

  int face_index(int i, int j) const {
    auto it = face_index_.find({i, j});
    return it == face_index_.end() ? -1 : it->second;
  }
  bool face_internal(int f) const {
    auto [i, j] = faces_[f];
    return std::abs(i - ci_) + std::abs(j - cj_) < size_;
  }
  // Coloring is by absolute lattice parity, shared by all diamonds; the
  // kernel ratio below depends on this choice, not just on its existence.
  bool vertex_black(int v) const {
    auto [a, b] = vertices_[v];
    return mod(a - b, 2) == 0;
  }

  std::pair<int, int> face_rotated(int f) const {
    auto [i, j] = faces_[f];
    return {(i - j) - (ci_ - cj_), (i + j) - (ci_ + cj_)};
  }
  std::pair<int, int> vertex_rotated(int v) const {
    auto [a, b] = vertices_[v];
    return {(a - b) - (ci_ - cj_), (a + b + 1) - (ci_ + cj_)};
  }

  // Faces on the leftmost rotated column X = -size, ordered by increasing Y;
  // their weights run from a_{ci-size,cj} up to a_{ci,cj+size}.
  std::vector<int> leftmost_faces() const {
    std::vector<int> out;
    for (int t = 0; t <= size_; ++t) out.push_back(face_index(ci_ - size_ + t, cj_ + t));
    return out;
  }

 private:
  void build() {
    int k = size_;
    for (int i = ci_ - k; i <= ci_ + k; ++i)
      for (int j = cj_ - k; j <= cj_ + k; ++j)
        if (std::abs(i - ci_) + std::abs(j - cj_) <= k) {
          face_index_[{i, j}] = static_cast<int>(faces_.size());
          faces_.emplace_back(i, j);
        }
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
      if (face_internal(f)) internal_.push_back(f);

    auto corner_of_internal = [&](int a, int b) {
      for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
        int fi = face_index(a + di, b + dj);
        if (fi >= 0 && face_internal(fi)) return true;
      }
      return false;
    };
    for (int a = ci_ - k - 1; a <= ci_ + k; ++a)
      for (int b = cj_ - k - 1; b <= cj_ + k; ++b)
        if (corner_of_internal(a, b)) {
          vertex_index_[{a, b}] = static_cast<int>(vertices_.size());
          vertices_.emplace_back(a, b);
        }
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
      if (vertex_black(v)) blacks_.push_back(v);

    incident_.resize(vertices_.size());
    internal_face_edges_.resize(faces_.size());
    auto add_edge = [&](int va, int vb, int f_right_from_a, int f_left_from_a) {
      // Orient the stored data white -> black.
      bool a_white = !vertex_black(va);
      Edge e;
      if (a_white) {
        e = Edge{va, vb, f_right_from_a, f_left_from_a};
      } else {
        e = Edge{vb, va, f_left_from_a, f_right_from_a};
      }
      if (e.face_right < 0 || e.face_left < 0)
        throw std::logic_error("edge with a missing adjacent face");
      int id = static_cast<int>(edges_.size());
      edges_.push_back(e);
      incident_[va].push_back(id);
      incident_[vb].push_back(id);
      for (int f : {e.face_right, e.face_left})
        if (face_internal(f)) internal_face_edges_[f].push_back(id);
    };
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
      auto [a, b] = vertices_[v];
      auto east = vertex_index_.find({a + 1, b});
      if (east != vertex_index_.end())
        add_edge(v, east->second, face_index(a + 1, b), face_index(a + 1, b + 1));
      auto north = vertex_index_.find({a, b + 1});
      if (north != vertex_index_.end())
        add_edge(v, north->second, face_index(a + 1, b + 1), face_index(a, b + 1));
    }

    // Structural identities of the diamond.
    if (static_cast<int>(vertices_.size()) != 2 * k * (k + 1))
      throw std::logic_error("vertex count mismatch");
    if (static_cast<int>(blacks_.size()) * 2 != static_cast<int>(vertices_.size()))
      throw std::logic_error("bipartite classes unbalanced");
    if (static_cast<int>(faces_.size()) != 2 * static_cast<int>(blacks_.size()) + 1)
      throw std::logic_error("face count mismatch");
    if (static_cast<int>(edges_.size()) != 4 * k * k) throw std::logic_error("edge count mismatch");
  }

  int ci_, cj_, size_;
  std::vector<std::pair<int, int>> faces_;
  std::vector<int> internal_;
  std::vector<std::pair<int, int>> vertices_;
  std::vector<int> blacks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> internal_face_edges_;
  std::map<std::pair<int, int>, int> face_index_;
  std::map<std::pair<int, int>, int> vertex_index_;
};

// Signs phi_{(w,b)} on edges, skew-symmetric by convention: phi_{(b,w)} is
// the negative of the stored value. Around every internal quadrilateral the
// product of the four white-to-black signs is -1.
class KasteleynOrientation {
 public:
  explicit KasteleynOrientation(std::vector<int> signs) : signs_(std::move(signs)) {}

  int sign(int edge) const { return signs_[edge]; }
  std::size_t size() const { return signs_.size(); }

  static bool face_condition_holds(const AztecDiamond& a, const std::vector<int>& signs) {
    for (int f : a.internal_faces()) {
      int prod = 1;
      if (a.internal_face_edges()[f].size() != 4) return false;
      for (int e : a.internal_face_edges()[f]) prod *= signs[e];
      if (prod != -1) return false;
    }
    return true;
  }

  // Gauge move: flipping every sign at one vertex preserves the face products.
  KasteleynOrientation regauged(const AztecDiamond& a, const std::vector<int>& vertices) const {
    std::vector<int> s = signs_;
    for (int v : vertices)
      for (int e : a.incident_edges()[v]) s[e] = -s[e];
    return KasteleynOrientation(std::move(s));
  }

 private:
  std::vector<int> signs_;
};

// Deterministic construction: +1 on a BFS spanning tree, then each remaining
// sign is forced by peeling internal faces that have one undetermined edge.
inline KasteleynOrientation default_kasteleyn(const AztecDiamond& a) {
  int ne = static_cast<int>(a.edges().size());
  std::vector<int> signs(ne, 0);
  int nv = static_cast<int>(a.vertices().size());
  if (nv > 0) {
    std::vector<char> seen(nv, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int e : a.incident_edges()[v]) {
        const auto& ed = a.edges()[e];
        int other = ed.white == v ? ed.black : ed.white;
        if (!seen[other]) {
          seen[other] = 1;
          signs[e] = 1;  // tree edge
          queue.push_back(other);
        }
      }
    }
  }
  // Peel faces with exactly one undetermined boundary edge.
  bool progress = true;
  while (progress) {
    progress = false;
    for (int f : a.internal_faces()) {
      int unknown = -1, known_prod = 1, unknown_count = 0;
      for (int e : a.internal_face_edges()[f]) {
        if (signs[e] == 0) {
          unknown = e;
          ++unknown_count;
        } else {
          known_prod *= signs[e];
        }
      }
      if (unknown_count == 1) {
        signs[unknown] = -known_prod;  // force the face product to -1
        progress = true;
      }
    }
  }
  for (int s : signs)
    if (s == 0) throw std::logic_error("kasteleyn construction left an edge unresolved");
  if (!KasteleynOrientation::face_condition_holds(a, signs))
    throw std::logic_error("kasteleyn face condition failed");
  return KasteleynOrientation(std::move(signs));
}

}  // namespace dskp
