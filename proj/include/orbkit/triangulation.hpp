#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbkit/scalars.hpp"

namespace orbkit {

// Facet identification: vertex from[i] is glued to vertex to[i]. The facets
// are located by their (pre-quotient) vertex sets.
struct Gluing {
  std::vector<int> from, to;
};

// Oriented triangulation with a strict total order on pre-quotient vertex
// ids; top simplices are strictly increasing tuples. Explicit gluings build
// quotient (Delta-complex style) manifolds; facets carried by identical
// vertex tuples are glued automatically.
struct OrderedTriangulation {
  int dim = 2;
  int vertices = 0;
  std::vector<std::vector<int>> simplices;
  std::vector<int> orient;  // +1 / -1 per top simplex
  std::vector<Gluing> gluings;

  void validate_shape() const;
};

// A cell of the quotient complex.
struct Cell {
  std::vector<std::vector<int>> members;  // pre-quotient vertex tuples (sorted), one per identified copy
};

struct FacetPair {
  int s1, f1;  // simplex index, omitted position
  int s2, f2;  // -1 when boundary
  std::vector<int> map_from, map_to;  // vertex bijection (sorted facet of s1 -> facet of s2)
};

// Derived combinatorics of the quotient complex.
class Complex {
 public:
  explicit Complex(OrderedTriangulation t);

  const OrderedTriangulation& tri() const { return t_; }
  int dim() const { return t_.dim; }
  int top_count() const { return static_cast<int>(t_.simplices.size()); }

  // quotient cells per dimension k = 0..dim
  int cell_count(int k) const { return static_cast<int>(cells_[k].size()); }
  // cell id of the sub-simplex of top simplex s spanned by the given positions
  int cell_of(int s, const std::vector<int>& positions) const;
  const Cell& cell(int k, int id) const { return cells_[k][id]; }

  const std::vector<FacetPair>& facet_pairs() const { return pairs_; }
  bool closed() const { return boundary_facets_.empty(); }
  const std::vector<std::pair<int, int>>& boundary_facets() const { return boundary_facets_; }

  // checks opposite induced orientations across every interior facet
  void validate_oriented() const;

  // true when all gluing vertex maps are order-preserving
  bool order_preserving_gluings() const;

 private:
  OrderedTriangulation t_;
  std::vector<std::vector<Cell>> cells_;
  std::map<std::vector<int>, int> cell_index_[4];
  std::vector<FacetPair> pairs_;
  std::vector<std::pair<int, int>> boundary_facets_;
};

// Bistellar flips. New vertices are appended as maxima. Throws InvalidMove
// when the requested move is not available.
struct PachnerMove {
  // 2d: "13" (subdivide simplex), "31", "22" (diagonal flip)
  // 3d: "14", "41", "23", "32"
  std::string kind;
  int target = 0;  // simplex index for 13/14; facet-pair index for 22/23; cell id for 31/41/32
};

OrderedTriangulation apply_move(const OrderedTriangulation& t, const PachnerMove& mv);

// enumerate the legal moves of a given kind (deterministic order)
std::vector<PachnerMove> legal_moves(const OrderedTriangulation& t, const std::string& kind);

// relabel vertices by a permutation (resorting tuples, adjusting signs)
OrderedTriangulation relabel(const OrderedTriangulation& t, const std::vector<int>& perm);

OrderedTriangulation disjoint_union(const OrderedTriangulation& a, const OrderedTriangulation& b);

// shipped complexes
OrderedTriangulation tri_sphere_2d();        // boundary of the tetrahedron
OrderedTriangulation tri_torus_2d();         // 2-triangle quotient torus
OrderedTriangulation tri_genus2_2d();        // octagon identification, central fan
OrderedTriangulation tri_s3_two_tet();       // doubled tetrahedron
OrderedTriangulation tri_s3_boundary_4simplex();
OrderedTriangulation tri_s2xs1();            // prism stack over the 2-sphere
OrderedTriangulation tri_t3_cube();          // 6-tet cube with identifications
OrderedTriangulation tri_circle(int segments);

// cylinder over a closed surface/curve: bottom copy glued trivially to a top
// copy through staircase prisms; bottom vertices keep their ids, top vertex
// ids are offset by the vertex count
struct CylinderComplex {
  OrderedTriangulation tri;
  int vertex_offset;  // top vertex v corresponds to bottom vertex v - offset
};
CylinderComplex prism_cylinder(const OrderedTriangulation& base);

}  // namespace orbkit
