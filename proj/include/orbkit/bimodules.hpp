#pragma once

#include <optional>
#include <string>

#include "orbkit/frobenius.hpp"

namespace orbkit {

bool same_structure(const FrobeniusStructure& a, const FrobeniusStructure& b);

// (B,A)-bimodule, i.e. a 1-morphism A -> B: left algebra acts on the left,
// right algebra on the right.
struct Bimodule {
  FrobeniusStructure left;   // B
  FrobeniusStructure right;  // A
  int m = 0;
  std::vector<NFE> lact;  // (b, x, y): coefficient of e_y in e_b |> e_x
  std::vector<NFE> ract;  // (x, a, y): coefficient of e_y in e_x <| e_a

  FieldTag field() const { return left.field(); }
  const NFE& lc(int b, int x, int y) const {
    return lact[(static_cast<size_t>(b) * m + x) * m + y];
  }
  const NFE& rc(int x, int a, int y) const {
    return ract[(static_cast<size_t>(x) * right.dim() + a) * m + y];
  }
  NFE& lc(int b, int x, int y) { return lact[(static_cast<size_t>(b) * m + x) * m + y]; }
  NFE& rc(int x, int a, int y) { return ract[(static_cast<size_t>(x) * right.dim() + a) * m + y]; }

  Matrix left_action(const Vec& b) const;
  Matrix right_action(const Vec& a) const;

  void validate() const;  // module axioms, unit laws, commuting actions
};

Bimodule regular_bimodule(const FrobeniusStructure& F);

bool is_bimodule_map(const Bimodule& X, const Bimodule& Y, const Matrix& f);

struct SplitIdempotent {
  Matrix p;     // idempotent on the plain tensor product
  Matrix iota;  // image -> plain
  Matrix pi;    // plain -> image
  int image_dim = 0;
};

struct RelativeTensor {
  Bimodule product;  // over (outer-left of X, outer-right of Y)
  SplitIdempotent split;
};

// X over (C,B) composed with Y over (B,A); plain index (x*mY + y).
RelativeTensor relative_tensor(const Bimodule& X, const Bimodule& Y);

// Adjunction data for X over (B,A). All four structure maps are stored on the
// plain tensor coordinates; *_rel versions factor through the recorded
// splittings. With euler = true the maps carry the psi insertions of the
// gamma-normalized algebras.
struct Adjunction {
  Bimodule dual;  // X^dual over (A,B)
  Matrix ev;      // X^v (x)_B X -> A,  cols (alpha, x)
  Matrix coev;    // B -> X (x)_A X^v,  rows (x, alpha)
  Matrix evT;     // X (x)_A X^v -> B,  cols (x, alpha)
  Matrix coevT;   // A -> X^v (x)_B X,  rows (alpha, x)
  SplitIdempotent dual_x;  // splitting of X^v (x)_B X
  SplitIdempotent x_dual;  // splitting of X (x)_A X^v
  Matrix ev_rel, coev_rel, evT_rel, coevT_rel;
};

Adjunction adjoint(const Bimodule& X, bool euler = true);

bool zorro_check(const Bimodule& X, std::string* witness = nullptr);
bool zorro_check_with(const Bimodule& X, const Adjunction& ad, std::string* witness = nullptr);

struct TraceResult {
  Vec tr_left;   // central element of the left algebra (evT . (chi x id) . coev)
  Vec tr_right;  // central element of the right algebra (ev . (id x chi) . coevT)
};

TraceResult trace_and_qdim(const Bimodule& X, const Matrix& chi);
TraceResult quantum_dims(const Bimodule& X);

// the two pivotal constructions of the dual of a 2-morphism xi: X -> Y
Matrix dual_map_via_right(const Bimodule& X, const Bimodule& Y, const Matrix& xi);
Matrix dual_map_via_left(const Bimodule& X, const Bimodule& Y, const Matrix& xi);

struct OrbifoldSplit {
  Bimodule condensing;  // calA as a (calA, base)-bimodule
  SplitIdempotent split;  // of X^v (x)_calA X
  Matrix iso;           // image coords of X^v o X -> calA, verified Frobenius iso
};

// calA realized over the trivial base algebra of its own field.
OrbifoldSplit split_orbifold_datum(const FrobeniusStructure& calA);

}  // namespace orbkit
