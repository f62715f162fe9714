#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbkit/linalg.hpp"
#include "orbkit/scalars.hpp"

namespace orbkit {

using Vec = std::vector<NFE>;

// Finite-dimensional unital associative algebra by structure constants:
// e_i * e_j = sum_k mul[i][j][k] e_k.
struct Algebra {
  int n = 0;
  FieldTag field{1};
  Vec unit;
  std::vector<NFE> mul;  // n^3, index (i*n + j)*n + k

  const NFE& c(int i, int j, int k) const { return mul[(static_cast<size_t>(i) * n + j) * n + k]; }
  NFE& c(int i, int j, int k) { return mul[(static_cast<size_t>(i) * n + j) * n + k]; }

  Vec multiply(const Vec& x, const Vec& y) const;
  Matrix left_mult(const Vec& x) const;   // matrix of y -> x*y
  Matrix right_mult(const Vec& x) const;  // matrix of y -> y*x
  bool is_central(const Vec& x) const;
  bool is_invertible(const Vec& x) const;
  Vec invert(const Vec& x) const;
  Vec scale(const NFE& s, const Vec& x) const;

  // associativity + unit laws; throws ShapeError on malformed input
  void validate() const;
};

Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);

struct FrobeniusReport {
  bool frobenius = false;
  bool symmetric = false;
  bool delta_separable = false;
  bool separable = false;
  Vec window;                  // mu . Delta(1), empty if not frobenius
  std::optional<Vec> kernel_witness;  // pairing kernel vector when not frobenius
};

class FrobeniusStructure {
 public:
  FrobeniusStructure() = default;
  // throws NotFrobenius (with witness in message) when the pairing is singular
  static FrobeniusStructure make(Algebra a, Vec counit);

  const Algebra& algebra() const { return a_; }
  const Vec& counit() const { return eps_; }
  FieldTag field() const { return a_.field; }
  int dim() const { return a_.n; }

  NFE eps(const Vec& x) const;
  const Matrix& pairing() const { return g_; }
  const Matrix& pairing_inverse() const { return ginv_; }

  // Delta(1) = sum_i cas_u[i] (x) cas_v[i]; with the derived comultiplication
  // Delta(x) = (x (x) 1) Delta(1).
  const std::vector<Vec>& casimir_left() const { return cas_u_; }
  const std::vector<Vec>& casimir_right() const { return cas_v_; }

  bool is_symmetric() const;
  bool is_delta_separable() const;
  bool is_separable() const;

  const Vec& window() const { return window_; }  // central, asserted
  const Vec& psi() const { return psi_; }
  bool has_nontrivial_psi() const;
  Vec psi_inverse() const;

  // comultiplication as a dim x dim^2 matrix (column = x index, rows = i*n+j)
  Matrix comultiplication() const;

  // Euler-normalization Gamma: (A, mu, eps') with eps'(x) = eps(x * omega),
  // psi = omega. Requires separable symmetric; returns Delta-separable
  // symmetric structure. Throws NotSeparable.
  FrobeniusStructure euler_gamma() const;

  // Already-Delta-separable structures are returned unchanged (with their
  // recorded psi); otherwise euler_gamma() is applied.
  FrobeniusStructure gamma_normalized() const;

  // central s with s*s = window(); deterministic positive branch per block.
  Vec window_sqrt() const;

 private:
  Algebra a_;
  Vec eps_;
  Matrix g_, ginv_;
  std::vector<Vec> cas_u_, cas_v_;
  Vec window_;
  Vec psi_;
};

FrobeniusReport check_frobenius(const Algebra& a, const Vec& counit);

// Basis of the center as vectors.
std::vector<Vec> center_basis(const Algebra& a);

// Primitive central idempotents, deterministic order (lexicographically
// smallest support first). Throws NotSplitSemisimple when the center cannot
// be split over the tagged field.
std::vector<Vec> central_primitive_idempotents(const Algebra& a);

// convenience constructors used by fixtures and tests
Algebra group_algebra_z2(FieldTag f);            // Q[Z/2]
Algebra matrix_algebra(int n, FieldTag f);       // Mat_n
Algebra product_field_algebra(int k, FieldTag f);  // K^k diagonal
Algebra dual_numbers(FieldTag f);                // K[x]/(x^2)

}  // namespace orbkit
