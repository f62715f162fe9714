#pragma once

#include <vector>

#include "orbkit/scalars.hpp"

namespace orbkit {

// Dense matrices over a fixed number field. Dimensions at desk scale; all
// arithmetic exact, all pivoting deterministic (first nonzero).
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), field_{1} {}
  Matrix(int rows, int cols, FieldTag f)
      : rows_(rows), cols_(cols), field_(f), data_(static_cast<size_t>(rows) * cols, NFE::zero(f)) {}

  static Matrix identity(int n, FieldTag f);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  FieldTag field() const { return field_; }

  NFE& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const NFE& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const NFE& s) const;
  Matrix transpose() const;
  bool operator==(const Matrix& o) const;

  bool is_zero() const;
  bool is_identity() const;

  // Gauss-Jordan; throws on non-invertible input.
  Matrix inverse() const;
  bool invertible() const;
  int rank() const;
  NFE trace() const;

  // Basis of the column space, pivot columns chosen in index order (the
  // lexicographically-smallest-support convention); returns the r pivot row
  // indices too so callers can build deterministic one-sided inverses.
  Matrix column_space_basis(std::vector<int>* pivot_rows = nullptr) const;

  // Deterministic left inverse L with L*this == id (requires full column rank).
  Matrix left_inverse() const;

  // Solve this * x = rhs (unique solution expected); throws if inconsistent
  // or underdetermined.
  Matrix solve(const Matrix& rhs) const;

  // Basis of the null space as columns.
  Matrix kernel_basis() const;

 private:
  int rows_, cols_;
  FieldTag field_;
  std::vector<NFE> data_;
};

}  // namespace orbkit
