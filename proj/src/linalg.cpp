#include "orbkit/linalg.hpp"

#include <algorithm>

namespace orbkit {

Matrix Matrix::identity(int n, FieldTag f) {
  Matrix m(n, n, f);
  for (int i = 0; i < n; ++i) m.at(i, i) = NFE::one(f);
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::ShapeError, "matrix product shape mismatch");
  Matrix r(rows_, o.cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const NFE& x = at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) += x * o.at(k, j);
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::ShapeError, "matrix sum shape mismatch");
  Matrix r(rows_, cols_, field_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::ShapeError, "matrix difference shape mismatch");
  Matrix r(rows_, cols_, field_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

Matrix Matrix::scaled(const NFE& s) const {
  Matrix r = *this;
  for (auto& x : r.data_) x *= s;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const NFE& x) { return x.is_zero(); });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (i == j && !(at(i, j) == NFE::one(field_))) return false;
      if (i != j && !at(i, j).is_zero()) return false;
    }
  return true;
}

NFE Matrix::trace() const {
  NFE t = NFE::zero(field_);
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
  return t;
}

namespace {

// In-place row reduction; returns pivot (row, col) pairs in order.
std::vector<std::pair<int, int>> rref(Matrix& m) {
  std::vector<std::pair<int, int>> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int pr = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m.at(i, c).is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(r, j));
    NFE inv = m.at(r, c).inverse();
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c).is_zero()) continue;
      NFE f = m.at(i, c);
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.emplace_back(r, c);
    ++r;
  }
  return pivots;
}

}  // namespace

int Matrix::rank() const {
  Matrix m = *this;
  return static_cast<int>(rref(m).size());
}

bool Matrix::invertible() const { return rows_ == cols_ && rank() == rows_; }

Matrix Matrix::inverse() const {
  if (rows_ != cols_) fail(ErrorCode::ShapeError, "inverse of non-square matrix");
  Matrix aug(rows_, 2 * cols_, field_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = NFE::one(field_);
  }
  auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) != rows_) fail(ErrorCode::ShapeError, "matrix not invertible");
  for (auto [r, c] : pivots)
    if (c >= cols_) fail(ErrorCode::ShapeError, "matrix not invertible");
  Matrix inv(rows_, cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

Matrix Matrix::column_space_basis(std::vector<int>* pivot_rows) const {
  Matrix m = *this;
  auto pivots = rref(m);
  Matrix basis(rows_, static_cast<int>(pivots.size()), field_);
  if (pivot_rows) pivot_rows->clear();
  for (size_t k = 0; k < pivots.size(); ++k) {
    int c = pivots[k].second;
    for (int i = 0; i < rows_; ++i) basis.at(i, static_cast<int>(k)) = at(i, c);
  }
  if (pivot_rows) {
    // pivot rows of the basis itself for a deterministic left inverse
    Matrix b = basis;
    auto bp = rref(b);
    for (auto [r, c] : bp) (void)r, pivot_rows->push_back(c);
    // rref pivots are (row, col); for the left inverse we need row indices of
    // an invertible square submatrix: recompute on the transpose.
    pivot_rows->clear();
    Matrix bt = basis.transpose();
    auto tp = rref(bt);
    for (auto [r, c] : tp) (void)r, pivot_rows->push_back(c);
  }
  return basis;
}

Matrix Matrix::left_inverse() const {
  Matrix t = transpose();
  Matrix m = t;
  auto pivots = rref(m);
  if (static_cast<int>(pivots.size()) != cols_) fail(ErrorCode::ShapeError, "no left inverse: column rank deficient");
  std::vector<int> rows;
  for (auto [r, c] : pivots) (void)r, rows.push_back(c);
  Matrix sub(cols_, cols_, field_);
  for (int i = 0; i < cols_; ++i)
    for (int j = 0; j < cols_; ++j) sub.at(j, i) = at(rows[i], j);  // sub = (this[rows,:])^T arranged
  // We want L with L * this = id; take L = inv(this[rows,:]) on those rows.
  Matrix sel(cols_, cols_, field_);
  for (int i = 0; i < cols_; ++i)
    for (int j = 0; j < cols_; ++j) sel.at(i, j) = at(rows[i], j);
  Matrix selinv = sel.inverse();
  Matrix L(cols_, rows_, field_);
  for (int i = 0; i < cols_; ++i)
    for (size_t k = 0; k < rows.size(); ++k) L.at(i, rows[k]) = selinv.at(i, static_cast<int>(k));
  return L;
}

Matrix Matrix::solve(const Matrix& rhs) const {
  if (rhs.rows() != rows_) fail(ErrorCode::ShapeError, "solve: rhs row mismatch");
  Matrix aug(rows_, cols_ + rhs.cols(), field_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    for (int j = 0; j < rhs.cols(); ++j) aug.at(i, cols_ + j) = rhs.at(i, j);
  }
  auto pivots = rref(aug);
  Matrix x(cols_, rhs.cols(), field_);
  for (auto [r, c] : pivots) {
    if (c >= cols_) fail(ErrorCode::ShapeError, "solve: inconsistent system");
    for (int j = 0; j < rhs.cols(); ++j) x.at(c, j) = aug.at(r, cols_ + j);
  }
  if (static_cast<int>(pivots.size()) < cols_) {
    // underdetermined: accept only if the free coordinates are genuinely
    // unconstrained to zero, i.e. verify the candidate
    Matrix check = (*this) * x;
    if (!(check == rhs)) fail(ErrorCode::ShapeError, "solve: underdetermined system");
  }
  return x;
}

Matrix Matrix::kernel_basis() const {
  Matrix m = *this;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto [r, c] : pivots) (void)r, is_pivot[c] = true;
  int nfree = cols_ - static_cast<int>(pivots.size());
  Matrix k(cols_, nfree, field_);
  int col = 0;
  for (int c = 0; c < cols_; ++c) {
    if (is_pivot[c]) continue;
    k.at(c, col) = NFE::one(field_);
    for (auto [r, pc] : pivots) k.at(pc, col) = -m.at(r, c);
    ++col;
  }
  return k;
}

}  // namespace orbkit
