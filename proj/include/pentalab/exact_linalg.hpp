#pragma once

// Exact integer/rational linear algebra on top of GMP.
//
// All elimination is fraction-free: rational inputs are cleared row by row to
// integer matrices and reduced with Bareiss-style exact divisions, so the only
// rationals ever formed are final results.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "pentalab/errors.hpp"

namespace pentalab {

using Integer = mpz_class;
using Rational = mpq_class;
using IVector = std::vector<Integer>;
using QVector = std::vector<Rational>;

/// Dense row-major matrix over an exact (or arbitrary precision) scalar.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw UsageError("Matrix: entry count does not match shape");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw UsageError("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Matrix whose columns are the given vectors (all of equal length).
  static Matrix from_columns(std::span<const std::vector<T>> columns) {
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw UsageError("Matrix::from_columns: ragged columns");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  static Matrix from_rows(std::span<const std::vector<T>> rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw UsageError("Matrix::from_rows: ragged rows");
      std::copy(rows[r].begin(), rows[r].end(), m.row_begin(r));
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  auto row_begin(std::size_t r) { return data_.begin() + static_cast<std::ptrdiff_t>(r * cols_); }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<T>& entries() const noexcept { return data_; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw UsageError("Matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend std::vector<T> operator*(const Matrix& a, std::span<const T> v) {
    if (a.cols_ != v.size()) throw UsageError("Matrix-vector product: shape mismatch");
    std::vector<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    return a * std::span<const T>(v);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IMatrix = Matrix<Integer>;
using QMatrix = Matrix<Rational>;

// ---------------------------------------------------------------------------
// Conversions

inline QVector to_rational(std::span<const Integer> v) {
  QVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

inline QMatrix to_rational(const IMatrix& m) {
  std::vector<Rational> data;
  data.reserve(m.entries().size());
  for (const auto& x : m.entries()) data.emplace_back(x);
  return QMatrix(m.rows(), m.cols(), std::move(data));
}

/// Scales a rational row by the lcm of its denominators. Returns the scale.
inline Integer clear_denominators(std::span<const Rational> in, std::span<Integer> out) {
  Integer l = 1;
  for (const auto& q : in) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i].get_num() * (l / in[i].get_den());
  return l;
}

// ---------------------------------------------------------------------------
// Fraction-free Gauss-Jordan

/// Result of fraction_free_reduce. After reduction the rows 0..rank-1 carry
/// `pivot` in column pivot_cols[i] and zero in every other pivot column; rows
/// rank.. are zero in the eliminated columns.
struct Reduction {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  Integer pivot = 1;
  int row_sign = 1;  // parity of the row swaps performed
};

/// Fraction-free (Bareiss) Gauss-Jordan elimination with full pivoting over
/// the first `col_limit` columns. Pivot ties are broken by the smallest
/// bit-length entry. Every division is exact.
inline Reduction fraction_free_reduce(IMatrix& a, std::size_t col_limit) {
  Reduction red;
  std::vector<bool> used(col_limit, false);
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  Integer t;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t best_row = rows, best_col = col_limit, best_bits = 0;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t j = 0; j < col_limit; ++j) {
        if (used[j] || sgn(a(i, j)) == 0) continue;
        const std::size_t bits = mpz_sizeinbase(a(i, j).get_mpz_t(), 2);
        if (best_row == rows || bits < best_bits) {
          best_row = i;
          best_col = j;
          best_bits = bits;
        }
      }
    if (best_row == rows) break;
    if (best_row != r) {
      a.swap_rows(best_row, r);
      red.row_sign = -red.row_sign;
    }
    used[best_col] = true;
    red.pivot_cols.push_back(best_col);
    const Integer p = a(r, best_col);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Integer f = a(i, best_col);
      for (std::size_t j = 0; j < cols; ++j) {
        // a(i,j) = (p*a(i,j) - f*a(r,j)) / prev
        t = p * a(i, j);
        t -= f * a(r, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), red.pivot.get_mpz_t());
      }
    }
    // Earlier pivot rows now hold p on their diagonal after the exact division.
    red.pivot = p;
    ++red.rank;
  }
  return red;
}

namespace detail {

inline int permutation_sign(std::vector<std::size_t> perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    while (perm[i] != i) {
      std::swap(perm[i], perm[perm[i]]);
      sign = -sign;
    }
  return sign;
}

inline Integer small_det(const IMatrix& m) {
  switch (m.rows()) {
    case 0:
      return 1;
    case 1:
      return m(0, 0);
    case 2:
      return Integer(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    default: {
      Integer a = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
      Integer b = m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0);
      Integer c = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
      return Integer(m(0, 0) * a - m(0, 1) * b + m(0, 2) * c);
    }
  }
}

}  // namespace detail

/// Exact determinant of a square integer matrix.
inline Integer det(IMatrix m) {
  if (!m.square()) throw UsageError("det: matrix is not square");
  if (m.rows() <= 3) return detail::small_det(m);
  const std::size_t n = m.rows();
  Reduction red = fraction_free_reduce(m, n);
  if (red.rank < n) return 0;
  return red.row_sign * detail::permutation_sign(red.pivot_cols) * red.pivot;
}

/// Exact determinant of a square rational matrix: rows are cleared to
/// integers, reduced fraction-free, and the cleared factor divided back.
inline Rational det(const QMatrix& m) {
  if (!m.square()) throw UsageError("det: matrix is not square");
  const std::size_t n = m.rows();
  IMatrix im(n, n);
  Integer scale = 1;
  for (std::size_t r = 0; r < n; ++r)
    scale *= clear_denominators(m.row(r), std::span<Integer>(&*im.row_begin(r), n));
  Rational out(det(std::move(im)), scale);
  out.canonicalize();
  return out;
}

/// Exact solution of m x = rhs.
inline QVector solve(const QMatrix& m, std::span<const Rational> rhs) {
  if (!m.square()) throw UsageError("solve: matrix is not square");
  const std::size_t n = m.rows();
  if (rhs.size() != n) throw UsageError("solve: right-hand side has wrong length");
  IMatrix aug(n, n + 1);
  std::vector<Rational> row(n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), row.begin());
    row[n] = rhs[r];
    clear_denominators(row, std::span<Integer>(&*aug.row_begin(r), n + 1));
  }
  const Reduction red = fraction_free_reduce(aug, n);
  if (red.rank < n) throw SingularMatrix("matrix has rank " + std::to_string(red.rank));
  QVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[red.pivot_cols[i]] = Rational(aug(i, n), red.pivot);
    x[red.pivot_cols[i]].canonicalize();
  }
  return x;
}

inline QVector solve(const QMatrix& m, const QVector& rhs) { return solve(m, std::span<const Rational>(rhs)); }

inline QVector solve(const IMatrix& m, std::span<const Integer> rhs) {
  return solve(to_rational(m), to_rational(rhs));
}

/// Inverse of an integer matrix up to scale: the adjugate-like integer matrix
/// A' with A' * A = D * Id for the nonzero integer D returned alongside.
inline std::pair<IMatrix, Integer> scaled_inverse(const IMatrix& m) {
  if (!m.square()) throw UsageError("scaled_inverse: matrix is not square");
  const std::size_t n = m.rows();
  IMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  const Reduction red = fraction_free_reduce(aug, n);
  if (red.rank < n) throw SingularMatrix("matrix is not invertible");
  IMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) inv(red.pivot_cols[i], c) = aug(i, n + c);
  return {std::move(inv), red.pivot};
}

inline QMatrix inverse(const QMatrix& m) {
  const std::size_t n = m.rows();
  IMatrix im(n, n);
  std::vector<Integer> scales(n);
  for (std::size_t r = 0; r < n; ++r)
    scales[r] = clear_denominators(m.row(r), std::span<Integer>(&*im.row_begin(r), n));
  // m = diag(1/s) im, so m^-1 = im^-1 diag(s).
  auto [inv, d] = scaled_inverse(im);
  QMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = Rational(inv(r, c) * scales[c], d);
      out(r, c).canonicalize();
    }
  return out;
}

// ---------------------------------------------------------------------------
// Projective canonical forms

/// In-place canonical form of a nonzero integer vector: coprime entries with
/// the first nonzero entry positive.
inline void canonicalize(std::span<Integer> v) {
  Integer g = 0;
  const Integer* first = nullptr;
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    if (!first) first = &x;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  if (!first) throw ZeroVector("all entries are zero");
  if (sgn(*first) < 0) g = -g;
  if (g == 1) return;
  for (auto& x : v)
    if (sgn(x) != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline IVector canonical_homogeneous(IVector v) {
  canonicalize(v);
  return v;
}

/// The unique scalar multiple of v with coprime integer entries whose first
/// nonzero entry is positive.
inline IVector canonical_homogeneous(std::span<const Rational> v) {
  IVector out(v.size());
  clear_denominators(v, out);
  canonicalize(out);
  return out;
}

inline bool is_zero(std::span<const Integer> v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return sgn(x) == 0; });
}

/// Generator of the kernel of a d x (d+1) integer matrix given by its rows:
/// the signed maximal minors. Zero iff the rows are dependent.
inline IVector kernel_vector(std::span<const IVector> rows) {
  const std::size_t k = rows.size();
  const std::size_t n = k + 1;
  for (const auto& r : rows)
    if (r.size() != n) throw UsageError("kernel_vector: expected k rows of length k+1");
  IVector out(n);
  IMatrix minor(k, k);
  for (std::size_t skip = 0; skip < n; ++skip) {
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != skip) minor(r, cc++) = rows[r][c];
    out[skip] = det(minor);
    if (skip % 2 == 1) out[skip] = -out[skip];
  }
  return out;
}

/// Integer basis of the right nullspace, each vector in canonical form.
inline std::vector<IVector> nullspace(IMatrix a) {
  const std::size_t cols = a.cols();
  const Reduction red = fraction_free_reduce(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : red.pivot_cols) is_pivot[c] = true;
  std::vector<IVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    IVector x(cols, Integer(0));
    x[f] = red.pivot;
    for (std::size_t i = 0; i < red.rank; ++i) x[red.pivot_cols[i]] = -a(i, f);
    canonicalize(x);
    basis.push_back(std::move(x));
  }
  return basis;
}

inline std::size_t rank(IMatrix a) {
  const std::size_t cols = a.cols();
  return fraction_free_reduce(a, cols).rank;
}

inline Integer dot(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.size() != b.size()) throw UsageError("dot: length mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Heights

/// max(|numerator|, denominator) in lowest terms.
inline Integer height(const Rational& q) {
  Integer num = abs(q.get_num());
  return num > q.get_den() ? num : Integer(q.get_den());
}

inline Integer height(const Integer& z) { return sgn(z) == 0 ? Integer(1) : Integer(abs(z)); }

/// log10 of a positive integer from its leading bits; accurate to ~1e-15
/// relative, well inside the +-1 contract.
inline double log10_height(const Integer& h) {
  if (sgn(h) <= 0) throw UsageError("log10_height: height must be positive");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, h.get_mpz_t());
  return std::log10(mant) + static_cast<double>(exp) * std::log10(2.0);
}

/// Decimal digit count derived from log10_height (exact except within
/// ~1e-12 of a power of ten).
inline std::size_t digit_count(const Integer& h) {
  return static_cast<std::size_t>(std::floor(log10_height(h) + 1e-12)) + 1;
}

}  // namespace pentalab
