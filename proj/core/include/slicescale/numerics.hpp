#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace slicescale {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<Vector>& rows);
  // Each vector becomes one column.
  static DenseMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const Vector& entries() const { return entries_; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  DenseMatrix transpose() const;

  // Largest absolute entry.
  double max_abs() const;
  double frobenius() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

// Set of unit-length, mutually orthogonal vectors in R^ambient_dim. The
// basis may be empty (the zero subspace).
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  OrthonormalBasis(std::size_t ambient_dim, std::vector<Vector> vectors);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }

  // ambient_dim x size, one basis vector per column.
  DenseMatrix as_matrix() const;
  // Coefficients of the orthogonal projection of v onto the span.
  Vector coordinates(std::span<const double> v) const;
  // Sum of coefficients[i] * vectors[i].
  Vector combine(std::span<const double> coefficients) const;

  // Largest deviation of the Gram matrix from the identity.
  double orthonormality_defect() const;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Vector> vectors_;
};

inline constexpr double kRankTolerance = 1e-10;

// Householder QR with column pivoting of an n x k matrix. q is the full n x n
// orthogonal factor with columns oriented so that diag(r) >= 0; the first
// `rank` columns span the range, the remaining ones its orthogonal complement.
struct PivotedQr {
  DenseMatrix q;
  Vector r_diagonal;
  std::vector<std::size_t> permutation;
  std::size_t rank = 0;
};

// Rank is the number of pivots above rel_tol times the largest column norm.
PivotedQr householder_qr(const DenseMatrix& a, double rel_tol = kRankTolerance);

// Orthonormal basis of span(vectors). Throws Error("no vectors") on empty
// input and Error on ragged input.
OrthonormalBasis orthonormalize(const std::vector<Vector>& vectors);

// Orthonormal basis of {x : A x = 0}. Each vector is oriented so that its
// first non-negligible component is positive.
OrthonormalBasis null_space(const DenseMatrix& a);

// Orthogonal projector onto span(basis).
DenseMatrix projector_onto(const OrthonormalBasis& basis);

struct SymmetricEigen {
  Vector values;  // ascending
  OrthonormalBasis vectors;
};

// Cyclic Jacobi eigensolver. Throws Error if M is not symmetric within 1e-10
// (scaled by max(1, max|M_ij|)).
SymmetricEigen symmetric_eigs(const DenseMatrix& m);

}  // namespace slicescale
