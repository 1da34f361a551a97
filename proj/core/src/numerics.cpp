#include "slicescale/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slicescale/error.hpp"

namespace slicescale {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw Error("DenseMatrix: entries length " + std::to_string(entries_.size()) +
                " != " + std::to_string(rows_) + " x " + std::to_string(cols_));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Vector> r;
  for (const auto& row : rows) r.emplace_back(row);
  return from_rows(r);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  Vector entries;
  entries.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw Error("DenseMatrix: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return {rows.size(), cols, std::move(entries)};
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  DenseMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error("DenseMatrix: ragged columns");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Vector DenseMatrix::row(std::size_t i) const {
  return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::max_abs() const { return norm_inf(entries_); }

double DenseMatrix::frobenius() const { return norm2(entries_); }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("matrix difference: shape mismatch");
  Vector e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
  return {a.rows(), a.cols(), std::move(e)};
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error("matrix-vector product: shape mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// ---------------------------------------------------------------------------
// OrthonormalBasis

OrthonormalBasis::OrthonormalBasis(std::size_t ambient_dim, std::vector<Vector> vectors)
    : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
  for (const auto& v : vectors_)
    if (v.size() != ambient_dim_) throw Error("OrthonormalBasis: vector length != ambient dimension");
}

DenseMatrix OrthonormalBasis::as_matrix() const { return DenseMatrix::from_columns(vectors_, ambient_dim_); }

Vector OrthonormalBasis::coordinates(std::span<const double> v) const {
  Vector c(vectors_.size());
  for (std::size_t i = 0; i < vectors_.size(); ++i) c[i] = dot(vectors_[i], v);
  return c;
}

Vector OrthonormalBasis::combine(std::span<const double> coefficients) const {
  if (coefficients.size() != vectors_.size()) throw Error("OrthonormalBasis::combine: size mismatch");
  Vector out(ambient_dim_, 0.0);
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    for (std::size_t k = 0; k < ambient_dim_; ++k) out[k] += coefficients[i] * vectors_[i][k];
  return out;
}

double OrthonormalBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    for (std::size_t j = i; j < vectors_.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot(vectors_[i], vectors_[j]) - target));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Householder QR

PivotedQr householder_qr(const DenseMatrix& a, double rel_tol) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  DenseMatrix work = a;
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);

  double largest = 0.0;
  for (std::size_t j = 0; j < k; ++j) largest = std::max(largest, norm2(a.column(j)));
  const double threshold = rel_tol * largest;

  std::vector<Vector> reflectors;  // v with implicit beta = 2 / v.v, acting on rows p..n-1
  Vector r_diag;
  const std::size_t steps = std::min(n, k);
  for (std::size_t p = 0; p < steps; ++p) {
    // Pivot: largest remaining column norm; near-ties keep the earlier column.
    std::size_t best = p;
    double best_norm = -1.0;
    for (std::size_t j = p; j < k; ++j) {
      double s = 0.0;
      for (std::size_t i = p; i < n; ++i) s += work(i, j) * work(i, j);
      const double nj = std::sqrt(s);
      if (nj > best_norm * (1.0 + 1e-10) + 0.0) {
        best = j;
        best_norm = nj;
      }
    }
    if (best_norm <= threshold || best_norm == 0.0) break;
    if (best != p) {
      for (std::size_t i = 0; i < n; ++i) std::swap(work(i, p), work(i, best));
      std::swap(perm[p], perm[best]);
    }

    Vector v(n - p);
    for (std::size_t i = p; i < n; ++i) v[i - p] = work(i, p);
    const double alpha = v[0] >= 0.0 ? -best_norm : best_norm;
    v[0] -= alpha;
    const double vv = dot(v, v);
    if (vv > 0.0) {
      for (std::size_t j = p; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = p; i < n; ++i) s += v[i - p] * work(i, j);
        const double f = 2.0 * s / vv;
        for (std::size_t i = p; i < n; ++i) work(i, j) -= f * v[i - p];
      }
    }
    reflectors.push_back(std::move(v));
    r_diag.push_back(alpha);
  }

  // Q = H_0 H_1 ... H_{r-1}; accumulate from the right-most reflector.
  DenseMatrix q = DenseMatrix::identity(n);
  for (std::size_t p = reflectors.size(); p-- > 0;) {
    const Vector& v = reflectors[p];
    const double vv = dot(v, v);
    if (vv == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = p; i < n; ++i) s += v[i - p] * q(i, j);
      const double f = 2.0 * s / vv;
      for (std::size_t i = p; i < n; ++i) q(i, j) -= f * v[i - p];
    }
  }
  for (std::size_t p = 0; p < r_diag.size(); ++p) {
    if (r_diag[p] < 0.0) {
      r_diag[p] = -r_diag[p];
      for (std::size_t i = 0; i < n; ++i) q(i, p) = -q(i, p);
    }
  }
  return {std::move(q), std::move(r_diag), std::move(perm), reflectors.size()};
}

OrthonormalBasis orthonormalize(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw Error("no vectors");
  const std::size_t n = vectors.front().size();
  if (n == 0) throw Error("orthonormalize: zero-length vectors");
  const PivotedQr qr = householder_qr(DenseMatrix::from_columns(vectors, n));
  std::vector<Vector> out;
  out.reserve(qr.rank);
  for (std::size_t j = 0; j < qr.rank; ++j) out.push_back(qr.q.column(j));
  return {n, std::move(out)};
}

OrthonormalBasis null_space(const DenseMatrix& a) {
  const std::size_t n = a.cols();
  if (n == 0) throw Error("null_space: matrix has no columns");
  std::vector<Vector> out;
  if (a.rows() == 0) {
    for (std::size_t j = 0; j < n; ++j) {
      Vector e(n, 0.0);
      e[j] = 1.0;
      out.push_back(std::move(e));
    }
    return {n, std::move(out)};
  }
  const PivotedQr qr = householder_qr(a.transpose());
  for (std::size_t j = qr.rank; j < n; ++j) {
    Vector v = qr.q.column(j);
    const double scale = norm_inf(v);
    for (double c : v) {
      if (std::abs(c) > 1e-9 * scale) {
        if (c < 0.0)
          for (double& e : v) e = -e;
        break;
      }
    }
    out.push_back(std::move(v));
  }
  return {n, std::move(out)};
}

DenseMatrix projector_onto(const OrthonormalBasis& basis) {
  const std::size_t n = basis.ambient_dim();
  DenseMatrix p(n, n);
  for (const auto& v : basis.vectors())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) += v[i] * v[j];
  return p;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {
constexpr double kOffDiagonalThreshold = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}
}  // namespace

SymmetricEigen symmetric_eigs(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error("symmetric_eigs: matrix is not square");
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale)
        throw Error("symmetric_eigs: matrix is not symmetric");

  DenseMatrix a = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double target = kOffDiagonalThreshold * std::max(m.frobenius(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  std::vector<Vector> vecs;
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx));
    vecs.push_back(v.column(idx));
  }
  out.vectors = OrthonormalBasis(n, std::move(vecs));
  return out;
}

}  // namespace slicescale
