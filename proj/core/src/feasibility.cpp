#include "slicescale/feasibility.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "slicescale/error.hpp"

namespace slicescale {

std::string_view to_string(Verdict v) { return v == Verdict::scalable ? "scalable" : "not_scalable"; }

namespace {

constexpr double kPivotTolerance = 1e-9;

std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> off(dims.size() + 1, 0);
  for (std::size_t j = 0; j < dims.size(); ++j) off[j + 1] = off[j] + dims[j];
  return off;
}

// Index lists (ambient coordinates) of every positive entry.
std::vector<std::vector<std::size_t>> pattern_rows(const DenseTensor& t) {
  const auto off = offsets_of(t.dims());
  std::vector<std::vector<std::size_t>> rows;
  for_each_index(t.dims(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    if (t.values()[flat] == 0.0) return;
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < idx.size(); ++k) r.push_back(off[k] + idx[k]);
    rows.push_back(std::move(r));
  });
  return rows;
}

// Phase-one simplex on a dense tableau: finds y >= 0 with A y = b (b >= 0).
// `basis` gives an initial basic column per row; rows flagged artificial get
// a fresh artificial column. Bland's rule throughout.
class PhaseOneTableau {
 public:
  PhaseOneTableau(const std::vector<Vector>& a, const Vector& b, const std::vector<std::optional<std::size_t>>& basis)
      : rows_(a.size()), structural_(a.empty() ? 0 : a.front().size()) {
    std::size_t artificials = 0;
    for (const auto& bv : basis) artificials += bv ? 0 : 1;
    cols_ = structural_ + artificials;
    t_.assign((rows_ + 1) * (cols_ + 1), 0.0);
    basis_.resize(rows_);
    std::size_t next_art = structural_;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < structural_; ++c) at(r, c) = a[r][c];
      at(r, cols_) = b[r];
      if (basis[r]) {
        basis_[r] = *basis[r];
      } else {
        at(r, next_art) = 1.0;
        basis_[r] = next_art++;
      }
    }
    // Reduced costs for min sum(artificials).
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < structural_) continue;
      for (std::size_t c = 0; c <= cols_; ++c)
        if (c < structural_ || c == cols_) at(rows_, c) -= at(r, c);
    }
  }

  std::size_t solve(std::size_t max_pivots) {
    std::size_t pivots = 0;
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c)
        if (at(rows_, c) < -kPivotTolerance) {
          enter = c;
          break;
        }
      if (enter == cols_) return pivots;

      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTolerance) continue;
        const double ratio = at(r, cols_) / a;
        if (leave == rows_ || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) throw Error("simplex: unbounded phase-one problem");
      pivot(leave, enter);
      if (++pivots > max_pivots) throw Error("simplex: pivot limit exceeded (cycling guard)");
    }
  }

  double objective() const { return -at(rows_, cols_); }

  Vector structural_solution() const {
    Vector y(structural_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      if (basis_[r] < structural_) y[basis_[r]] = at(r, cols_);
    return y;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t cols_ = 0;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

FeasibilityReport check_scalable(const DenseTensor& tensor, const SliceTargets& targets) {
  if (targets.dims() != tensor.dims()) throw Error("targets do not match tensor dimensions");
  check_compatibility(targets);

  const auto& dims = tensor.dims();
  const auto off = offsets_of(dims);
  const std::size_t n = off.back();
  const auto prow = pattern_rows(tensor);
  const std::size_t m = prow.size();
  const std::size_t d = dims.size();

  // Columns: x+ (n), x- (n), pattern slacks (m), total slack t (1).
  const std::size_t cols = 2 * n + m + 1;
  std::vector<Vector> a;
  Vector b;
  std::vector<std::optional<std::size_t>> basis;
  Vector total_row(cols, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    Vector row(cols, 0.0);
    for (std::size_t c : prow[r]) {
      row[c] += 1.0;
      row[n + c] -= 1.0;
      total_row[c] -= 1.0;
      total_row[n + c] += 1.0;
    }
    row[2 * n + r] = 1.0;
    a.push_back(std::move(row));
    b.push_back(0.0);
    basis.emplace_back(2 * n + r);
  }
  for (std::size_t k = 0; k < d; ++k) {
    Vector row(cols, 0.0);
    const double scale_k = norm_inf(targets[k]);
    for (std::size_t i = 0; i < dims[k]; ++i) {
      row[off[k] + i] = targets[k][i] / scale_k;
      row[n + off[k] + i] = -targets[k][i] / scale_k;
    }
    a.push_back(std::move(row));
    b.push_back(0.0);
    basis.emplace_back(std::nullopt);
  }
  // -(sum of pattern sums) - t = 1.
  total_row[2 * n + m] = -1.0;
  a.push_back(std::move(total_row));
  b.push_back(1.0);
  basis.emplace_back(std::nullopt);

  PhaseOneTableau tableau(a, b, basis);
  FeasibilityReport report;
  report.lp.pivots = tableau.solve(kMaxSimplexPivots);
  report.lp.rows = tableau.rows();
  report.lp.columns = tableau.cols();
  report.lp.phase_one_objective = tableau.objective();

  if (report.lp.phase_one_objective > kWitnessTolerance) {
    report.verdict = Verdict::scalable;
    return report;
  }
  const Vector y = tableau.structural_solution();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - y[n + i];
  report.verdict = Verdict::not_scalable;
  report.witness = BlockVector(dims, std::move(x));
  return report;
}

bool verify_witness(const DenseTensor& tensor, const SliceTargets& targets, const BlockVector& x) {
  if (x.block_dims() != tensor.dims() || targets.dims() != tensor.dims()) return false;
  for (std::size_t k = 0; k < targets.order(); ++k)
    if (std::abs(dot(targets[k], x.block(k))) > kWitnessTolerance) return false;
  double total = 0.0;
  bool ok = true;
  for_each_index(tensor.dims(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    if (tensor.values()[flat] == 0.0) return;
    double s = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += x.block(k)[idx[k]];
    if (s > kWitnessTolerance) ok = false;
    total += s;
  });
  return ok && total <= -1.0 + kWitnessTolerance;
}

}  // namespace slicescale
