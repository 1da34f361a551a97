#include "slicescale/bridge.hpp"

#include <cmath>
#include <sstream>

#include "slicescale/error.hpp"

namespace slicescale {

BridgeProblem BridgeProblem::stochastic(DenseMatrix A, Vector a, Vector b) {
  Vector c(A.cols(), 1.0);
  return {std::move(A), std::move(a), std::move(b), std::move(c)};
}

void BridgeProblem::validate() const {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (a.size() != n || c.size() != n || b.size() != m) throw Error("bridge: vector lengths do not match A");
  for (const Vector* v : {&a, &b, &c})
    for (double e : *v)
      if (!(e > 0.0) || !std::isfinite(e)) throw Error("bridge: a, b, c must be positive");
  for (double e : A.entries())
    if (!(e >= 0.0) || !std::isfinite(e)) throw Error("bridge: A must be nonnegative");
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += A(i, j);
    if (s == 0.0) throw Error("bridge: A has a zero row");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += A(i, j);
    if (s == 0.0) throw Error("bridge: A has a zero column");
  }
  const double ca = dot(c, a);
  double sb = 0.0;
  for (double e : b) sb += e;
  if (std::abs(ca - sb) > 1e-10 * std::max(std::abs(ca), std::abs(sb))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bridge: incompatible margins, c.a = " << ca << " but sum(b) = " << sb;
    throw Error(msg.str());
  }
}

ReducedBridge reduce(const BridgeProblem& p) {
  p.validate();
  ReducedBridge r{p.A, p.b, Vector(p.c.size())};
  for (std::size_t i = 0; i < p.A.rows(); ++i)
    for (std::size_t j = 0; j < p.A.cols(); ++j) r.a_tilde(i, j) = p.A(i, j) * p.a[j];
  for (std::size_t j = 0; j < p.c.size(); ++j) r.col_targets[j] = p.c[j] * p.a[j];
  return r;
}

BridgeSolution solve_bridge(const BridgeProblem& p, const RunOptions& options, const std::optional<BlockVector>& x0) {
  const ReducedBridge r = reduce(p);
  DenseTensor tensor = DenseTensor::from_matrix(r.a_tilde);
  SliceTargets targets({r.row_targets, r.col_targets});

  FeasibilityReport feas = check_scalable(tensor, targets);
  if (feas.verdict == Verdict::not_scalable)
    throw InfeasibleError("bridge: no scaling of A with the same zero pattern meets the margins", *feas.witness);

  const ScalingProblem sp = ScalingProblem::make(std::move(tensor), std::move(targets));
  const BlockVector start = x0 ? *x0 : sp.zero_point();
  BridgeSolution sol;
  sol.scaling = sp.frame.degenerate() ? solve_modified(sp, start, options) : solve_positive_case(sp, start, options);

  const DenseMatrix s = sol.scaling.scaled.to_matrix();
  sol.B = DenseMatrix(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) sol.B(i, j) = s(i, j) / p.a[j];

  const Vector ba = sol.B * p.a;
  for (std::size_t i = 0; i < ba.size(); ++i) sol.row_residual = std::max(sol.row_residual, std::abs(ba[i] - p.b[i]));
  for (std::size_t j = 0; j < sol.B.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < sol.B.rows(); ++i) col += sol.B(i, j);
    sol.column_residual = std::max(sol.column_residual, std::abs(col - p.c[j]));
  }
  return sol;
}

}  // namespace slicescale
