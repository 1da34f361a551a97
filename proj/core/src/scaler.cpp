#include "slicescale/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "slicescale/error.hpp"

namespace slicescale {

namespace {

struct BlockUpdate {
  Vector sigma;  // slice sums of B(x) with block j zeroed
  Vector value;  // new block j, in L(s_j)
};

BlockUpdate compute_block_update(const ScalingProblem& p, const BlockVector& x, std::size_t j) {
  BlockVector zeroed = x;
  std::fill(zeroed.block(j).begin(), zeroed.block(j).end(), 0.0);
  BlockUpdate u;
  u.sigma = slice_sums(scale(p.tensor, zeroed), j);
  const Vector& s = p.targets[j];
  Vector tilde(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(u.sigma[i] > 0.0)) throw Error("zero slice encountered");
    tilde[i] = std::log(s[i]) - std::log(u.sigma[i]);
  }
  double st = 0.0;
  double s1 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    st += s[i] * tilde[i];
    s1 += s[i];
  }
  const double shift = st / s1;
  for (double& t : tilde) t -= shift;
  u.value = std::move(tilde);
  return u;
}

// e^t - 1 - t >= 0 without cancellation for small |t|.
double expm1_minus_linear(double t) {
  if (std::abs(t) < 1e-3) return t * t * (0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t / 120.0)));
  return std::expm1(t) - t;
}

// f(x) - f(x') where x' differs from x only in block j. With d = old - new,
//   f(x) - f(x') = sum_i sigma_i e^{new_i} (e^{d_i} - 1)
// and sigma_i e^{new_i} is proportional to s_i, so the linear part is a
// multiple of s_j . (old - new) = 0 on U. Dropping it leaves a sum of
// nonnegative terms that resolves decreases far below the rounding level
// of f itself.
double block_decrease(const BlockUpdate& u, std::span<const double> old_block) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.sigma.size(); ++i)
    s += u.sigma[i] * std::exp(u.value[i]) * expm1_minus_linear(old_block[i] - u.value[i]);
  return s;
}

Vector flatten(const std::vector<Vector>& blocks) {
  Vector flat;
  for (const auto& g : blocks) flat.insert(flat.end(), g.begin(), g.end());
  return flat;
}

}  // namespace

Vector closed_form_block_update(const ScalingProblem& p, const BlockVector& x, std::size_t j) {
  if (j >= p.tensor.order()) throw Error("closed_form_block_update: mode out of range");
  return compute_block_update(p, x, j).value;
}

// ---------------------------------------------------------------------------
// Standard algorithm

PositiveScalingProblem::PositiveScalingProblem(const ScalingProblem& p) : p_(p) {}

double PositiveScalingProblem::objective(const BlockVector& x) const { return slicescale::objective(p_, x); }

Vector PositiveScalingProblem::block_gradient(const BlockVector& x, std::size_t j) const {
  return restricted_gradient(p_, x, j);
}

std::vector<Vector> PositiveScalingProblem::block_gradients(const BlockVector& x) const {
  const auto ambient = ambient_gradients(p_, x);
  std::vector<Vector> g;
  for (std::size_t j = 0; j < ambient.size(); ++j) g.push_back(restricted_gradient_from(p_, ambient, j));
  return g;
}

BlockVector PositiveScalingProblem::partial_minimize(const BlockVector& x, std::size_t j) const {
  BlockVector next = x;
  next.set_block(j, closed_form_block_update(p_, x, j));
  return next;
}

BlockStep PositiveScalingProblem::step_block(const BlockVector& x, std::size_t j) const {
  const BlockUpdate u = compute_block_update(p_, x, j);
  BlockVector next = x;
  next.set_block(j, u.value);
  return {std::move(next), block_decrease(u, x.block(j))};
}

DenseMatrix PositiveScalingProblem::hessian(const BlockVector& x) const {
  return hessian_restricted(p_, x, p_.frame.u_basis);
}

// ---------------------------------------------------------------------------
// Modified algorithm

ProjectedScalingProblem::ProjectedScalingProblem(const ScalingProblem& p) : p_(p) {}

double ProjectedScalingProblem::objective(const BlockVector& x) const { return slicescale::objective(p_, x); }

Vector ProjectedScalingProblem::block_gradient(const BlockVector& x, std::size_t j) const {
  return w_gradient(p_, x, j);
}

std::vector<Vector> ProjectedScalingProblem::block_gradients(const BlockVector& x) const {
  const auto ambient = ambient_gradients(p_, x);
  std::vector<Vector> g;
  for (std::size_t j = 0; j < ambient.size(); ++j) g.push_back(w_gradient_from(p_, ambient, j));
  return g;
}

double ProjectedScalingProblem::gradient_norm(const BlockVector& x) const {
  return norm2(p_.frame.v0_perp_basis.coordinates(flatten(ambient_gradients(p_, x))));
}

BlockVector ProjectedScalingProblem::partial_minimize(const BlockVector& x, std::size_t j) const {
  BlockVector moved = x;
  moved.set_block(j, closed_form_block_update(p_, x, j));
  return p_.frame.project_p0(moved);
}

BlockStep ProjectedScalingProblem::step_block(const BlockVector& x, std::size_t j) const {
  const BlockUpdate u = compute_block_update(p_, x, j);
  BlockVector moved = x;
  moved.set_block(j, u.value);
  // f is invariant along V0, so f(P0 x') = f(x').
  return {p_.frame.project_p0(moved), block_decrease(u, x.block(j))};
}

DenseMatrix ProjectedScalingProblem::hessian(const BlockVector& x) const {
  return hessian_restricted(p_, x, p_.frame.v0_perp_basis);
}

// ---------------------------------------------------------------------------
// Solvers

Vector slice_residuals(const DenseTensor& t, const SliceTargets& targets) {
  Vector res;
  for (std::size_t k = 0; k < t.order(); ++k) {
    const Vector s = slice_sums(t, k);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - targets[k][i]));
    res.push_back(worst);
  }
  return res;
}

Normalized normalize(const ScalingProblem& p, const DenseTensor& scaled_raw) {
  const double b = scaled_raw.total() / p.target_total;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < scaled_raw.order(); ++k) {
    const Vector s = slice_sums(scaled_raw, k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ratio = s[i] / p.targets[k][i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  if ((hi - lo) > kProportionalitySpread * b) throw NumericalError("not converged");
  Vector v = scaled_raw.values();
  for (double& e : v) e /= b;
  return {DenseTensor(scaled_raw.dims(), std::move(v)), b};
}

namespace {

ScalingSolution finish(const ScalingProblem& p, RunResult run_result, bool projected) {
  ScalingSolution sol;
  sol.projected = projected;
  sol.status = run_result.status;
  sol.trace = std::move(run_result.trace);
  sol.x_star = std::move(run_result.x);
  const DenseTensor raw = scale(p.tensor, sol.x_star);
  sol.b = raw.total() / p.target_total;
  if (sol.status == RunStatus::converged) {
    Normalized n = normalize(p, raw);
    sol.scaled = std::move(n.tensor);
    sol.normalized = true;
  } else {
    // Total-mass rescale only; slice sums are not proportional to the targets.
    Vector v = raw.values();
    for (double& e : v) e /= sol.b;
    sol.scaled = DenseTensor(raw.dims(), std::move(v));
  }
  sol.residuals = slice_residuals(sol.scaled, p.targets);
  return sol;
}

void check_start(const ScalingProblem& p, const BlockVector& x0) {
  if (x0.block_dims() != p.tensor.dims()) throw Error("starting point does not match tensor dimensions");
  const double scale_ref = std::max(1.0, norm_inf(x0.values()));
  if (u_violation(p.targets, x0) > 1e-10 * scale_ref) throw Error("starting point is not in U (s_j . x_j != 0)");
}

}  // namespace

ScalingSolution solve_positive_case(const ScalingProblem& p, const BlockVector& x0, const RunOptions& options) {
  if (p.frame.degenerate()) throw Error("solve_positive_case: V0 is nontrivial; use solve_modified");
  check_start(p, x0);
  const PositiveScalingProblem problem(p);
  return finish(p, run(problem, x0, options), false);
}

ScalingSolution solve_modified(const ScalingProblem& p, const BlockVector& x0, const RunOptions& options) {
  if (!p.frame.degenerate()) throw Error("solve_modified: V0 is trivial; use solve_positive_case");
  check_start(p, x0);
  if (p.frame.distance_from_v0_perp(x0) > 1e-10 * std::max(1.0, norm2(x0.values())))
    throw Error("solve_modified: starting point is not in V0perp");
  const ProjectedScalingProblem problem(p);
  return finish(p, run(problem, x0, options), true);
}

ScalingSolution solve(const ScalingProblem& p, const RunOptions& options) {
  return p.frame.degenerate() ? solve_modified(p, p.zero_point(), options)
                              : solve_positive_case(p, p.zero_point(), options);
}

BlockVector random_start(const ScalingProblem& p, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  Vector coeffs(p.frame.u_basis.size());
  for (double& c : coeffs) c = u(rng);
  BlockVector x(p.tensor.dims(), p.frame.u_basis.combine(coeffs));
  return p.frame.degenerate() ? p.frame.project_p0(x) : x;
}

SinkhornResult sinkhorn_reference(const DenseMatrix& matrix, const Vector& r, const Vector& c, std::size_t rounds) {
  if (r.size() != matrix.rows() || c.size() != matrix.cols()) throw Error("sinkhorn_reference: target size mismatch");
  SinkhornResult out;
  DenseMatrix m = matrix;
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= r[i] / s;
    }
    out.iterates.push_back(m);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) *= c[j] / s;
    }
    out.iterates.push_back(m);
  }
  out.scaled = std::move(m);
  return out;
}

}  // namespace slicescale
