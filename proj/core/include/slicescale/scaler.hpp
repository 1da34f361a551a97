#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slicescale/blockmin.hpp"
#include "slicescale/scaling_objective.hpp"

namespace slicescale {

// Exact minimizer over block j of the objective restricted to U: with
// sigma_i the (j,i) slice sums of B(x) after zeroing block j,
// x~_i = log s_{j,i} - log sigma_i, shifted into L(s_j).
// Throws Error("zero slice encountered") if some sigma_i == 0.
Vector closed_form_block_update(const ScalingProblem& p, const BlockVector& x, std::size_t j);

// Standard algorithm on U (requires V0 = {0}). State: ambient point in U.
// Block gradients: coordinates in the L(s_j) bases.
class PositiveScalingProblem final : public BlockProblem {
 public:
  explicit PositiveScalingProblem(const ScalingProblem& p);

  std::size_t num_blocks() const override { return p_.tensor.order(); }
  double objective(const BlockVector& x) const override;
  Vector block_gradient(const BlockVector& x, std::size_t j) const override;
  std::vector<Vector> block_gradients(const BlockVector& x) const override;
  BlockVector partial_minimize(const BlockVector& x, std::size_t j) const override;
  BlockStep step_block(const BlockVector& x, std::size_t j) const override;
  bool has_hessian() const override { return true; }
  DenseMatrix hessian(const BlockVector& x) const override;

 private:
  const ScalingProblem& p_;
};

// Modified algorithm on V0perp (requires dim V0 > 0). State: ambient point
// in V0perp. Block gradients: coordinates in the W_j bases. The full gradient
// norm is measured in the V0perp basis.
class ProjectedScalingProblem final : public BlockProblem {
 public:
  explicit ProjectedScalingProblem(const ScalingProblem& p);

  std::size_t num_blocks() const override { return p_.tensor.order(); }
  double objective(const BlockVector& x) const override;
  Vector block_gradient(const BlockVector& x, std::size_t j) const override;
  std::vector<Vector> block_gradients(const BlockVector& x) const override;
  double gradient_norm(const BlockVector& x) const override;
  BlockVector partial_minimize(const BlockVector& x, std::size_t j) const override;
  BlockStep step_block(const BlockVector& x, std::size_t j) const override;
  bool has_hessian() const override { return true; }
  DenseMatrix hessian(const BlockVector& x) const override;

 private:
  const ScalingProblem& p_;
};

struct ScalingSolution {
  BlockVector x_star;
  DenseTensor scaled;  // normalized to the exact targets when converged
  double b = 0.0;      // common slice-sum proportionality of B(x*)
  bool normalized = false;
  IterateTrace trace;
  RunStatus status = RunStatus::max_iters_reached;
  Vector residuals;  // max_i |slice_sums(scaled, k)_i - s_{k,i}| per mode
  bool projected = false;  // solved on V0perp
};

// Throws Error if V0 != {0}.
ScalingSolution solve_positive_case(const ScalingProblem& p, const BlockVector& x0, const RunOptions& options = {});
// Throws Error if V0 = {0} or x0 is not in V0perp.
ScalingSolution solve_modified(const ScalingProblem& p, const BlockVector& x0, const RunOptions& options = {});
// Dispatches on dim V0, starting from zero.
ScalingSolution solve(const ScalingProblem& p, const RunOptions& options = {});

// Seeded random point of U (of V0perp for degenerate frames), entries O(radius).
BlockVector random_start(const ScalingProblem& p, std::uint64_t seed, double radius = 1.0);

struct Normalized {
  DenseTensor tensor;
  double b = 0.0;
};

inline constexpr double kProportionalitySpread = 1e-6;

// Divides B(x*) by b = total mass / target total so slice sums hit the
// targets. Throws NumericalError("not converged") if the ratios
// slice_sum / target disagree by more than 1e-6 relative across modes.
Normalized normalize(const ScalingProblem& p, const DenseTensor& scaled_raw);

Vector slice_residuals(const DenseTensor& t, const SliceTargets& targets);

struct SinkhornResult {
  DenseMatrix scaled;
  std::vector<DenseMatrix> iterates;  // after each half-step: row, column, row, ...
};

// Classical alternating row/column normalization, `rounds` full rounds.
SinkhornResult sinkhorn_reference(const DenseMatrix& matrix, const Vector& r, const Vector& c, std::size_t rounds);

}  // namespace slicescale
