#pragma once

#include <cstddef>
#include <vector>

#include "slicescale/blockvector.hpp"
#include "slicescale/numerics.hpp"
#include "slicescale/tensor.hpp"

namespace slicescale {

// Orthonormal bases and projectors for the subspaces of the scaling problem.
// All vectors live in the ambient space R^{m_1} x ... x R^{m_d}.
//
//   L(s_j)  = {x_j : s_j . x_j = 0}
//   U       = L(s_1) x ... x L(s_d)
//   V       = {x : x_{1,i1} + ... + x_{d,id} = 0 wherever b > 0}
//   V0      = V n U, and V0perp its orthogonal complement inside U
//   W_j     = P0 (0, ..., L(s_j), ..., 0)
struct SubspaceFrame {
  std::vector<std::size_t> dims;
  std::size_t ambient_dim = 0;

  std::vector<OrthonormalBasis> mode_bases;  // L(s_j) in R^{m_j}
  OrthonormalBasis u_basis;
  OrthonormalBasis v_basis;
  OrthonormalBasis v0_basis;
  OrthonormalBasis v0_perp_basis;
  DenseMatrix p_vperp;  // projector onto V^perp
  DenseMatrix p0;       // projector onto V0perp
  std::vector<OrthonormalBasis> w_bases;

  bool degenerate() const { return !v0_basis.empty(); }
  // ||x - P0 x||.
  double distance_from_v0_perp(const BlockVector& x) const;
  BlockVector project_p0(const BlockVector& x) const;
  // Ambient embedding of a block vector of L(s_j) (zeros in other blocks).
  Vector embed_block(std::size_t j, std::span<const double> xj) const;
};

// Throws Error("zero slice or invalid tensor") if some dim W_j < m_j - 1.
SubspaceFrame build_frame(const DenseTensor& tensor, const SliceTargets& targets);

struct ScalingProblem {
  DenseTensor tensor;
  SliceTargets targets;
  SubspaceFrame frame;
  double target_total = 0.0;

  // Validates dimensions and compatibility, then builds the frame.
  static ScalingProblem make(DenseTensor tensor, SliceTargets targets);

  BlockVector zero_point() const { return BlockVector(tensor.dims()); }
};

// Largest |s_j . x_j| over modes.
double u_violation(const SliceTargets& targets, const BlockVector& x);

double objective(const ScalingProblem& p, const BlockVector& x);

// slice_sums(scale(tensor, x), j).
Vector block_gradient_ambient(const ScalingProblem& p, const BlockVector& x, std::size_t j);
// All d ambient block gradients from one scaled tensor.
std::vector<Vector> ambient_gradients(const ScalingProblem& p, const BlockVector& x);

// Ambient block gradient in the orthonormal basis of L(s_j).
Vector restricted_gradient(const ScalingProblem& p, const BlockVector& x, std::size_t j);
Vector restricted_gradient_from(const ScalingProblem& p, const std::vector<Vector>& ambient, std::size_t j);

// Directional derivatives along the orthonormal basis of W_j.
Vector w_gradient(const ScalingProblem& p, const BlockVector& x, std::size_t j);
Vector w_gradient_from(const ScalingProblem& p, const std::vector<Vector>& ambient, std::size_t j);

// Full ambient Hessian of the log-sum-exp objective: entry ((j,i),(k,l)) is
// the sum of scaled entries with mode-j index i and mode-k index l.
DenseMatrix hessian_ambient(const ScalingProblem& p, const BlockVector& x);
// Q^T H Q for the basis Q (vectors in ambient coordinates).
DenseMatrix hessian_restricted(const ScalingProblem& p, const BlockVector& x, const OrthonormalBasis& basis);

}  // namespace slicescale
