#pragma once

#include <cstdint>

#include "slicescale/blockmin.hpp"

namespace slicescale {

// f(x) = x^T A x + b^T x + c with A symmetric positive definite and one
// block per coordinate (d = n). Coordinate minimization is exact.
class QuadraticProblem final : public BlockProblem {
 public:
  QuadraticProblem(DenseMatrix a, Vector b, double c = 0.0);

  // Seeded random SPD matrix; diagonal when `diagonal` is set.
  static QuadraticProblem random(std::size_t n, std::uint64_t seed, bool diagonal = false);

  std::size_t dimension() const { return a_.rows(); }
  const DenseMatrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  BlockVector point(const Vector& x) const;
  // Exact minimizer -A^{-1} b / 2, by Jacobi-eigendecomposition.
  Vector minimizer() const;

  std::size_t num_blocks() const override { return a_.rows(); }
  double objective(const BlockVector& x) const override;
  Vector block_gradient(const BlockVector& x, std::size_t j) const override;
  std::vector<Vector> block_gradients(const BlockVector& x) const override;
  BlockVector partial_minimize(const BlockVector& x, std::size_t j) const override;
  BlockStep step_block(const BlockVector& x, std::size_t j) const override;
  bool has_hessian() const override { return true; }
  DenseMatrix hessian(const BlockVector& x) const override;

 private:
  double partial_derivative(const Vector& x, std::size_t j) const;

  DenseMatrix a_;
  Vector b_;
  double c_;
};

}  // namespace slicescale
