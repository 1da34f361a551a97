#pragma once

#include <optional>

#include "slicescale/blockmin.hpp"
#include "slicescale/error.hpp"
#include "slicescale/feasibility.hpp"
#include "slicescale/numerics.hpp"
#include "slicescale/scaler.hpp"

namespace slicescale {

// Find a diagonal scaling B = D1 A D2 of a nonnegative m x n matrix with
// B a = b and B^T 1 = c. Requires c . a = 1 . b and no zero row/column.
struct BridgeProblem {
  DenseMatrix A;
  Vector a;
  Vector b;
  Vector c;

  // Column-stochastic special case: c = 1.
  static BridgeProblem stochastic(DenseMatrix A, Vector a, Vector b);
  void validate() const;
};

struct ReducedBridge {
  DenseMatrix a_tilde;  // A D(a)
  Vector row_targets;   // b
  Vector col_targets;   // c o a
};

ReducedBridge reduce(const BridgeProblem& p);

// Raised when the reduced matrix cannot be scaled; carries the LP witness.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, BlockVector witness) : Error(what), witness_(std::move(witness)) {}
  const BlockVector& witness() const { return witness_; }

 private:
  BlockVector witness_;
};

struct BridgeSolution {
  DenseMatrix B;
  ScalingSolution scaling;
  double row_residual = 0.0;     // ||B a - b||_inf
  double column_residual = 0.0;  // ||B^T 1 - c||_inf
};

// Scales A D(a) to margins (b, c o a) and returns B = S D(a)^{-1}. Starts
// from zero unless x0 is given (ambient point in U, in V0perp when
// degenerate). Throws InfeasibleError if the pattern admits no solution.
BridgeSolution solve_bridge(const BridgeProblem& p, const RunOptions& options = {},
                            const std::optional<BlockVector>& x0 = std::nullopt);

}  // namespace slicescale
