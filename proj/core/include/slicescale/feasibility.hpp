#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "slicescale/blockvector.hpp"
#include "slicescale/tensor.hpp"

namespace slicescale {

enum class Verdict { scalable, not_scalable };
std::string_view to_string(Verdict v);

struct LpStats {
  std::size_t pivots = 0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  double phase_one_objective = 0.0;  // sum of artificials at the optimum
};

struct FeasibilityReport {
  Verdict verdict = Verdict::scalable;
  std::optional<BlockVector> witness;  // present iff not_scalable
  LpStats lp;
};

inline constexpr double kWitnessTolerance = 1e-9;
inline constexpr std::size_t kMaxSimplexPivots = 200000;

// Decides whether the tensor is positively diagonally equivalent to one
// with the target slice sums. A tensor is not scalable iff some x satisfies
//   x_{1,i1} + ... + x_{d,id} <= 0 where b > 0,   s_k . x_k = 0 for all k,
// and the sum of those pattern sums is <= -1; such an x is the witness.
// Throws Error if the simplex exceeds its pivot guard.
FeasibilityReport check_scalable(const DenseTensor& tensor, const SliceTargets& targets);

// All pattern sums <= 1e-9, |s_k . x_k| <= 1e-9, and total <= -1 + 1e-9.
bool verify_witness(const DenseTensor& tensor, const SliceTargets& targets, const BlockVector& x);

}  // namespace slicescale
