#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "slicescale/blockvector.hpp"
#include "slicescale/numerics.hpp"

namespace slicescale {

// Result of exactly minimizing the objective over one block.
struct BlockStep {
  BlockVector next;
  // f(x) - f(next), computed without cancellation where the problem can.
  double decrease = 0.0;
};

// A strictly convex objective split into d blocks whose partial minimizers
// are available in closed form (or to a per-problem tolerance). Block
// gradients are expressed in the problem's working coordinates; the state
// itself may carry a different layout (e.g. ambient coordinates).
class BlockProblem {
 public:
  virtual ~BlockProblem() = default;

  virtual std::size_t num_blocks() const = 0;
  virtual double objective(const BlockVector& x) const = 0;
  virtual Vector block_gradient(const BlockVector& x, std::size_t j) const = 0;
  virtual std::vector<Vector> block_gradients(const BlockVector& x) const;
  // Norm of the full gradient. Defaults to the root sum of squared block
  // gradient norms, which is exact when the blocks are orthogonal.
  virtual double gradient_norm(const BlockVector& x) const;

  // x with block j replaced by its partial minimizer (projected, for
  // problems living on a subspace).
  virtual BlockVector partial_minimize(const BlockVector& x, std::size_t j) const = 0;
  virtual BlockStep step_block(const BlockVector& x, std::size_t j) const;

  // Accuracy to which partial_minimize zeroes the block gradient.
  virtual double partial_tolerance() const { return 1e-12; }

  virtual bool has_hessian() const { return false; }
  // Hessian in the working coordinates.
  virtual DenseMatrix hessian(const BlockVector& x) const;
};

enum class RunStatus { converged, max_iters_reached, diverging };
std::string_view to_string(RunStatus s);

enum class BlockRule { greedy, cyclic };

struct RunOptions {
  double tol = 1e-10;
  std::size_t max_iters = 10000;
  // Stop with status diverging once max|x_k| exceeds this.
  double divergence_guard = 1e3;
  bool keep_iterates = false;
  BlockRule rule = BlockRule::greedy;  // cyclic is a reference mode for tests
};

// State of the run at x_k. `block` and `decrease` describe the step taken
// from x_k and are absent for the final entry.
struct TraceEntry {
  double objective = 0.0;
  Vector block_norms;
  double gradient_norm = 0.0;
  std::optional<std::size_t> block;
  double decrease = 0.0;
};

struct IterateTrace {
  std::vector<TraceEntry> entries;
  std::vector<BlockVector> iterates;  // filled when RunOptions::keep_iterates

  std::size_t steps() const { return entries.empty() ? 0 : entries.size() - 1; }
  // f(x_k) - f(x_final) for k = 0..steps(), summed from the recorded decreases.
  Vector gaps_to_final() const;
};

struct RunResult {
  BlockVector x;
  IterateTrace trace;
  RunStatus status = RunStatus::max_iters_reached;
};

// Index of the largest norm; ties go to the smallest index.
std::size_t select_block(std::span<const double> block_norms);
std::size_t select_block(const BlockProblem& problem, const BlockVector& x);

// One greedy step.
BlockVector step(const BlockProblem& problem, const BlockVector& x);

// Throws NumericalError("numerical overflow ...") with an iterate dump if
// the objective or a gradient becomes non-finite.
RunResult run(const BlockProblem& problem, const BlockVector& x0, const RunOptions& options = {});

// Geometric-rate certificate built from Hessian eigenvalue bounds on the
// initial sublevel set.
struct ConvergenceBound {
  std::size_t d = 2;
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 1.0;
  double grad0_norm = 0.0;
  double first_factor = 0.0;  // 1 - 1/(d kappa)
  double later_factor = 0.0;  // 1 - 1/((d-1) kappa)
  // Optional refinement: kappa(t_i) for i = 1, 2, ...; used in place of kappa
  // for the later factors when present.
  Vector kappa_per_step;

  static ConvergenceBound make(std::size_t d, double alpha, double beta, double grad0_norm);
};

// (||grad f(x0)||^2 / (2 alpha)) (1 - 1/(d kappa)) prod_{i=1}^{k-1} (1 - 1/((d-1) kappa_i)).
// Throws Error("invalid bound data") for kappa < 1, alpha <= 0 or k == 0.
double theoretical_bound(const ConvergenceBound& bound, std::size_t k);
// Same product with an explicit bound on f(x0) - f(x*) as leading factor.
double theoretical_bound(const ConvergenceBound& bound, std::size_t k, double initial_gap);
// Bound on ||x_k - x*||^2: the objective-gap bound times 2 / alpha_k.
double distance_bound(const ConvergenceBound& bound, std::size_t k, double alpha_k);

// Sample points for alpha/beta estimation: all given iterates, the final
// point, and `extra` random points on segments between recorded iterates.
std::vector<BlockVector> sublevel_samples(const std::vector<BlockVector>& iterates, const BlockVector& x_final,
                                          std::size_t extra = 16, std::uint64_t seed = 0);

// Min of smallest / max of largest Hessian eigenvalue over the points.
// Throws Error("not strictly convex at sample") on a non-positive eigenvalue.
std::pair<double, double> estimate_alpha_beta(const BlockProblem& problem, const std::vector<BlockVector>& points);

}  // namespace slicescale
