#include "slicescale/blockmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "slicescale/error.hpp"

namespace slicescale {

std::vector<Vector> BlockProblem::block_gradients(const BlockVector& x) const {
  std::vector<Vector> g;
  for (std::size_t j = 0; j < num_blocks(); ++j) g.push_back(block_gradient(x, j));
  return g;
}

double BlockProblem::gradient_norm(const BlockVector& x) const {
  double s = 0.0;
  for (const auto& g : block_gradients(x)) s += dot(g, g);
  return std::sqrt(s);
}

BlockStep BlockProblem::step_block(const BlockVector& x, std::size_t j) const {
  BlockVector next = partial_minimize(x, j);
  const double dec = objective(x) - objective(next);
  return {std::move(next), dec};
}

DenseMatrix BlockProblem::hessian(const BlockVector&) const {
  throw Error("problem does not provide a Hessian");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters_reached: return "max_iters_reached";
    case RunStatus::diverging: return "diverging";
  }
  return "unknown";
}

Vector IterateTrace::gaps_to_final() const {
  Vector gaps(entries.size(), 0.0);
  for (std::size_t k = entries.size() - 1; k-- > 0;) gaps[k] = gaps[k + 1] + entries[k].decrease;
  return gaps;
}

std::size_t select_block(std::span<const double> block_norms) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < block_norms.size(); ++j)
    if (block_norms[j] > block_norms[best]) best = j;
  return best;
}

namespace {
Vector norms_of(const std::vector<Vector>& grads) {
  Vector n;
  for (const auto& g : grads) n.push_back(norm2(g));
  return n;
}

std::string dump(const BlockVector& x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t j = 0; j < x.num_blocks(); ++j) {
    os << (j ? ", " : "") << '(';
    auto b = x.block(j);
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
    os << ')';
  }
  os << ']';
  return os.str();
}
}  // namespace

std::size_t select_block(const BlockProblem& problem, const BlockVector& x) {
  return select_block(norms_of(problem.block_gradients(x)));
}

BlockVector step(const BlockProblem& problem, const BlockVector& x) {
  return problem.partial_minimize(x, select_block(problem, x));
}

RunResult run(const BlockProblem& problem, const BlockVector& x0, const RunOptions& options) {
  if (!(options.tol > 0.0) || options.max_iters < 1) throw Error("invalid run options: need tol > 0 and max_iters >= 1");

  RunResult result;
  result.x = x0;
  for (std::size_t k = 0;; ++k) {
    TraceEntry e;
    e.objective = problem.objective(result.x);
    e.block_norms = norms_of(problem.block_gradients(result.x));
    e.gradient_norm = problem.gradient_norm(result.x);
    bool finite = std::isfinite(e.objective) && std::isfinite(e.gradient_norm);
    for (double n : e.block_norms) finite = finite && std::isfinite(n);
    if (!finite)
      throw NumericalError("numerical overflow at iterate " + std::to_string(k) + ": x = " + dump(result.x));
    if (options.keep_iterates) result.trace.iterates.push_back(result.x);

    if (e.gradient_norm <= options.tol) {
      result.status = RunStatus::converged;
    } else if (k >= options.max_iters) {
      result.status = RunStatus::max_iters_reached;
    } else if (norm_inf(result.x.values()) > options.divergence_guard) {
      result.status = RunStatus::diverging;
    } else {
      const std::size_t j =
          options.rule == BlockRule::greedy ? select_block(e.block_norms) : k % problem.num_blocks();
      BlockStep s = problem.step_block(result.x, j);
      e.block = j;
      e.decrease = s.decrease;
      result.trace.entries.push_back(std::move(e));
      result.x = std::move(s.next);
      continue;
    }
    result.trace.entries.push_back(std::move(e));
    return result;
  }
}

ConvergenceBound ConvergenceBound::make(std::size_t d, double alpha, double beta, double grad0_norm) {
  if (d < 2 || !(alpha > 0.0) || !(beta >= alpha)) throw Error("invalid bound data");
  ConvergenceBound b;
  b.d = d;
  b.alpha = alpha;
  b.beta = beta;
  b.kappa = beta / alpha;
  b.grad0_norm = grad0_norm;
  b.first_factor = 1.0 - 1.0 / (static_cast<double>(d) * b.kappa);
  b.later_factor = 1.0 - 1.0 / (static_cast<double>(d - 1) * b.kappa);
  return b;
}

double theoretical_bound(const ConvergenceBound& bound, std::size_t k, double initial_gap) {
  if (k == 0 || bound.d < 2 || !(bound.alpha > 0.0) || !(bound.kappa >= 1.0)) throw Error("invalid bound data");
  const double d = static_cast<double>(bound.d);
  double value = initial_gap * (1.0 - 1.0 / (d * bound.kappa));
  for (std::size_t i = 1; i < k; ++i) {
    const double kappa_i = i <= bound.kappa_per_step.size() ? bound.kappa_per_step[i - 1] : bound.kappa;
    if (!(kappa_i >= 1.0)) throw Error("invalid bound data");
    value *= 1.0 - 1.0 / ((d - 1.0) * kappa_i);
  }
  return value;
}

double theoretical_bound(const ConvergenceBound& bound, std::size_t k) {
  if (!(bound.alpha > 0.0)) throw Error("invalid bound data");
  return theoretical_bound(bound, k, bound.grad0_norm * bound.grad0_norm / (2.0 * bound.alpha));
}

double distance_bound(const ConvergenceBound& bound, std::size_t k, double alpha_k) {
  if (!(alpha_k > 0.0)) throw Error("invalid bound data");
  return theoretical_bound(bound, k) * 2.0 / alpha_k;
}

std::vector<BlockVector> sublevel_samples(const std::vector<BlockVector>& iterates, const BlockVector& x_final,
                                          std::size_t extra, std::uint64_t seed) {
  std::vector<BlockVector> pts = iterates;
  pts.push_back(x_final);
  if (iterates.empty()) return pts;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, iterates.size() - 1);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (std::size_t s = 0; s < extra; ++s) {
    const BlockVector& a = iterates[pick(rng)];
    const BlockVector& b = iterates[pick(rng)];
    const double w = weight(rng);
    pts.push_back(w * a + (1.0 - w) * b);
  }
  return pts;
}

std::pair<double, double> estimate_alpha_beta(const BlockProblem& problem, const std::vector<BlockVector>& points) {
  if (points.empty()) throw Error("estimate_alpha_beta: no sample points");
  double alpha = std::numeric_limits<double>::infinity();
  double beta = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const SymmetricEigen eig = symmetric_eigs(problem.hessian(p));
    if (eig.values.empty()) throw Error("estimate_alpha_beta: empty Hessian");
    if (!(eig.values.front() > 0.0)) throw Error("not strictly convex at sample");
    alpha = std::min(alpha, eig.values.front());
    beta = std::max(beta, eig.values.back());
  }
  return {alpha, beta};
}

}  // namespace slicescale
