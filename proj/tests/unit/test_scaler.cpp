#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "oracles.hpp"
#include "slicescale/scaler.hpp"

using namespace slicescale;
using doctest::Approx;

namespace {

ScalingProblem matrix_problem(Vector values, std::vector<Vector> targets = {{1, 1}, {1, 1}}) {
  return ScalingProblem::make(DenseTensor({2, 2}, std::move(values)), SliceTargets(std::move(targets)));
}

RunOptions keep() {
  RunOptions o;
  o.keep_iterates = true;
  return o;
}

}  // namespace

TEST_CASE("closed-form block update examples") {
  const ScalingProblem ones = matrix_problem({1, 1, 1, 1});
  const BlockVector x = BlockVector::from_blocks({{std::log(2.0), -std::log(2.0)}, {0, 0}});
  const Vector u = closed_form_block_update(ones, x, 0);
  CHECK(std::abs(u[0]) <= 1e-15);
  CHECK(std::abs(u[1]) <= 1e-15);

  const ScalingProblem p = matrix_problem({2, 1, 1, 1});
  const Vector v = closed_form_block_update(p, p.zero_point(), 0);
  CHECK(v[0] == Approx(0.5 * std::log(2.0 / 3.0)));
  CHECK(v[1] == Approx(0.5 * std::log(1.5)));
  CHECK_THROWS_AS(closed_form_block_update(p, p.zero_point(), 2), Error);
}

TEST_CASE("closed-form update zeroes the block gradient and stays in U") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 3}, oracle::random_positive(6, seed)),
                                                  SliceTargets({{1, 2}, {0.5, 1.5, 1}}));
    BlockVector x = random_start(p, seed);
    for (std::size_t j = 0; j < 2; ++j) {
      x.set_block(j, closed_form_block_update(p, x, j));
      CHECK(norm2(restricted_gradient(p, x, j)) <= 1e-12);
      CHECK(u_violation(p.targets, x) <= 1e-14);
    }
  }
}

TEST_CASE("solve_positive_case on a rank-one target takes zero steps") {
  const SliceTargets s({{1, 2, 3}, {2, 4}, {3, 3}});
  const ScalingProblem p = ScalingProblem::make(rank_one_target(s), s);
  const ScalingSolution sol = solve_positive_case(p, p.zero_point());
  CHECK(sol.status == RunStatus::converged);
  CHECK(sol.trace.steps() == 0);
  CHECK(sol.b == Approx(1.0));
  CHECK(norm_inf(sol.x_star.values()) == 0.0);
}

TEST_CASE("solve_positive_case on [[1,2],[3,4]] is doubly stochastic") {
  const ScalingProblem p = matrix_problem({1, 2, 3, 4});
  const ScalingSolution sol = solve_positive_case(p, p.zero_point());
  REQUIRE(sol.status == RunStatus::converged);
  CHECK(sol.normalized);
  const double t = oracle::doubly_stochastic_2x2(1, 2, 3, 4);
  CHECK(oracle::max_abs_diff(sol.scaled.values(), {t, 1 - t, 1 - t, t}) <= 1e-8);
  for (double r : sol.residuals) CHECK(r <= 1e-8);
  for (std::size_t k = 0; k < 2; ++k) CHECK(oracle::max_abs_diff(slice_sums(sol.scaled, k), {1, 1}) <= 1e-8);
}

TEST_CASE("solve_positive_case on random 3x3x3 tensors") {
  for (const auto& inst : checks::tensor_corpus()) {
    const ScalingProblem p = ScalingProblem::make(inst.tensor, inst.targets);
    const ScalingSolution sol = solve_positive_case(p, p.zero_point(), keep());
    REQUIRE(sol.status == RunStatus::converged);
    for (double r : sol.residuals) CHECK(r <= 1e-8);
    const RunResult rr{sol.x_star, sol.trace, sol.status};
    const auto g = checks::greedy_bound(sol.trace);
    CHECK_MESSAGE(g.ok, inst.name << ": " << g.detail);
    const auto d = checks::descent_and_stationarity(sol.trace, 1e-10);
    CHECK_MESSAGE(d.ok, inst.name << ": " << d.detail);
    const auto b = checks::convergence_bound(PositiveScalingProblem(p), rr);
    CHECK_MESSAGE(b.outcome.ok, inst.name << ": " << b.outcome.detail);
  }
}

TEST_CASE("random starts reach the same scaled tensor") {
  const ScalingProblem p = ScalingProblem::make(DenseTensor({3, 2, 2}, oracle::random_positive(12, 8)),
                                                SliceTargets({{1, 2, 1}, {2, 2}, {3, 1}}));
  const ScalingSolution a = solve_positive_case(p, p.zero_point());
  const ScalingSolution b = solve_positive_case(p, random_start(p, 11, 2.0));
  REQUIRE(a.status == RunStatus::converged);
  REQUIRE(b.status == RunStatus::converged);
  CHECK(oracle::max_abs_diff(a.scaled.values(), b.scaled.values()) <= 1e-8);
}

TEST_CASE("solve_modified on the identity pattern") {
  const ScalingProblem p = matrix_problem({1, 0, 0, 1});
  const ScalingSolution sol = solve_modified(p, p.zero_point());
  CHECK(sol.status == RunStatus::converged);
  CHECK(sol.trace.steps() == 0);
  CHECK(sol.projected);
  CHECK(sol.scaled.values() == Vector{1, 0, 0, 1});
}

TEST_CASE("solve_modified on a diagonal 3x3 pattern") {
  const ScalingProblem p = ScalingProblem::make(DenseTensor({3, 3}, {2, 0, 0, 0, 3, 0, 0, 0, 5}),
                                                SliceTargets({{1, 1, 1}, {1, 1, 1}}));
  const ScalingSolution sol = solve_modified(p, p.zero_point(), keep());
  REQUIRE(sol.status == RunStatus::converged);
  CHECK(oracle::max_abs_diff(sol.scaled.values(), {1, 0, 0, 0, 1, 0, 0, 0, 1}) <= 1e-8);
  for (const auto& x : sol.trace.iterates) CHECK(p.frame.distance_from_v0_perp(x) <= 1e-12);
}

TEST_CASE("solve_modified on patterned corpus: containment, invariants, pattern") {
  for (const auto& inst : checks::pattern_corpus()) {
    const ScalingProblem p = ScalingProblem::make(inst.tensor, inst.targets);
    if (!p.frame.degenerate()) continue;
    RunOptions o = keep();
    o.max_iters = 20000;
    const ScalingSolution sol = solve_modified(p, random_start(p, 3), o);
    const FeasibilityReport feas = check_scalable(inst.tensor, inst.targets);
    if (feas.verdict == Verdict::not_scalable) {
      CHECK_MESSAGE(sol.status != RunStatus::converged, inst.name);
      continue;
    }
    REQUIRE_MESSAGE(sol.status == RunStatus::converged, inst.name);
    for (const auto& x : sol.trace.iterates) CHECK(p.frame.distance_from_v0_perp(x) <= 1e-12);
    CHECK(ZeroPattern(sol.scaled) == ZeroPattern(inst.tensor));
    for (double r : sol.residuals) CHECK(r <= 1e-8);
    const auto g = checks::greedy_bound(sol.trace);
    CHECK_MESSAGE(g.ok, inst.name << ": " << g.detail);
    const auto d = checks::descent_and_stationarity(sol.trace, o.tol);
    CHECK_MESSAGE(d.ok, inst.name << ": " << d.detail);
  }
}

TEST_CASE("solver dispatch guards") {
  const ScalingProblem pos = matrix_problem({1, 2, 3, 4});
  const ScalingProblem deg = matrix_problem({1, 0, 0, 1});
  CHECK_THROWS_AS(solve_positive_case(deg, deg.zero_point()), Error);
  CHECK_THROWS_AS(solve_modified(pos, pos.zero_point()), Error);
  // Not in U.
  CHECK_THROWS_AS(solve_positive_case(pos, BlockVector::from_blocks({{1, 0}, {0, 0}})), Error);
  // In U, not in V0perp: the V0 direction itself.
  const BlockVector z(deg.tensor.dims(), deg.frame.v0_basis[0]);
  CHECK_THROWS_AS(solve_modified(deg, z), Error);
  CHECK(solve(deg).projected);
  CHECK_FALSE(solve(pos).projected);
}

TEST_CASE("normalize") {
  const ScalingProblem ones = matrix_problem({1, 1, 1, 1});
  const Normalized n = normalize(ones, ones.tensor);
  CHECK(n.b == Approx(2.0));
  CHECK(n.tensor.values() == Vector{0.5, 0.5, 0.5, 0.5});

  const SliceTargets s({{1, 3}, {2, 2}});
  const ScalingProblem r = ScalingProblem::make(rank_one_target(s), s);
  CHECK(normalize(r, r.tensor).b == Approx(1.0));

  const ScalingProblem m = matrix_problem({1, 2, 3, 4});
  CHECK_THROWS_WITH_AS(normalize(m, m.tensor), "not converged", NumericalError);
}

TEST_CASE("unconverged runs are not normalized") {
  const ScalingProblem p = matrix_problem({1, 2, 3, 4});
  RunOptions o;
  o.max_iters = 2;
  const ScalingSolution sol = solve(p, o);
  CHECK(sol.status == RunStatus::max_iters_reached);
  CHECK_FALSE(sol.normalized);
  CHECK(sol.scaled.total() == Approx(2.0));
}

TEST_CASE("sinkhorn_reference") {
  const auto one = sinkhorn_reference(DenseMatrix::from_rows({{1, 1}, {1, 1}}), {1, 1}, {1, 1}, 1);
  CHECK(one.scaled.entries() == Vector{0.5, 0.5, 0.5, 0.5});
  CHECK(one.iterates.size() == 2);

  const auto hundred = sinkhorn_reference(DenseMatrix::from_rows({{1, 2}, {3, 4}}), {1, 1}, {1, 1}, 100);
  const DenseMatrix& m = hundred.scaled;
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(m(i, 0) + m(i, 1) - 1.0) <= 1e-12);
    CHECK(std::abs(m(0, i) + m(1, i) - 1.0) <= 1e-12);
  }
  const double t = oracle::doubly_stochastic_2x2(1, 2, 3, 4);
  CHECK(m(0, 0) == Approx(t).epsilon(1e-12));
  CHECK_THROWS_AS(sinkhorn_reference(m, {1, 1, 1}, {1, 1}, 1), Error);
}

TEST_CASE("greedy iterates coincide with Sinkhorn half-steps up to a scalar") {
  const ScalingProblem p = matrix_problem({1, 2, 3, 4});
  const PositiveScalingProblem f(p);
  std::vector<BlockVector> xs{p.zero_point()};
  CHECK(select_block(f, xs[0]) == 0);
  for (int k = 0; k < 20; ++k) xs.push_back(step(f, xs.back()));
  const auto ref = sinkhorn_reference(DenseMatrix::from_rows({{1, 2}, {3, 4}}), {1, 1}, {1, 1}, 10);
  for (std::size_t k = 1; k <= 20; ++k) {
    const Vector b = scale(p.tensor, xs[k]).values();
    const Vector& want = ref.iterates[k - 1].entries();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < 4; ++i) {
      lo = std::min(lo, b[i] / want[i]);
      hi = std::max(hi, b[i] / want[i]);
    }
    CHECK_MESSAGE((hi - lo) / lo <= 1e-10, "k = " << k);
  }
}

TEST_CASE("--force style run on an unscalable pattern does not converge") {
  const ScalingProblem p = matrix_problem({1, 1, 0, 1});
  REQUIRE_FALSE(p.frame.degenerate());
  RunOptions o;
  o.max_iters = 5000;
  const ScalingSolution sol = solve(p, o);
  CHECK(sol.status != RunStatus::converged);
  CHECK_FALSE(sol.normalized);
}
