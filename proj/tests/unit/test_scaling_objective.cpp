#include <doctest.h>

#include <cmath>
#include <random>

#include "checks.hpp"
#include "oracles.hpp"
#include "slicescale/scaler.hpp"
#include "slicescale/scaling_objective.hpp"

using namespace slicescale;
using doctest::Approx;

namespace {

ScalingProblem ones2() {
  return ScalingProblem::make(DenseTensor({2, 2}, Vector(4, 1.0)), SliceTargets({{1, 1}, {1, 1}}));
}

ScalingProblem identity2() {
  return ScalingProblem::make(DenseTensor({2, 2}, {1, 0, 0, 1}), SliceTargets({{1, 1}, {1, 1}}));
}

Vector flatten(const std::vector<Vector>& blocks) {
  Vector out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

BlockVector random_ambient(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  std::size_t n = 0;
  for (auto m : dims) n += m;
  return BlockVector(dims, oracle::random_positive(n, seed, -1.0, 1.0));
}

}  // namespace

TEST_CASE("objective examples") {
  const ScalingProblem p = ones2();
  CHECK(objective(p, p.zero_point()) == Approx(4.0));
  const BlockVector x = BlockVector::from_blocks({{std::log(2.0), -std::log(2.0)}, {0, 0}});
  CHECK(objective(p, x) == Approx(5.0));
}

TEST_CASE("objective is invariant along V0") {
  const ScalingProblem p = identity2();
  REQUIRE(p.frame.degenerate());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BlockVector x = random_start(p, seed);
    for (const auto& z : p.frame.v0_basis.vectors()) {
      const BlockVector moved = x + BlockVector(p.tensor.dims(), Vector(z));
      CHECK(objective(p, moved) == Approx(objective(p, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("ambient gradient examples") {
  const ScalingProblem p = ones2();
  CHECK(block_gradient_ambient(p, p.zero_point(), 0) == slice_sums(p.tensor, 0));
  const ScalingProblem id = identity2();
  const BlockVector x = BlockVector::from_blocks({{std::log(2.0), 0}, {0, 0}});
  const Vector g = block_gradient_ambient(id, x, 0);
  CHECK(g[0] == Approx(2.0));
  CHECK(g[1] == Approx(1.0));
}

TEST_CASE("ambient gradient and Hessian match finite differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 2, 2}, oracle::random_positive(8, seed)),
                                                  SliceTargets({{0.5, 1.5}, {1, 1}, {1.2, 0.8}}));
    const BlockVector x = random_ambient(p.tensor.dims(), seed + 1000);
    auto f = [&](const Vector& v) { return objective(p, BlockVector(p.tensor.dims(), v)); };
    const Vector g = flatten(ambient_gradients(p, x));
    const Vector fd = oracle::fd_gradient(f, x.values());
    CHECK(oracle::max_abs_diff(g, fd) <= 1e-6 * norm2(g));
    const DenseMatrix h = hessian_ambient(p, x);
    const auto fdh = oracle::fd_hessian(f, x.values());
    double err = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) err = std::max(err, std::abs(h(i, j) - fdh[i][j]));
    CHECK(err <= 1e-4 * h.max_abs());
  }
}

TEST_CASE("Hessian diagonal is the concatenated slice sums") {
  const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 3}, oracle::random_positive(6, 9)),
                                                SliceTargets({{1, 2}, {1, 1, 1}}));
  const BlockVector x = random_ambient(p.tensor.dims(), 4);
  const DenseMatrix h = hessian_ambient(p, x);
  const Vector sums = flatten(ambient_gradients(p, x));
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(h(i, i) == Approx(sums[i]));
}

TEST_CASE("restricted Hessian of the ones matrix") {
  const ScalingProblem p = ones2();
  const DenseMatrix h = hessian_ambient(p, p.zero_point());
  const DenseMatrix want = DenseMatrix::from_rows({{2, 0, 1, 1}, {0, 2, 1, 1}, {1, 1, 2, 0}, {1, 1, 0, 2}});
  CHECK((h - want).max_abs() <= 1e-15);
  const DenseMatrix r = hessian_restricted(p, p.zero_point(), p.frame.u_basis);
  CHECK((r - DenseMatrix::identity(2) - DenseMatrix::identity(2)).max_abs() <= 1e-14);
  const auto e = symmetric_eigs(r);
  CHECK(e.values[0] == Approx(2.0));
  CHECK(e.values[1] == Approx(2.0));
}

TEST_CASE("restricted gradient examples") {
  const ScalingProblem p = ones2();
  const BlockVector x = BlockVector::from_blocks({{std::log(2.0), -std::log(2.0)}, {0, 0}});
  const Vector g = restricted_gradient(p, x, 0);
  REQUIRE(g.size() == 1);
  CHECK(std::abs(g[0]) == Approx(3.0 / std::sqrt(2.0)));
  CHECK(norm2(restricted_gradient(p, x, 1)) <= 1e-15);
  // Slice sums proportional to s_j: stationary.
  CHECK(norm2(restricted_gradient(p, p.zero_point(), 0)) <= 1e-15);
}

TEST_CASE("sum of squared restricted gradients equals the U-gradient norm") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalingProblem p = ScalingProblem::make(DenseTensor({3, 2, 2}, oracle::random_positive(12, seed)),
                                                  SliceTargets({{1, 2, 1}, {2, 2}, {3, 1}}));
    const BlockVector x = random_start(p, seed);
    double sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) sum += std::pow(norm2(restricted_gradient(p, x, j)), 2);
    const Vector full = p.frame.u_basis.coordinates(flatten(ambient_gradients(p, x)));
    CHECK(sum == Approx(dot(full, full)).epsilon(1e-12));
  }
}

TEST_CASE("w_gradient equals restricted_gradient when V0 is trivial") {
  const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 3}, oracle::random_positive(6, 2)),
                                                SliceTargets({{1, 2}, {1, 1, 1}}));
  REQUIRE_FALSE(p.frame.degenerate());
  const BlockVector x = random_start(p, 3);
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(oracle::max_abs_diff(w_gradient(p, x, j), restricted_gradient(p, x, j)) <= 1e-14);
}

TEST_CASE("w_gradient vanishes for the identity pattern at zero") {
  const ScalingProblem p = identity2();
  for (std::size_t j = 0; j < 2; ++j) CHECK(norm2(w_gradient(p, p.zero_point(), j)) <= 1e-15);
}

TEST_CASE("w_gradient matches directional finite differences and the norm inequality") {
  for (const auto& inst : checks::pattern_corpus()) {
    const ScalingProblem p = ScalingProblem::make(inst.tensor, inst.targets);
    if (!p.frame.degenerate()) continue;
    const ProjectedScalingProblem proj(p);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const BlockVector x = random_start(p, seed);
      double sum = 0.0;
      for (std::size_t j = 0; j < p.tensor.order(); ++j) {
        const Vector g = w_gradient(p, x, j);
        sum += dot(g, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Vector& w = p.frame.w_bases[j][i];
          auto f = [&](const Vector& t) {
            Vector v = x.values();
            for (std::size_t a = 0; a < v.size(); ++a) v[a] += t[0] * w[a];
            return objective(p, BlockVector(p.tensor.dims(), v));
          };
          CHECK(oracle::fd_gradient(f, {0.0})[0] == Approx(g[i]).epsilon(1e-6).scale(1.0));
        }
      }
      const double full = proj.gradient_norm(x);
      CHECK(full * full <= sum * (1 + 1e-12) + 1e-30);
    }
  }
}

TEST_CASE("build_frame: positive 2x2") {
  const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 2}, {1, 2, 3, 4}), SliceTargets({{1, 1}, {1, 1}}));
  CHECK_FALSE(p.frame.degenerate());
  CHECK(p.frame.v0_perp_basis.size() == 2);
  CHECK(p.frame.u_basis.size() == 2);
}

TEST_CASE("build_frame: identity pattern 2x2") {
  const ScalingProblem p = identity2();
  CHECK(p.frame.v_basis.size() == 2);
  CHECK(p.frame.u_basis.size() == 2);
  REQUIRE(p.frame.v0_basis.size() == 1);
  const Vector& z = p.frame.v0_basis[0];
  CHECK(oracle::max_abs_diff(z, {0.5, -0.5, -0.5, 0.5}) <= 1e-14);
  CHECK(p.frame.v0_perp_basis.size() == 1);
  for (std::size_t j = 0; j < 2; ++j) CHECK(p.frame.w_bases[j].size() == 1);
  // P0 is idempotent, symmetric and kills V0.
  const DenseMatrix& p0 = p.frame.p0;
  CHECK((p0 * p0 - p0).max_abs() <= 1e-12);
  CHECK(norm_inf(p0 * z) <= 1e-14);
}

TEST_CASE("dim W_j = m_j - 1 on random patterns without zero slices") {
  std::mt19937_64 rng(77);
  std::bernoulli_distribution keep(0.6);
  int tested = 0;
  while (tested < 40) {
    const std::vector<std::size_t> dims = tested % 2 ? std::vector<std::size_t>{3, 4}
                                                     : std::vector<std::size_t>{2, 3, 2};
    std::size_t n = 1;
    for (auto m : dims) n *= m;
    Vector v(n);
    for (double& e : v) e = keep(rng) ? 1.0 : 0.0;
    std::vector<Vector> s;
    for (auto m : dims) s.emplace_back(m, 1.0 / static_cast<double>(m));
    try {
      const DenseTensor t(dims, v);
      const SubspaceFrame f = build_frame(t, SliceTargets(s));
      for (std::size_t j = 0; j < dims.size(); ++j) CHECK(f.w_bases[j].size() == dims[j] - 1);
      CHECK(f.v0_perp_basis.size() + f.v0_basis.size() == f.u_basis.size());
      ++tested;
    } catch (const Error&) {
      // zero slice; draw again
    }
  }
}

TEST_CASE("frame validation") {
  CHECK_THROWS_AS(ScalingProblem::make(DenseTensor({2, 2}, {1, 1, 1, 1}), SliceTargets({{1, 1}, {1, 1, 1}})), Error);
  CHECK_THROWS_AS(ScalingProblem::make(DenseTensor({2, 2}, {1, 1, 1, 1}), SliceTargets({{1, 1}, {1, 2}})), Error);
  CHECK_THROWS_AS(ScalingProblem::make(DenseTensor({2, 2}, {1, 1, 1, 1}), SliceTargets({{1, 1}, {1, 1}, {1, 1}})), Error);
}

TEST_CASE("restricted Hessian is positive definite at random points") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalingProblem p = ScalingProblem::make(DenseTensor({2, 2, 2}, oracle::random_positive(8, seed)),
                                                  SliceTargets({{1, 1}, {1, 1}, {1, 1}}));
    const BlockVector x = random_start(p, seed, 2.0);
    CHECK(symmetric_eigs(hessian_restricted(p, x, p.frame.u_basis)).values.front() > 0.0);
  }
  for (const auto& inst : checks::pattern_corpus()) {
    const ScalingProblem p = ScalingProblem::make(inst.tensor, inst.targets);
    const BlockVector x = random_start(p, 1);
    CHECK(symmetric_eigs(hessian_restricted(p, x, p.frame.v0_perp_basis)).values.front() > 0.0);
  }
}
