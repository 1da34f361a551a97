#include "slicescale/quadratic.hpp"

#include <random>

#include "slicescale/error.hpp"

namespace slicescale {

QuadraticProblem::QuadraticProblem(DenseMatrix a, Vector b, double c) : a_(std::move(a)), b_(std::move(b)), c_(c) {
  const std::size_t n = a_.rows();
  if (n < 2 || a_.cols() != n || b_.size() != n) throw Error("quadratic: need square A (n >= 2) and b of length n");
  const SymmetricEigen eig = symmetric_eigs(a_);
  if (!(eig.values.front() > 0.0)) throw Error("quadratic: A is not positive definite");
}

QuadraticProblem QuadraticProblem::random(std::size_t n, std::uint64_t seed, bool diagonal) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix a(n, n);
  if (diagonal) {
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.5 + 2.0 * (u(rng) + 1.0);
  } else {
    // G G^T / n + I/2 keeps the condition number moderate.
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = u(rng);
    a = g * g.transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
  }
  Vector b(n);
  for (double& v : b) v = 2.0 * u(rng);
  return {std::move(a), std::move(b)};
}

BlockVector QuadraticProblem::point(const Vector& x) const {
  if (x.size() != a_.rows()) throw Error("quadratic: point has wrong dimension");
  return {std::vector<std::size_t>(a_.rows(), 1), x};
}

Vector QuadraticProblem::minimizer() const {
  const SymmetricEigen eig = symmetric_eigs(a_);
  // x* = -A^{-1} b / 2 = -sum_i (q_i . b) / (2 lambda_i) q_i
  Vector x(a_.rows(), 0.0);
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double coef = -dot(eig.vectors[i], b_) / (2.0 * eig.values[i]);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += coef * eig.vectors[i][k];
  }
  return x;
}

double QuadraticProblem::objective(const BlockVector& x) const {
  const Vector ax = a_ * x.values();
  return dot(x.values(), ax) + dot(b_, x.values()) + c_;
}

double QuadraticProblem::partial_derivative(const Vector& x, std::size_t j) const {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += a_(j, k) * x[k];
  return 2.0 * s + b_[j];
}

Vector QuadraticProblem::block_gradient(const BlockVector& x, std::size_t j) const {
  return {partial_derivative(x.values(), j)};
}

std::vector<Vector> QuadraticProblem::block_gradients(const BlockVector& x) const {
  std::vector<Vector> g;
  for (std::size_t j = 0; j < num_blocks(); ++j) g.push_back({partial_derivative(x.values(), j)});
  return g;
}

BlockVector QuadraticProblem::partial_minimize(const BlockVector& x, std::size_t j) const {
  double off = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != j) off += a_(j, k) * x.values()[k];
  BlockVector next = x;
  next.values()[j] = -(b_[j] + 2.0 * off) / (2.0 * a_(j, j));
  return next;
}

BlockStep QuadraticProblem::step_block(const BlockVector& x, std::size_t j) const {
  BlockVector next = partial_minimize(x, j);
  // f(x + delta e_j) - f(x) = delta g_j + A_jj delta^2
  const double delta = next.values()[j] - x.values()[j];
  const double g = partial_derivative(x.values(), j);
  return {std::move(next), -(delta * g + a_(j, j) * delta * delta)};
}

DenseMatrix QuadraticProblem::hessian(const BlockVector&) const {
  DenseMatrix h = a_;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) *= 2.0;
  return h;
}

}  // namespace slicescale
