#include "slicescale/scaling_objective.hpp"

#include <cmath>

#include "slicescale/error.hpp"

namespace slicescale {

namespace {
std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> off(dims.size() + 1, 0);
  for (std::size_t j = 0; j < dims.size(); ++j) off[j + 1] = off[j] + dims[j];
  return off;
}
}  // namespace

double SubspaceFrame::distance_from_v0_perp(const BlockVector& x) const {
  const Vector px = p0 * x.values();
  double s = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) s += (x.values()[i] - px[i]) * (x.values()[i] - px[i]);
  return std::sqrt(s);
}

BlockVector SubspaceFrame::project_p0(const BlockVector& x) const { return {dims, p0 * x.values()}; }

Vector SubspaceFrame::embed_block(std::size_t j, std::span<const double> xj) const {
  const auto off = offsets_of(dims);
  if (xj.size() != dims.at(j)) throw Error("embed_block: length mismatch");
  Vector out(ambient_dim, 0.0);
  for (std::size_t i = 0; i < xj.size(); ++i) out[off[j] + i] = xj[i];
  return out;
}

SubspaceFrame build_frame(const DenseTensor& tensor, const SliceTargets& targets) {
  if (targets.dims() != tensor.dims()) throw Error("targets do not match tensor dimensions");
  SubspaceFrame f;
  f.dims = tensor.dims();
  const std::size_t d = f.dims.size();
  const auto off = offsets_of(f.dims);
  f.ambient_dim = off.back();

  // L(s_j) and U.
  std::vector<Vector> u_vectors;
  for (std::size_t j = 0; j < d; ++j) {
    f.mode_bases.push_back(null_space(DenseMatrix(1, f.dims[j], targets[j])));
    if (f.mode_bases.back().size() != f.dims[j] - 1) throw Error("build_frame: dim L(s_j) != m_j - 1");
    for (const auto& v : f.mode_bases.back().vectors()) u_vectors.push_back(f.embed_block(j, v));
  }
  f.u_basis = OrthonormalBasis(f.ambient_dim, u_vectors);

  // Pattern matrix: one row per positive entry. Distinct index tuples give
  // distinct rows, so no deduplication is needed.
  std::vector<Vector> pattern_rows;
  const Vector& b = tensor.values();
  for_each_index(f.dims, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    if (b[flat] == 0.0) return;
    Vector row(f.ambient_dim, 0.0);
    for (std::size_t k = 0; k < d; ++k) row[off[k] + idx[k]] = 1.0;
    pattern_rows.push_back(std::move(row));
  });
  f.v_basis = null_space(DenseMatrix::from_rows(pattern_rows));
  f.p_vperp = DenseMatrix::identity(f.ambient_dim) - projector_onto(f.v_basis);

  // V0 = V n U: the pattern rows stacked with the embedded s_j constraints.
  std::vector<Vector> stacked = pattern_rows;
  for (std::size_t j = 0; j < d; ++j) stacked.push_back(f.embed_block(j, targets[j]));
  f.v0_basis = null_space(DenseMatrix::from_rows(stacked));

  if (f.v0_basis.empty()) {
    f.v0_perp_basis = f.u_basis;
  } else {
    // V0perp = {Q_U c : Z^T Q_U c = 0}.
    const DenseMatrix qu = f.u_basis.as_matrix();
    const DenseMatrix constraint = f.v0_basis.as_matrix().transpose() * qu;
    const OrthonormalBasis coeffs = null_space(constraint);
    std::vector<Vector> vecs;
    for (const auto& c : coeffs.vectors()) vecs.push_back(qu * c);
    f.v0_perp_basis = OrthonormalBasis(f.ambient_dim, std::move(vecs));
  }
  if (f.v0_perp_basis.size() != f.u_basis.size() - f.v0_basis.size())
    throw Error("build_frame: inconsistent subspace dimensions");
  f.p0 = projector_onto(f.v0_perp_basis);

  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Vector> embedded;
    for (const auto& v : f.mode_bases[j].vectors()) embedded.push_back(f.embed_block(j, v));
    if (!f.degenerate()) {
      f.w_bases.emplace_back(f.ambient_dim, std::move(embedded));
      continue;
    }
    std::vector<Vector> images;
    for (const auto& e : embedded) images.push_back(f.p0 * e);
    OrthonormalBasis w = orthonormalize(images);
    if (w.size() != f.dims[j] - 1) throw Error("zero slice or invalid tensor");
    f.w_bases.push_back(std::move(w));
  }
  return f;
}

ScalingProblem ScalingProblem::make(DenseTensor tensor, SliceTargets targets) {
  if (targets.dims() != tensor.dims()) throw Error("targets do not match tensor dimensions");
  const double total = check_compatibility(targets);
  SubspaceFrame frame = build_frame(tensor, targets);
  return {std::move(tensor), std::move(targets), std::move(frame), total};
}

double u_violation(const SliceTargets& targets, const BlockVector& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < targets.order(); ++j) worst = std::max(worst, std::abs(dot(targets[j], x.block(j))));
  return worst;
}

double objective(const ScalingProblem& p, const BlockVector& x) { return scale(p.tensor, x).total(); }

Vector block_gradient_ambient(const ScalingProblem& p, const BlockVector& x, std::size_t j) {
  return slice_sums(scale(p.tensor, x), j);
}

std::vector<Vector> ambient_gradients(const ScalingProblem& p, const BlockVector& x) {
  const DenseTensor scaled = scale(p.tensor, x);
  std::vector<Vector> g;
  for (std::size_t j = 0; j < scaled.order(); ++j) g.push_back(slice_sums(scaled, j));
  return g;
}

Vector restricted_gradient_from(const ScalingProblem& p, const std::vector<Vector>& ambient, std::size_t j) {
  return p.frame.mode_bases.at(j).coordinates(ambient.at(j));
}

Vector restricted_gradient(const ScalingProblem& p, const BlockVector& x, std::size_t j) {
  return p.frame.mode_bases.at(j).coordinates(block_gradient_ambient(p, x, j));
}

Vector w_gradient_from(const ScalingProblem& p, const std::vector<Vector>& ambient, std::size_t j) {
  Vector flat;
  for (const auto& g : ambient) flat.insert(flat.end(), g.begin(), g.end());
  return p.frame.w_bases.at(j).coordinates(flat);
}

Vector w_gradient(const ScalingProblem& p, const BlockVector& x, std::size_t j) {
  return w_gradient_from(p, ambient_gradients(p, x), j);
}

DenseMatrix hessian_ambient(const ScalingProblem& p, const BlockVector& x) {
  const DenseTensor scaled = scale(p.tensor, x);
  const auto& dims = scaled.dims();
  const auto off = offsets_of(dims);
  const std::size_t d = dims.size();
  DenseMatrix h(off.back(), off.back());
  const Vector& v = scaled.values();
  for_each_index(dims, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    const double w = v[flat];
    if (w == 0.0) return;
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = off[j] + idx[j];
      h(r, r) += w;
      for (std::size_t k = j + 1; k < d; ++k) {
        const std::size_t c = off[k] + idx[k];
        h(r, c) += w;
        h(c, r) += w;
      }
    }
  });
  return h;
}

DenseMatrix hessian_restricted(const ScalingProblem& p, const BlockVector& x, const OrthonormalBasis& basis) {
  if (basis.ambient_dim() != p.frame.ambient_dim) throw Error("hessian_restricted: basis has wrong ambient dimension");
  const DenseMatrix q = basis.as_matrix();
  DenseMatrix r = q.transpose() * (hessian_ambient(p, x) * q);
  // Symmetrize away rounding.
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = i + 1; j < r.cols(); ++j) r(i, j) = r(j, i) = 0.5 * (r(i, j) + r(j, i));
  return r;
}

}  // namespace slicescale
