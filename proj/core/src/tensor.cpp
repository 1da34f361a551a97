#include "slicescale/tensor.hpp"

#include <cmath>
#include <sstream>

#include "slicescale/error.hpp"

namespace slicescale {

DenseTensor::DenseTensor(std::vector<std::size_t> dims, Vector values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  if (dims_.size() < 2) throw Error("tensor must have at least 2 modes");
  std::size_t total = 1;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] < 2)
      throw Error("mode " + std::to_string(k) + " has dimension " + std::to_string(dims_[k]) + " (need >= 2)");
    total *= dims_[k];
  }
  if (values_.size() != total)
    throw Error("tensor has " + std::to_string(values_.size()) + " values, dims require " + std::to_string(total));
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("tensor entries must be finite and nonnegative");

  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size() - 1; k-- > 0;) strides_[k] = strides_[k + 1] * dims_[k + 1];

  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const Vector s = slice_sums(*this, k);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!(s[i] > 0.0))
        throw Error("zero slice (" + std::to_string(k) + ", " + std::to_string(i) + ")");
  }
}

DenseTensor DenseTensor::from_matrix(const DenseMatrix& m) { return {{m.rows(), m.cols()}, m.entries()}; }

double DenseTensor::total() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

DenseMatrix DenseTensor::to_matrix() const {
  if (order() != 2) throw Error("to_matrix: tensor is not 2-mode");
  return {dims_[0], dims_[1], values_};
}

SliceTargets::SliceTargets(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  for (std::size_t k = 0; k < vectors_.size(); ++k)
    for (double v : vectors_[k])
      if (!(v > 0.0) || !std::isfinite(v))
        throw Error("target vector " + std::to_string(k) + " has a non-positive entry");
}

std::vector<std::size_t> SliceTargets::dims() const {
  std::vector<std::size_t> d;
  for (const auto& v : vectors_) d.push_back(v.size());
  return d;
}

ZeroPattern::ZeroPattern(const DenseTensor& t) : dims_(t.dims()), mask_(t.size()) {
  for (std::size_t i = 0; i < t.size(); ++i) mask_[i] = t.values()[i] > 0.0 ? 1 : 0;
}

std::size_t ZeroPattern::count_positive() const {
  std::size_t n = 0;
  for (auto m : mask_) n += m;
  return n;
}

Vector slice_sums(const DenseTensor& t, std::size_t mode) {
  if (mode >= t.order())
    throw Error("mode " + std::to_string(mode) + " out of range for a " + std::to_string(t.order()) + "-mode tensor");
  Vector out(t.dim(mode), 0.0);
  const std::size_t stride = t.strides()[mode];
  const std::size_t m = t.dim(mode);
  const Vector& v = t.values();
  for (std::size_t flat = 0; flat < v.size(); ++flat) out[(flat / stride) % m] += v[flat];
  return out;
}

DenseTensor scale(const DenseTensor& t, const BlockVector& x) {
  if (x.block_dims() != t.dims()) throw Error("scale: block dimensions do not match tensor dimensions");
  Vector out(t.size());
  const Vector& b = t.values();
  for_each_index(t.dims(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    if (b[flat] == 0.0) {
      out[flat] = 0.0;
      return;
    }
    double e = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) e += x.block(k)[idx[k]];
    if (!(std::abs(e) <= kScalingExponentLimit)) throw NumericalError("scaling overflow");
    out[flat] = b[flat] * std::exp(e);
  });
  return {t.dims(), std::move(out)};
}

double check_compatibility(const SliceTargets& s) {
  if (s.order() == 0) throw Error("no target vectors");
  Vector totals;
  for (const auto& v : s.vectors()) {
    double t = 0.0;
    for (double e : v) t += e;
    totals.push_back(t);
  }
  const double ref = totals.front();
  for (double t : totals) {
    if (std::abs(t - ref) > 1e-10 * std::max(std::abs(ref), std::abs(t))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "incompatible target totals:";
      for (double u : totals) msg << ' ' << u;
      throw Error(msg.str());
    }
  }
  return ref;
}

DenseTensor rank_one_target(const SliceTargets& s) {
  const double total = check_compatibility(s);
  const std::vector<std::size_t> dims = s.dims();
  std::size_t n = 1;
  for (std::size_t m : dims) n *= m;
  Vector values(n);
  const double denom = std::pow(total, static_cast<double>(dims.size() - 1));
  for_each_index(dims, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    double v = 1.0;
    for (std::size_t k = 0; k < idx.size(); ++k) v *= s[k][idx[k]];
    values[flat] = v / denom;
  });
  return {dims, std::move(values)};
}

}  // namespace slicescale
