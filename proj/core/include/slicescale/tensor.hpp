#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slicescale/blockvector.hpp"
#include "slicescale/numerics.hpp"

namespace slicescale {

// Dense d-mode nonnegative tensor, d >= 2 and every m_k >= 2. Values are
// stored in lexicographic index order with the last index fastest. The
// constructor rejects negative or non-finite values and zero slices.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(std::vector<std::size_t> dims, Vector values);

  static DenseTensor from_matrix(const DenseMatrix& m);

  std::size_t order() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t size() const { return values_.size(); }
  const Vector& values() const { return values_; }
  const std::vector<std::size_t>& strides() const { return strides_; }

  double total() const;
  DenseMatrix to_matrix() const;  // order() == 2 only

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  Vector values_;
};

// Calls fn(flat_index, multi_index) for every entry in storage order.
template <class Fn>
void for_each_index(const std::vector<std::size_t>& dims, Fn&& fn) {
  std::size_t total = 1;
  for (std::size_t m : dims) total *= m;
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, static_cast<const std::vector<std::size_t>&>(idx));
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
  }
}

// Positive target vectors s_1..s_d.
class SliceTargets {
 public:
  SliceTargets() = default;
  explicit SliceTargets(std::vector<Vector> vectors);

  std::size_t order() const { return vectors_.size(); }
  const Vector& operator[](std::size_t mode) const { return vectors_.at(mode); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  std::vector<std::size_t> dims() const;

 private:
  std::vector<Vector> vectors_;
};

// True where the tensor entry is positive.
class ZeroPattern {
 public:
  explicit ZeroPattern(const DenseTensor& t);

  const std::vector<std::size_t>& dims() const { return dims_; }
  bool positive(std::size_t flat) const { return mask_[flat] != 0; }
  std::size_t count_positive() const;

  friend bool operator==(const ZeroPattern&, const ZeroPattern&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::uint8_t> mask_;
};

inline constexpr double kScalingExponentLimit = 700.0;

// Mode-k slice sums (0-based mode).
Vector slice_sums(const DenseTensor& t, std::size_t mode);

// Entrywise b * exp(x_{1,i1} + ... + x_{d,id}). Throws NumericalError
// ("scaling overflow") if an exponent at a positive entry exceeds 700 in
// magnitude.
DenseTensor scale(const DenseTensor& t, const BlockVector& x);

// Common total of the target vectors. Throws Error listing the totals if they
// differ by more than 1e-10 relative.
double check_compatibility(const SliceTargets& s);

// s_1 x ... x s_d / total^(d-1); its mode-k slice sums are s_k.
DenseTensor rank_one_target(const SliceTargets& s);

}  // namespace slicescale
