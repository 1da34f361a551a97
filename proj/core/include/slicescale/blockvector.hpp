#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slicescale/numerics.hpp"

namespace slicescale {

// A real vector partitioned into consecutive blocks x = (x_1, ..., x_d).
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(std::vector<std::size_t> block_dims);  // zeros
  BlockVector(std::vector<std::size_t> block_dims, Vector values);

  static BlockVector from_blocks(const std::vector<Vector>& blocks);

  std::size_t num_blocks() const { return dims_.size(); }
  std::size_t block_dim(std::size_t j) const { return dims_.at(j); }
  const std::vector<std::size_t>& block_dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> block(std::size_t j) const;
  std::span<double> block(std::size_t j);
  Vector block_copy(std::size_t j) const;
  void set_block(std::size_t j, std::span<const double> v);

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  std::vector<Vector> blocks() const;

  BlockVector& operator+=(const BlockVector& other);
  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator*(double a, BlockVector x) {
    for (double& v : x.values_) v *= a;
    return x;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  Vector values_;
};

}  // namespace slicescale
