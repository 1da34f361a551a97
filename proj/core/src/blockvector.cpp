#include "slicescale/blockvector.hpp"

#include <algorithm>
#include <string>

#include "slicescale/error.hpp"

namespace slicescale {

namespace {
std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> off(dims.size() + 1, 0);
  for (std::size_t j = 0; j < dims.size(); ++j) off[j + 1] = off[j] + dims[j];
  return off;
}
}  // namespace

BlockVector::BlockVector(std::vector<std::size_t> block_dims)
    : dims_(std::move(block_dims)), offsets_(offsets_of(dims_)), values_(offsets_.back(), 0.0) {}

BlockVector::BlockVector(std::vector<std::size_t> block_dims, Vector values)
    : dims_(std::move(block_dims)), offsets_(offsets_of(dims_)), values_(std::move(values)) {
  if (values_.size() != offsets_.back())
    throw Error("BlockVector: " + std::to_string(values_.size()) + " values for total block length " +
                std::to_string(offsets_.back()));
}

BlockVector BlockVector::from_blocks(const std::vector<Vector>& blocks) {
  std::vector<std::size_t> dims;
  Vector values;
  for (const auto& b : blocks) {
    dims.push_back(b.size());
    values.insert(values.end(), b.begin(), b.end());
  }
  return {std::move(dims), std::move(values)};
}

std::span<const double> BlockVector::block(std::size_t j) const {
  return std::span<const double>(values_).subspan(offsets_.at(j), dims_.at(j));
}

std::span<double> BlockVector::block(std::size_t j) {
  return std::span<double>(values_).subspan(offsets_.at(j), dims_.at(j));
}

Vector BlockVector::block_copy(std::size_t j) const {
  auto b = block(j);
  return {b.begin(), b.end()};
}

void BlockVector::set_block(std::size_t j, std::span<const double> v) {
  if (v.size() != dims_.at(j)) throw Error("BlockVector::set_block: length mismatch in block " + std::to_string(j));
  std::copy(v.begin(), v.end(), block(j).begin());
}

std::vector<Vector> BlockVector::blocks() const {
  std::vector<Vector> out;
  for (std::size_t j = 0; j < dims_.size(); ++j) out.push_back(block_copy(j));
  return out;
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  if (other.dims_ != dims_) throw Error("BlockVector: block layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

}  // namespace slicescale
