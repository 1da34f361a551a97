#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "slicescale/bridge.hpp"
#include "slicescale/tensor.hpp"

namespace slicescale::cli {

// Tensor file (JSON):
//   {"dims": [m1, ..., md], "values": [...], "targets": [[s1...], ..., [sd...]]}
// values are flat with the last index fastest; exact zeros are the zero
// pattern; "targets" is optional. A ".csv" file holds a matrix, one row per
// line, and never carries targets.
struct TensorFile {
  DenseTensor tensor;
  std::optional<SliceTargets> targets;
};

TensorFile parse_tensor_json(const nlohmann::json& j);
TensorFile read_tensor_file(const std::filesystem::path& path);
DenseMatrix read_csv_matrix(const std::filesystem::path& path);

nlohmann::json tensor_to_json(const DenseTensor& t, const SliceTargets* targets = nullptr);
void write_tensor_file(const std::filesystem::path& path, const DenseTensor& t, const SliceTargets* targets = nullptr);

// Accepts an inline JSON array of arrays, or a path to a JSON file holding
// either such an array or an object with a "targets" field.
SliceTargets parse_targets(const std::string& inline_or_path);

// Bridge file (JSON): {"A": [[...], ...], "a": [...], "b": [...], "c": [...]}.
// With `stochastic`, "c" is ignored and set to all ones.
BridgeProblem parse_bridge_json(const nlohmann::json& j, bool stochastic);
BridgeProblem read_bridge_file(const std::filesystem::path& path, bool stochastic);

nlohmann::json read_json_file(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const nlohmann::json& j);

// Raised for unreadable or malformed input files.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace slicescale::cli
