#include "io.hpp"

#include <fstream>
#include <sstream>

namespace slicescale::cli {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

namespace {

std::vector<Vector> vectors_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string(what) + " must be an array of arrays");
  std::vector<Vector> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw IoError(std::string(what) + " must be an array of arrays");
    out.push_back(row.get<Vector>());
  }
  return out;
}

template <class F>
auto wrap_json(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed input: ") + e.what());
  }
}

}  // namespace

TensorFile parse_tensor_json(const json& j) {
  return wrap_json([&] {
    if (!j.is_object() || !j.contains("dims") || !j.contains("values"))
      throw IoError("tensor file needs \"dims\" and \"values\"");
    TensorFile f{DenseTensor(j.at("dims").get<std::vector<std::size_t>>(), j.at("values").get<Vector>()),
                 std::nullopt};
    if (j.contains("targets")) f.targets = SliceTargets(vectors_from_json(j.at("targets"), "targets"));
    return f;
  });
}

DenseMatrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Vector> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Vector row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError("bad CSV cell '" + cell + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV file " + path.string());
  return DenseMatrix::from_rows(rows);
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return {DenseTensor::from_matrix(read_csv_matrix(path)), std::nullopt};
  return parse_tensor_json(read_json_file(path));
}

json tensor_to_json(const DenseTensor& t, const SliceTargets* targets) {
  json j;
  j["dims"] = t.dims();
  j["values"] = t.values();
  if (targets) j["targets"] = targets->vectors();
  return j;
}

void write_tensor_file(const std::filesystem::path& path, const DenseTensor& t, const SliceTargets* targets) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << tensor_to_json(t, targets).dump() << '\n';
}

SliceTargets parse_targets(const std::string& inline_or_path) {
  const auto first = inline_or_path.find_first_not_of(" \t");
  if (first != std::string::npos && inline_or_path[first] == '[') {
    return wrap_json([&] { return SliceTargets(vectors_from_json(json::parse(inline_or_path), "targets")); });
  }
  const json j = read_json_file(inline_or_path);
  return wrap_json([&] {
    return SliceTargets(vectors_from_json(j.is_object() ? j.at("targets") : j, "targets"));
  });
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  return wrap_json([&] { return DenseMatrix::from_rows(vectors_from_json(j, "matrix")); });
}

BridgeProblem parse_bridge_json(const json& j, bool stochastic) {
  return wrap_json([&] {
    if (!j.is_object() || !j.contains("A") || !j.contains("a") || !j.contains("b"))
      throw IoError("bridge file needs \"A\", \"a\" and \"b\"");
    DenseMatrix A = matrix_from_json(j.at("A"));
    Vector a = j.at("a").get<Vector>();
    Vector b = j.at("b").get<Vector>();
    if (stochastic) return BridgeProblem::stochastic(std::move(A), std::move(a), std::move(b));
    if (!j.contains("c")) throw IoError("bridge file needs \"c\" (or use --stochastic)");
    return BridgeProblem{std::move(A), std::move(a), std::move(b), j.at("c").get<Vector>()};
  });
}

BridgeProblem read_bridge_file(const std::filesystem::path& path, bool stochastic) {
  return parse_bridge_json(read_json_file(path), stochastic);
}

}  // namespace slicescale::cli
