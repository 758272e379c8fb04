#include "opsim/matrix_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "opsim/error.hpp"

namespace opsim {

Json matrix_to_json(const Operator& A) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) data.push_back({A(i, j).real(), A(i, j).imag()});
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"data", std::move(data)}};
}

namespace {

long positive_int(const Json& j, const char* key, const std::string& pointer) {
  const std::string where = pointer + "/" + key;
  if (!j.contains(key)) throw InputError(where, "missing field");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long>() < 1) throw InputError(where, "must be a positive integer");
  return v.get<long>();
}

double finite_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(where, "non-finite entry");
  return x;
}

}  // namespace

Operator matrix_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw InputError(pointer, "matrix must be an object");
  const long rows = positive_int(j, "rows", pointer);
  const long cols = positive_int(j, "cols", pointer);
  if (!j.contains("data") || !j.at("data").is_array())
    throw InputError(pointer + "/data", "missing or not an array");
  const Json& data = j.at("data");
  if (static_cast<long>(data.size()) != rows * cols)
    throw InputError(pointer + "/data", "length " + std::to_string(data.size()) + " != rows*cols = " +
                                            std::to_string(rows * cols));
  Operator A(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const std::string where = pointer + "/data/" + std::to_string(k);
    const Json& e = data[k];
    if (e.is_number()) {
      A(k / cols, k % cols) = finite_number(e, where);
    } else if (e.is_array() && e.size() == 2) {
      A(k / cols, k % cols) = {finite_number(e[0], where + "/0"), finite_number(e[1], where + "/1")};
    } else {
      throw InputError(where, "entry must be [re, im]");
    }
  }
  return A;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("", path.string() + ": malformed JSON: " + e.what());
  }
}

Operator load_matrix(const std::filesystem::path& path) { return matrix_from_json(read_json_file(path)); }

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace opsim
