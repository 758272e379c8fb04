#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opsim/linalg.hpp"

namespace opsim {

using Json = nlohmann::json;

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order. Doubles
/// are written in shortest round-trip form, so save/load is bit-exact.
Json matrix_to_json(const Operator& A);
/// `pointer` prefixes error messages (JSON pointer of `j` in its document).
Operator matrix_from_json(const Json& j, const std::string& pointer = "");

Json read_json_file(const std::filesystem::path& path);
Operator load_matrix(const std::filesystem::path& path);
/// Writes `text` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace opsim
