#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"
#include "matconvex/linalg.hpp"

namespace matconvex {

using nlohmann::json;

/// Shared matrix document:
///
///   { "dim": 4, "dims": [2, 2], "entries": [[[re, im], ...], ...] }
///
/// `dims` (tensor factorization, product == dim) is optional except for
/// state files. Unknown keys are rejected.
struct MatrixDocument {
  CMatrix entries;
  std::vector<Eigen::Index> dims;  // empty when absent
};

json matrix_to_json(const CMatrix& m, const std::vector<Eigen::Index>& dims = {});
json matrix_to_json(const HermitianMatrix& m, const std::vector<Eigen::Index>& dims = {});

/// Throws ParseError naming the offending field.
MatrixDocument matrix_from_json(const json& doc, const std::string& where = "matrix");
HermitianMatrix hermitian_from_json(const json& doc, const std::string& where = "matrix");

/// A JSON array of matrix documents.
std::vector<HermitianMatrix> tuple_from_json(const json& doc);
json tuple_to_json(const std::vector<HermitianMatrix>& tuple);

/// Parses a file, converting nlohmann parse errors (which carry line and
/// column) into ParseError.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace matconvex
