#include "matconvex/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace matconvex {

namespace {

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError("unknown field '" + key + "'", where + "." + key);
  }
}

}  // namespace

json matrix_to_json(const CMatrix& m, const std::vector<Eigen::Index>& dims) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  json doc = {{"dim", m.rows()}};
  if (!dims.empty()) doc["dims"] = dims;
  doc["entries"] = std::move(rows);
  return doc;
}

json matrix_to_json(const HermitianMatrix& m, const std::vector<Eigen::Index>& dims) {
  return matrix_to_json(m.matrix(), dims);
}

MatrixDocument matrix_from_json(const json& doc, const std::string& where) {
  if (!doc.is_object()) throw ParseError("matrix document must be an object", where);
  reject_unknown_keys(doc, {"dim", "dims", "entries"}, where);
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long>() < 1) {
    throw ParseError("'dim' must be a positive integer", where + ".dim");
  }
  const auto n = doc["dim"].get<Eigen::Index>();

  MatrixDocument out;
  if (doc.contains("dims")) {
    const auto& d = doc["dims"];
    if (!d.is_array() || d.empty()) throw ParseError("'dims' must be a non-empty array", where + ".dims");
    Eigen::Index prod = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_number_integer() || d[i].get<long>() < 1) {
        throw ParseError("factor dimensions must be positive integers",
                         where + ".dims[" + std::to_string(i) + "]");
      }
      out.dims.push_back(d[i].get<Eigen::Index>());
      prod *= out.dims.back();
    }
    if (prod != n) throw ParseError("product of 'dims' does not equal 'dim'", where + ".dims");
  }

  if (!doc.contains("entries") || !doc["entries"].is_array() ||
      doc["entries"].size() != static_cast<std::size_t>(n)) {
    throw ParseError("'entries' must be an array of dim rows", where + ".entries");
  }
  out.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = doc["entries"][i];
    const std::string row_where = where + ".entries[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw ParseError("row must have dim entries", row_where);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& z = row[j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ParseError("entry must be a [re, im] pair",
                         row_where + "[" + std::to_string(j) + "]");
      }
      out.entries(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return out;
}

HermitianMatrix hermitian_from_json(const json& doc, const std::string& where) {
  auto parsed = matrix_from_json(doc, where);
  try {
    return HermitianMatrix(parsed.entries);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), where + ".entries");
  }
}

std::vector<HermitianMatrix> tuple_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) throw ParseError("tuple must be a non-empty array", "tuple");
  std::vector<HermitianMatrix> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(hermitian_from_json(doc[i], "tuple[" + std::to_string(i) + "]"));
  }
  return out;
}

json tuple_to_json(const std::vector<HermitianMatrix>& tuple) {
  json arr = json::array();
  for (const auto& m : tuple) arr.push_back(matrix_to_json(m));
  return arr;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), path.string());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace matconvex
