#include "hh3/matrix_io.hpp"

#include <fstream>

#include "hh3/errors.hpp"

namespace hh3 {

QMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix JSON must be a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw Error("matrix rows must be non-empty arrays");
  const int cols = static_cast<int>(j[0].size());
  QMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      throw Error("ragged matrix JSON");
    }
    for (int c = 0; c < cols; ++c) {
      const auto& cell = j[i][c];
      if (cell.is_number_integer()) {
        m(i, c) = Rational(cell.get<long long>());
      } else if (cell.is_string()) {
        m(i, c) = Rational::parse(cell.get<std::string>());
      } else {
        throw Error("matrix entries must be integers or 'p/q' strings");
      }
    }
  }
  return m;
}

QMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read matrix file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in matrix file " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

nlohmann::json matrix_to_json(const QMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hh3
