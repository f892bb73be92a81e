#pragma once

#include <string>

#include "json.hpp"
#include "hh3/matrix.hpp"

namespace hh3 {

/// Matrix file format: JSON array of rows; entries are integers or strings
/// "p/q" (exact rationals). Example: [[0, 1], ["-1/2", 0]].
QMatrix matrix_from_json(const nlohmann::json& j);
QMatrix load_matrix_file(const std::string& path);

/// Serializes with entries as exact strings so reports round-trip.
nlohmann::json matrix_to_json(const QMatrix& m);

}  // namespace hh3
