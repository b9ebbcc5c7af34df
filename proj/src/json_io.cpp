#include "fplb/json_io.hpp"

#include <stdexcept>

namespace fplb {

Json to_json(const Rational& value) { return to_string(value); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(to_string(e));
  return out;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(to_json(m.row(r)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  throw std::invalid_argument("expected a \"p/q\" string, got " + j.dump());
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array for a vector");
  std::vector<Rational> entries;
  entries.reserve(j.size());
  for (const auto& e : j) entries.push_back(rational_from_json(e));
  return Vector(std::move(entries));
}

Matrix matrix_from_json(const Json& j) {
  const Json& rows = j.is_object() ? j.at("entries") : j;
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix entries must be a non-empty array");
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = rows.front().size();
  Matrix m(n_rows, n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const Vector row = vector_from_json(rows[r]);
    if (row.size() != n_cols) throw DimensionError("ragged matrix in JSON");
    for (std::size_t c = 0; c < n_cols; ++c) m(r, c) = row[c];
  }
  if (j.is_object()) {
    if (j.contains("rows") && j.at("rows").get<std::size_t>() != n_rows) {
      throw DimensionError("\"rows\" does not match entries");
    }
    if (j.contains("cols") && j.at("cols").get<std::size_t>() != n_cols) {
      throw DimensionError("\"cols\" does not match entries");
    }
  }
  return m;
}

}  // namespace fplb
