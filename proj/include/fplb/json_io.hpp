#pragma once

// JSON interchange for exact values. Rationals travel as "p/q" strings in
// canonical lowest terms; matrices as {"rows", "cols", "entries"} with
// entries an array of row arrays.

#include <json.hpp>

#include "fplb/exact.hpp"

namespace fplb {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& value);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);

Rational rational_from_json(const Json& j);
Vector vector_from_json(const Json& j);
/// Accepts the {"rows","cols","entries"} object or a bare array of row arrays.
Matrix matrix_from_json(const Json& j);

}  // namespace fplb
