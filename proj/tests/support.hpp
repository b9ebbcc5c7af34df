#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "fplb/exact.hpp"

namespace fplb::testing {

inline Rational R(const char* text) { return parse_rational(text); }

inline Vector V(std::initializer_list<const char*> entries) {
  std::vector<Rational> out;
  for (const char* e : entries) out.push_back(parse_rational(e));
  return Vector(std::move(out));
}

/// p/q with |p| <= span, 1 <= q <= span.
inline Rational random_rational(std::mt19937_64& rng, std::int64_t span = 1000) {
  std::uniform_int_distribution<std::int64_t> num(-span, span);
  std::uniform_int_distribution<std::int64_t> den(1, span);
  return make_rational(num(rng), den(rng));
}

/// A random probability vector with rational entries.
inline Vector random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> weight(0, 50);
  std::vector<std::int64_t> w(n);
  std::int64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& e : w) total += (e = weight(rng));
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = make_rational(w[i], total);
  return x;
}

/// A random skew-symmetric matrix with small rational entries.
inline Matrix random_skew(std::mt19937_64& rng, std::size_t n, std::int64_t span = 20) {
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      m(r, c) = random_rational(rng, span);
      m(c, r) = -m(r, c);
    }
  }
  return m;
}

}  // namespace fplb::testing
