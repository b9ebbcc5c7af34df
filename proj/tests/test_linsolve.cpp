#include <doctest.h>

#include <random>

#include "fplb/linsolve.hpp"
#include "support.hpp"

using namespace fplb;
using fplb::testing::R;
using fplb::testing::V;

TEST_CASE("unique solution") {
  const Matrix a{{R("2"), R("1")}, {R("1"), R("3")}};
  const LinearSolveResult s = solve_linear(a, V({"3", "5"}));
  REQUIRE(s.consistent);
  CHECK(s.rank == 2);
  CHECK(s.null_basis.empty());
  CHECK(s.particular == V({"4/5", "7/5"}));
  CHECK(satisfies(a, V({"3", "5"}), s.particular));
}

TEST_CASE("rank-deficient system reports a null basis") {
  const Matrix a = Matrix::from_ints({{1, 2, 3}, {2, 4, 6}});
  const LinearSolveResult s = solve_linear(a, Vector::from_ints({1, 2}));
  REQUIRE(s.consistent);
  CHECK(s.rank == 1);
  REQUIRE(s.null_basis.size() == 2);
  for (const auto& n : s.null_basis) CHECK(a * n == Vector(2));
  CHECK(satisfies(a, Vector::from_ints({1, 2}), s.particular));
  CHECK(in_solution_set(s, Vector::from_ints({1, 0, 0})));
  CHECK(in_solution_set(s, V({"0", "1/2", "0"})));
  CHECK_FALSE(in_solution_set(s, Vector::from_ints({0, 0, 0})));
}

TEST_CASE("inconsistent system carries a residual") {
  const Matrix a = Matrix::from_ints({{1, 1}, {2, 2}});
  const LinearSolveResult s = solve_linear(a, Vector::from_ints({1, 3}));
  CHECK_FALSE(s.consistent);
  CHECK(s.residual != 0);
}

TEST_CASE("zero matrix") {
  const LinearSolveResult ok = solve_linear(Matrix::zeros(2, 3), Vector(2));
  CHECK(ok.consistent);
  CHECK(ok.rank == 0);
  CHECK(ok.null_basis.size() == 3);
  CHECK_FALSE(solve_linear(Matrix::zeros(2, 3), Vector::from_ints({0, 1})).consistent);
}

TEST_CASE("random rational systems") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const std::size_t n = 2 + (trial / 3) % 6;
    Matrix a(m, n);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) a(r, c) = (trial % 4 == 0 && c == 1) ? Rational(0) : fplb::testing::random_rational(rng, 30);
    }
    if (m > 2 && trial % 5 == 0) {
      for (std::size_t c = 0; c < n; ++c) a(m - 1, c) = a(0, c) + a(1, c);  // force a dependent row
    }
    Vector z(n);
    for (std::size_t c = 0; c < n; ++c) z[c] = fplb::testing::random_rational(rng, 30);
    const Vector b = a * z;
    const LinearSolveResult s = solve_linear(a, b);
    REQUIRE(s.consistent);
    REQUIRE(s.rank + s.null_basis.size() == n);
    REQUIRE(satisfies(a, b, s.particular));
    for (const auto& v : s.null_basis) REQUIRE(a * v == Vector(m));
    REQUIRE(in_solution_set(s, z));
  }
}
