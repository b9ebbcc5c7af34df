#include <doctest.h>

#include <random>

#include "fplb/exact.hpp"
#include "fplb/json_io.hpp"
#include "fplb/rps.hpp"
#include "support.hpp"

using namespace fplb;
using fplb::testing::R;
using fplb::testing::V;

TEST_CASE("parse and format rationals") {
  CHECK(to_string(R("2/4")) == "1/2");
  CHECK(to_string(R("-6/3")) == "-2");
  CHECK(to_string(R("+7")) == "7");
  CHECK(to_string(R("0/5")) == "0");
  CHECK(R("-169687/2700") == make_rational(-169687, 2700));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);
}

TEST_CASE("make_rational is canonical") {
  const Rational r = make_rational(6, -4);
  CHECK(r.get_num() == -3);
  CHECK(r.get_den() == 2);
}

TEST_CASE("decimal rendering rounds half to even at 12 significant digits") {
  CHECK(to_decimal(R("1/3")) == "3.33333333333e-01");
  CHECK(to_decimal(R("2/3")) == "6.66666666667e-01");
  CHECK(to_decimal(R("4/9")) == "4.44444444444e-01");
  CHECK(to_decimal(R("0")) == "0.00000000000e+00");
  CHECK(to_decimal(R("-1/8"), 2) == "-1.2e-01");   // 0.125 -> 0.12
  CHECK(to_decimal(R("3/8"), 2) == "3.8e-01");     // 0.375 -> 0.38
  CHECK(to_decimal(R("999999/1000000"), 3) == "1.00e+00");
  CHECK(to_decimal(R("1234567"), 3) == "1.23e+06");
  CHECK(to_decimal(R("25"), 1) == "2e+01");
  CHECK(to_decimal(R("35"), 1) == "4e+01");
}

TEST_CASE("bvec and the shift matrix") {
  CHECK(bvec(0) == Vector::from_ints({0, 0, 1}));
  CHECK(bvec(1) == Vector::from_ints({1, 1, 1}));
  CHECK(bvec(3) == Vector::from_ints({9, 3, 1}));
  CHECK(cmat() == Matrix::from_ints({{1, 2, 1}, {0, 1, 1}, {0, 0, 1}}));
  CHECK(cmat() * bvec(2) == bvec(3));
  CHECK(cmat() * bvec(0) == bvec(1));
  CHECK(power(cmat(), 3) * bvec(1) == bvec(4));
  for (std::int64_t k = 0; k <= 200; ++k) REQUIRE(cmat() * bvec(k) == bvec(k + 1));
}

TEST_CASE("matrix algebra") {
  const Matrix a = rps_matrix();
  CHECK(a.is_skew_symmetric());
  CHECK_FALSE(a.is_symmetric());
  CHECK(a + a.transpose() == Matrix::zeros(3, 3));
  CHECK(a * Vector::ones(3) == Vector(3));
  CHECK(a.col(0) == Vector::from_ints({0, 1, -1}));
  CHECK(Vector::ones(3) * a == Vector(3));
  CHECK(power(a, 0) == Matrix::identity(3));
  CHECK(Matrix::outer(Vector::from_ints({1, 2}), Vector::from_ints({3, 4, 5})) ==
        Matrix::from_ints({{3, 4, 5}, {6, 8, 10}}));
  const Matrix blocks = Matrix::blocks({{Matrix::identity(2), Matrix::zeros(2, 1)}, {Matrix::zeros(1, 2), Matrix::identity(1)}});
  CHECK(blocks == Matrix::identity(3));
  CHECK_THROWS_AS(Matrix::identity(2) * Matrix::identity(3), DimensionError);
  CHECK_THROWS_AS(Vector(2) + Vector(3), DimensionError);
}

TEST_CASE("duality gap examples") {
  const Matrix a = rps_matrix();
  const Vector uniform{R("1/3"), R("1/3"), R("1/3")};
  CHECK(duality_gap(a, uniform, uniform) == 0);
  const Vector rock = Vector::from_ints({1, 0, 0});
  CHECK(duality_gap(a, rock, rock) == 2);
  const Vector x9 = V({"1/9", "3/9", "5/9"});
  CHECK(duality_gap(a, x9, x9) == R("4/9"));
  CHECK(sym_gap(a, x9) == R("4/9"));
  CHECK(sym_gap(a, uniform) == 0);
  CHECK(duality_gap_counts(a, Vector::from_ints({1, 3, 5}), Vector::from_ints({1, 3, 5}), 9) == R("4/9"));
  CHECK_THROWS_AS(duality_gap(a, Vector::from_ints({1, 1, 0}), rock), std::invalid_argument);
  CHECK_THROWS_AS(duality_gap(a, Vector::from_ints({1, 0}), rock), DimensionError);
  CHECK_THROWS_AS(sym_gap(Matrix::identity(3), rock), std::invalid_argument);
}

TEST_CASE("sym_gap equals duality_gap on random skew games") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const Matrix a = trial % 2 ? fplb::testing::random_skew(rng, n) : rps_matrix();
    const Vector x = fplb::testing::random_simplex(rng, a.rows());
    REQUIRE(sym_gap(a, x) == duality_gap(a, x, x));
    REQUIRE(duality_gap(a, x, x) >= 0);
  }
}

TEST_CASE("duality gap vanishes exactly at equilibria of small games") {
  // Matching pennies: the only equilibrium is (1/2, 1/2) for both players.
  const Matrix mp = Matrix::from_ints({{1, -1}, {-1, 1}});
  const Vector half{R("1/2"), R("1/2")};
  CHECK(duality_gap(mp, half, half) == 0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = fplb::testing::random_simplex(rng, 2);
    const Vector y = fplb::testing::random_simplex(rng, 2);
    const Rational gap = duality_gap(mp, x, y);
    REQUIRE(gap >= 0);
    REQUIRE((gap == 0) == (x == half && y == half));
  }
}

TEST_CASE("rational arithmetic is exact on random triples") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Rational a = fplb::testing::random_rational(rng);
    const Rational b = fplb::testing::random_rational(rng);
    const Rational c = fplb::testing::random_rational(rng);
    REQUIRE(Rational((a + b) + c) == Rational(a + (b + c)));
    REQUIRE(Rational(a * b) == Rational(b * a));
    REQUIRE(Rational(a * (b + c)) == Rational(a * b + a * c));
    REQUIRE(parse_rational(to_string(a)) == a);
  }
}

TEST_CASE("json round trip is bit exact") {
  std::mt19937_64 rng(5);
  Matrix m(4, 3);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = fplb::testing::random_rational(rng, 100000);
  }
  const Json j = to_json(m);
  CHECK(j["rows"] == 4);
  CHECK(j["cols"] == 3);
  CHECK(matrix_from_json(Json::parse(j.dump())) == m);
  CHECK(matrix_from_json(j["entries"]) == m);
  CHECK(vector_from_json(Json::parse(R"(["1/2", 3, "-4/6"])")) == V({"1/2", "3", "-2/3"}));
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"entries":[["1","2"]]})")), DimensionError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([["1","2"],["3"]])")), DimensionError);
  CHECK_THROWS_AS(rational_from_json(Json::parse("1.5")), std::invalid_argument);
}

TEST_CASE("common denominators") {
  CHECK(common_denominator(V({"1/4", "1/6", "3"})) == 12);
  CHECK(common_denominator(Matrix{{R("1/900"), R("1/2700")}, {R("0"), R("1/3")}}) == 2700);
}
