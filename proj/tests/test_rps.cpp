#include <doctest.h>

#include "fplb/fp.hpp"
#include "fplb/rps.hpp"
#include "support.hpp"

using namespace fplb;

namespace {

Vector rps_counts_at(std::uint64_t t) {
  SymmetricRunner runner(rps_matrix(), Vector(3));
  while (runner.t() < t) runner.step();
  return runner.counts_vector();
}

}  // namespace

TEST_CASE("rps matrix") {
  const Matrix a = rps_matrix();
  CHECK(a + a.transpose() == Matrix::zeros(3, 3));
  CHECK(a * Vector::ones(3) == Vector(3));
  CHECK(a.col(0) == Vector::from_ints({0, 1, -1}));
}

TEST_CASE("vertex formulas") {
  const auto k1 = vertex_states(1);
  CHECK(k1[0].t == 9);
  CHECK(k1[0].x == Vector::from_ints({1, 3, 5}));
  CHECK(k1[0].U == Vector::from_ints({2, -4, 2}));
  CHECK(k1[1].t == 16);
  CHECK(k1[1].x == Vector::from_ints({8, 3, 5}));
  CHECK(k1[1].U == Vector::from_ints({2, 3, -5}));
  CHECK(k1[2].t == 25);
  const auto k2 = vertex_states(2);
  CHECK(k2[0].t == 36);
  CHECK(k2[0].x == Vector::from_ints({8, 12, 16}));
  CHECK_THROWS_AS(vertex_states(0), std::invalid_argument);
}

TEST_CASE("third vertex sits at 9k^2+12k+4, not 9k^2+12k+6") {
  for (std::int64_t k = 1; k <= 12; ++k) {
    const auto v = vertex_states(k);
    REQUIRE(rps_counts_at(v[2].t) == v[2].x);
    REQUIRE(rps_counts_at(v[2].t + 2) != v[2].x);
  }
}

TEST_CASE("the vertex matrices reproduce the vertex formulas") {
  const auto qs = vertex_matrices();
  for (std::int64_t k = 1; k <= 10; ++k) {
    const auto v = vertex_states(k);
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(qs[i].at(k) == v[i].x);
      REQUIRE(qs[i].total(k) == Rational(static_cast<long>(v[i].t)));
    }
  }
}

TEST_CASE("admissibility of the canonical pair and the vertex matrices") {
  CHECK(is_admissible(canonical_q0(), {1, 10}).passed());
  CHECK(is_admissible(canonical_q1(), {1, 10}).passed());
  for (const auto& q : vertex_matrices()) CHECK(is_admissible(q, {1, 10}).passed());
}

TEST_CASE("a non-admissible matrix fails with a witness") {
  const VerificationReport r = is_admissible(QuadMatrix::from_ints({{3, 0, 0}, {3, 0, 0}, {3, 0, 1}}), {1, 10});
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->location.rfind("k=1 ", 0) == 0);
  CHECK(r.first_failure()->expected == Vector::from_ints({3, 3, 4}));
  CHECK(r.first_failure()->actual == Vector::from_ints({2, 3, 5}));
}

TEST_CASE("admissibility rejects bad target times") {
  CHECK_THROWS_AS(is_admissible(QuadMatrix::from_ints({{1, 0, 0}, {0, 0, 0}, {0, 0, -3}}), {1, 3}),
                  std::invalid_argument);  // negative at k=1
  QuadMatrix half(Matrix{{Rational(1, 2), Rational(0), Rational(0)}, {0, 0, 0}, {0, 0, 0}});
  CHECK_THROWS_AS(is_admissible(half, {1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(is_admissible(QuadMatrix::from_ints({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}), {1, 3}),
                  std::invalid_argument);  // constant, not increasing
}

TEST_CASE("substitute_k") {
  const auto qs = vertex_matrices();
  CHECK(substitute_k(qs[0], 2, 0) == QuadMatrix::from_ints({{12, -4, 0}, {12, 0, 0}, {12, 4, 0}}));
  CHECK(substitute_k(qs[1], 1, 0) == qs[1]);
  for (std::int64_t k = 1; k <= 6; ++k) {
    REQUIRE(substitute_k(qs[2], 3, 1).at(k) == qs[2].at(3 * k + 1));
  }
  const std::pair<std::int64_t, std::int64_t> shifts[] = {{2, 0}, {4, 8}, {3, 1}, {1, 5}};
  for (const auto& q : qs) {
    for (const auto& [a, b] : shifts) REQUIRE(is_admissible(substitute_k(q, a, b), {1, 8}).passed());
  }
}

TEST_CASE("windowed runs from an admissible initialization") {
  const VerificationReport k1 = windowed_run_check(canonical_q0(), canonical_q1(), {1, 1});
  CHECK(k1.passed());
  CHECK(k1.witnesses().front().location == "k=1 steps=1362");
  const VerificationReport k2 = windowed_run_check(canonical_q0(), canonical_q1(), {2, 2});
  CHECK(k2.passed());
  CHECK(k2.witnesses().front().location == "k=2 steps=2282");
  const VerificationReport same = windowed_run_check(canonical_q0(), canonical_q0(), {1, 3});
  CHECK(same.passed());
  CHECK(same.witnesses().front().location == "k=1 steps=0");
}

TEST_CASE("window lengths are the phase lengths") {
  const QuadMatrix q = canonical_q1() - canonical_q0();
  CHECK(q.column_sums() == Vector::from_ints({108, 596, 658}));
}

TEST_CASE("serial and parallel windowed checks agree") {
  const VerificationReport s = windowed_run_check(canonical_q0(), canonical_q1(), {1, 12}, Execution::serial);
  const VerificationReport p = windowed_run_check(canonical_q0(), canonical_q1(), {1, 12}, Execution::parallel);
  CHECK(s.passed());
  CHECK(s.to_json() == p.to_json());
}

TEST_CASE("rps action prefix") {
  CHECK(rps_actions(9) == std::vector<std::uint32_t>{0, 1, 1, 1, 2, 2, 2, 2, 2});
}
