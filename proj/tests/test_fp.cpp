#include <doctest.h>

#include <random>
#include <sstream>

#include "fplb/fp.hpp"
#include "fplb/instance.hpp"
#include "fplb/rps.hpp"
#include "support.hpp"

using namespace fplb;
using fplb::testing::R;
using fplb::testing::V;

TEST_CASE("first general step on RPS breaks the all-zero tie to index 1") {
  FpState s = FpState::general(3, 3);
  const GeneralStep st = fp_step_general(s, rps_matrix());
  CHECK(st.i == 0);
  CHECK(st.j == 0);
  CHECK(s.t == 1);
}

TEST_CASE("matching pennies hand trace") {
  // t=1: Ay=[0,0], Aᵀx=[0,0] -> (1,1); t=2: Ay=[1,-1], Aᵀx=[1,-1] -> (1,2);
  // t=3: Ay=[0,0], Aᵀx=[2,-2] -> (1,2); t=4: Ay=[-1,1], Aᵀx=[3,-3] -> (2,2).
  const Matrix mp = Matrix::from_ints({{1, -1}, {-1, 1}});
  FpState s = FpState::general(2, 2);
  const std::size_t is[4] = {0, 0, 0, 1};
  const std::size_t js[4] = {0, 1, 1, 1};
  for (int t = 0; t < 4; ++t) {
    const GeneralStep st = fp_step_general(s, mp);
    CHECK(st.i == is[t]);
    CHECK(st.j == js[t]);
  }
  CHECK(s.x == Vector::from_ints({3, 1}));
  CHECK(*s.y == Vector::from_ints({1, 3}));
  CHECK(s.U == mp * *s.y);
  CHECK(*s.col_payoff == s.x * mp);
}

TEST_CASE("symmetric single steps") {
  FpState s = FpState::symmetric(Vector::from_ints({2, -4, 2}));
  CHECK(fp_step_symmetric(s, rps_matrix()) == 0);
  CHECK(s.U == Vector::from_ints({2, -3, 1}));

  FpState s2 = FpState::symmetric(Vector::from_ints({2, 3, -5}));
  CHECK(fp_step_symmetric(s2, rps_matrix()) == 1);
  CHECK(s2.U == Vector::from_ints({1, 3, -4}));

  FpState s3 = FpState::symmetric(3, TieBreakPolicy::strict());
  CHECK_THROWS_AS(fp_step_symmetric(s3, rps_matrix()), TieEncountered);
  CHECK_THROWS_AS(fp_step_symmetric(s, Matrix::identity(3)), std::invalid_argument);
}

TEST_CASE("strict policy reports the step and tied set") {
  FpState s = FpState::symmetric(3, TieBreakPolicy::strict());
  try {
    run(s, rps_matrix(), 1);
    FAIL("expected a tie");
  } catch (const TieEncountered& e) {
    CHECK(e.step() == 1);
    CHECK(e.tied() == std::vector<std::size_t>{0, 1, 2});
    CHECK(std::string(e.what()).find("t=1") != std::string::npos);
  }
}

TEST_CASE("adversarial callback must choose from the tied set") {
  std::vector<std::size_t> seen;
  auto pick_last = TieBreakPolicy::adversarial([&](std::span<const std::size_t> tied, std::uint64_t, const Vector&) {
    seen.push_back(tied.size());
    return tied.back();
  });
  FpState s = FpState::symmetric(3, pick_last);
  const Trajectory tr = run(s, rps_matrix(), 3);
  CHECK(tr.actions.front() == 2);
  CHECK_FALSE(seen.empty());

  auto bad = TieBreakPolicy::adversarial([](std::span<const std::size_t>, std::uint64_t, const Vector&) { return 7; });
  FpState s2 = FpState::symmetric(3, bad);
  CHECK_THROWS_AS(run(s2, rps_matrix(), 1), std::logic_error);
  CHECK_THROWS_AS(TieBreakPolicy::adversarial(nullptr), std::invalid_argument);
}

TEST_CASE("top gap") {
  CHECK(top_gap(Vector::from_ints({2, -4, 2})) == 0);
  CHECK(top_gap(Vector::from_ints({2, 3, -5})) == 1);
  CHECK(top_gap(V({"1/2", "1/3"})) == R("1/6"));
  CHECK_THROWS_AS(top_gap(Vector::from_ints({1})), DimensionError);
}

TEST_CASE("run on RPS reaches the first vertices") {
  FpState s = FpState::symmetric(3);
  run(s, rps_matrix(), 9);
  CHECK(s.x == Vector::from_ints({1, 3, 5}));
  CHECK(s.U == Vector::from_ints({2, -4, 2}));

  FpState s36 = FpState::symmetric(3);
  const Trajectory tr = run(s36, rps_matrix(), 36, {{}, SampleStride::none()});
  CHECK(s36.x == Vector::from_ints({8, 12, 16}));
  CHECK(s36.U == Vector::from_ints({4, -8, 4}));
  CHECK(tr.checkpoints.empty());
  CHECK(tr.actions.size() == 36);
  CHECK(tr.samples.empty());
  CHECK_THROWS_AS(run(s36, rps_matrix(), 0), std::invalid_argument);
}

TEST_CASE("checkpoints satisfy U = U_init + A x") {
  const InstanceBundle bundle = canonical_constants();
  FpState s = FpState::symmetric(bundle.u0);
  RunOptions opt;
  opt.checkpoints = {0, 1, 100, 1362, 5000};
  const Trajectory tr = run(s, bundle.m, 5000, opt);
  REQUIRE(tr.checkpoints.size() == 5);
  for (const auto& [t, cp] : tr.checkpoints) {
    CHECK(cp.x.sum() == Rational(static_cast<long>(t)));
    CHECK(cp.U == bundle.u0 + bundle.m * cp.x);
  }
  CHECK(tr.checkpoints.at(1362).U == rotated_stack(bundle.vs, 2));
}

TEST_CASE("symmetric and general rules agree on skew-symmetric games") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const Matrix a = trial == 0 ? rps_matrix() : fplb::testing::random_skew(rng, 3 + trial % 5, 5);
    FpState sym = FpState::symmetric(a.rows());
    FpState gen = FpState::general(a.rows(), a.cols());
    for (int t = 0; t < 300; ++t) {
      const std::size_t i = fp_step_symmetric(sym, a);
      const GeneralStep g = fp_step_general(gen, a);
      REQUIRE(i == g.i);
      REQUIRE(g.i == g.j);
    }
    CHECK(sym.x == gen.x);
    CHECK(sym.x == *gen.y);
  }
}

TEST_CASE("runner fast path agrees with exact stepping") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = fplb::testing::random_skew(rng, 4 + trial % 4, 50);
    Vector u0(a.rows());
    for (std::size_t r = 0; r < u0.size(); ++r) u0[r] = fplb::testing::random_rational(rng, 50);
    SymmetricRunner runner(a, u0);
    REQUIRE(runner.fast_path());
    FpState s = FpState::symmetric(u0);
    for (int t = 0; t < 2000; ++t) REQUIRE(runner.step() == fp_step_symmetric(s, a));
    CHECK(runner.utility() == s.U);
    CHECK(runner.counts_vector() == s.x);
    CHECK(runner.top_gap() == top_gap(s.U));
    CHECK(runner.max_utility() == s.U.max());
  }
}

TEST_CASE("runner falls back to exact arithmetic on overflow") {
  const Rational big(mpz_class("4611686018427387904"));  // 2^62
  Matrix a(2, 2);
  a(0, 1) = -big;
  a(1, 0) = big;
  SymmetricRunner runner(a, Vector(2));
  REQUIRE(runner.fast_path());
  FpState s = FpState::symmetric(2);
  for (int t = 0; t < 6; ++t) REQUIRE(runner.step() == fp_step_symmetric(s, a));
  CHECK_FALSE(runner.fast_path());
  CHECK_FALSE(runner.fallback_events().empty());
  CHECK(runner.utility() == s.U);

  Matrix huge(2, 2);
  huge(0, 1) = Rational(mpz_class("-100000000000000000000000"));
  huge(1, 0) = -huge(0, 1);
  SymmetricRunner exact_only(huge, Vector(2));
  CHECK_FALSE(exact_only.fast_path());
  exact_only.step();
  CHECK(exact_only.utility()[1] == huge(1, 0));
}

TEST_CASE("replays are deterministic") {
  const InstanceBundle bundle = canonical_constants();
  auto replay = [&] {
    FpState s = FpState::symmetric(bundle.m_aug.rows());
    return run(s, bundle.m_aug, 20000);
  };
  const Trajectory a = replay();
  const Trajectory b = replay();
  CHECK(a.actions == b.actions);
  std::ostringstream ca, cb;
  write_trajectory_csv(ca, a);
  write_trajectory_csv(cb, b);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("sample stride schedules") {
  CHECK(SampleStride::every().times(3, 6) == std::vector<std::uint64_t>{3, 4, 5, 6});
  CHECK(SampleStride::none().times(1, 100).empty());
  const auto g = SampleStride::geometric().times(1, 1000000);
  CHECK(g.front() == 1);
  CHECK(g.back() <= 1000000);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  CHECK(SampleStride::geometric().times(10, 5).empty());
  CHECK_THROWS_AS(SampleStride::geometric(1.0).times(1, 10), std::invalid_argument);
}

TEST_CASE("trajectory csv") {
  FpState s = FpState::symmetric(3);
  const Trajectory tr = run(s, rps_matrix(), 3, {{}, SampleStride::every()});
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  CHECK(out.str() ==
        "t,action,max_U,gap,top_gap\n"
        "1,1,1,2,1\n"
        "2,2,1,1,1\n"
        "3,2,1,2/3,0\n");
}

TEST_CASE("general-mode samples carry the two-player duality gap") {
  const Matrix mp = Matrix::from_ints({{1, -1}, {-1, 1}});
  FpState s = FpState::general(2, 2);
  const Trajectory tr = run(s, mp, 4, {{}, SampleStride::every()});
  REQUIRE(tr.samples.size() == 4);
  CHECK(tr.samples.back().gap == duality_gap_counts(mp, s.x, *s.y, 4));
}
