// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fplb/verify.hpp"
#include "reference_m_aug.hpp"
#include "support.hpp"

using namespace fplb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string describe(const Witness& w) {
  std::ostringstream os;
  os << w.location << ": expected " << w.expected << ", got " << w.actual;
  return os.str();
}

Outcome from_report(const VerificationReport& r, const std::string& summary = {}) {
  Outcome o{r.passed(), summary};
  if (const Witness* w = r.first_failure()) o.detail = describe(*w);
  return o;
}

Outcome both(Outcome a, const Outcome& b) {
  a.pass = a.pass && b.pass;
  if (!b.detail.empty()) a.detail += (a.detail.empty() ? "" : "; ") + b.detail;
  return a;
}

Matrix reference_m_aug() {
  Matrix m(10, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) m(i, j) = parse_rational(fplb::testing::kReferenceMAug[i][j]);
  }
  return m;
}

Outcome key_equation(const InstanceBundle& b) {
  Outcome o = from_report(check_key_equation(b.b, b.delta, b.q0, b.q1));
  const KeySolution family = solve_key_equation(b.q0, b.q1);
  if (!family.contains(b.b, b.delta)) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("solution set misses (B, Delta)");
  }
  if (o.pass) o.detail = "entrywise exact; rank " + std::to_string(family.system.rank) + " family contains (B, Delta)";
  return o;
}

Outcome construction(const InstanceBundle& b) {
  const Matrix reference = reference_m_aug();
  const Matrix built = augment(b.m, augmented_init(b.u0, b.shift));
  VerificationReport r("construction", "10x10");
  for (std::size_t i = 0; i < 10 && r.passed(); ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      if (built(i, j) != reference(i, j)) {
        r.fail("M_aug[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]", reference(i, j), built(i, j));
        break;
      }
    }
  }
  std::string anchors;
  for (const char* a : {"215689/2700", "15274/225", "1/1350"}) {
    bool seen = false;
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) seen |= built(i, j) == parse_rational(a);
    }
    if (!seen) r.fail(std::string("anchor ") + a, parse_rational(a), Rational(0));
    anchors += std::string(anchors.empty() ? "" : ", ") + a;
  }
  return from_report(r, "100 entries exact; anchors " + anchors + " present");
}

Outcome theorem(const InstanceBundle& b) {
  Outcome o = from_report(verify_theorem(6, b), "U at T_1..T_19 exact (T_19 = " + std::to_string(timetable(19)) + ")");
  if (b.u0[8] != Rational(-12)) {
    o.pass = false;
    o.detail += "; U0[9] is " + to_string(b.u0[8]);
  }
  return o;
}

Outcome aug_offset(const InstanceBundle& b) {
  const auto r = verify_aug_offset(100000, b);
  return from_report(r, "index shift holds for t <= 1e5, dummy played once at t = 1");
}

Outcome no_tie(const InstanceBundle& b) {
  const NoTieResult scan = no_tie_scan(b.m_aug, 1000000);
  VerificationReport r("no-tie", "t=2..1000000");
  if (scan.min_top_gap > 0 && scan.ties == 0) {
    r.witness("min top gap", Rational(0), scan.min_top_gap);
  } else {
    r.fail("min top gap at t=" + std::to_string(scan.at_t), Rational(0), scan.min_top_gap);
  }
  return from_report(r, "min top gap " + to_string(scan.min_top_gap) + " at t=" + std::to_string(scan.at_t));
}

Outcome properties(const InstanceBundle& b) {
  Outcome o;
  o = both(o, from_report(verify_monotone(rps_matrix(), Vector(3), 9 * 51 * 51)));
  o = both(o, from_report(verify_monotone(b.m, b.u0, static_cast<std::uint64_t>(timetable(19)))));
  o = both(o, from_report(verify_monotone(b.m_aug, Vector(10), 1000000)));
  o = both(o, from_report(verify_skew(b)));

  std::mt19937_64 rng(2024);
  std::size_t gap_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    const Matrix a = fplb::testing::random_skew(rng, n);
    const Vector x = fplb::testing::random_simplex(rng, n);
    if (sym_gap(a, x) != duality_gap(a, x, x)) {
      o.pass = false;
      o.detail += "; sym_gap differs on a random " + std::to_string(n) + "x" + std::to_string(n) + " game";
    }
    ++gap_checks;
  }
  for (const Matrix* g : {&b.m, &b.m_aug}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = fplb::testing::random_simplex(rng, g->rows());
      if (sym_gap(*g, x) != duality_gap(*g, x, x)) {
        o.pass = false;
        o.detail += "; sym_gap differs on the constructed game";
      }
      ++gap_checks;
    }
  }
  o = both(o, from_report(verify_float_agreement(b.m_aug, 1000000)));
  if (o.pass) {
    o.detail = "monotone on 3 runs, skew M and M_aug, " + std::to_string(gap_checks) +
               " sym_gap checks, float agreement t <= 1e6";
  }
  return o;
}

struct Control {
  std::string name;
  InstanceBundle bundle;
};

// Corrupts one constant and recomputes what is derived from it without
// the validating constructors.
std::vector<Control> controls(const InstanceBundle& canon) {
  std::vector<Control> out;
  {
    InstanceBundle b = canon;
    Matrix m = canon.b.matrix();
    m(0, 1) += make_rational(1, 900);
    m(1, 0) = m(0, 1);
    b.b = InteractionMatrix(m);
    b.m = build_M(b.b);
    b.m_aug = augment(b.m, augmented_init(b.u0, b.shift));
    out.push_back({"B12 + 1/900", b});
  }
  {
    InstanceBundle b = canon;
    b.vs.v1(0, 1) += make_rational(1, 27);
    b.u0 = concat({b.vs.v1 * bvec(1), b.vs.v2 * bvec(1), b.vs.v3 * bvec(1)});
    b.m_aug = augment(b.m, augmented_init(b.u0, b.shift));
    out.push_back({"V1[1,2] + 1/27", b});
  }
  for (const char* shift : {"0", "1/1800", "-1/2700"}) {
    InstanceBundle b = canon;
    b.shift = parse_rational(shift);
    b.m_aug = augment(b.m, augmented_init(b.u0, b.shift));
    out.push_back({std::string("delta = ") + shift, b});
  }
  return out;
}

Outcome negative_controls(const InstanceBundle& canon) {
  const std::vector<std::pair<int, std::function<Outcome(const InstanceBundle&)>>> checks = {
      {3, key_equation}, {4, construction}, {5, theorem}, {6, aug_offset}, {7, no_tie}};
  Outcome o;
  for (const Control& c : controls(canon)) {
    std::string caught;
    for (const auto& [id, check] : checks) {
      const Outcome r = check(c.bundle);
      if (!r.pass && !r.detail.empty()) caught += " " + std::to_string(id) + " (" + r.detail + ")";
    }
    if (caught.empty()) {
      o.pass = false;
      o.detail += "[" + c.name + ": no criterion 3-7 fails] ";
    } else {
      o.detail += "[" + c.name + ":" + caught + "] ";
    }
  }
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const InstanceBundle canon = canonical_constants();
  const std::vector<Criterion> criteria = {
      {1, "rps-periodicity", 1.0,
       [] { return from_report(verify_rps_periodicity(50), "vertex formulas exact for k = 1..50"); }},
      {2, "admissibility", 5.0,
       [] {
         return both(from_report(is_admissible(canonical_q0(), {1, 30}), "Q0 and Q1 admissible for k = 1..30"),
                     from_report(is_admissible(canonical_q1(), {1, 30})));
       }},
      {3, "key-equation", 0, [&] { return key_equation(canon); }},
      {4, "construction", 0,
       [&] {
         Outcome o = construction(canon);
         const Matrix validated = build_M_aug(canon.m, canon.u0, canon.shift);
         if (validated != canon.m_aug) o = {false, "bundle M_aug differs from build_M_aug"};
         return o;
       }},
      {5, "theorem-checkpoints", 10.0, [&] { return theorem(canon); }},
      {6, "augmentation-offset", 0, [&] { return aug_offset(canon); }},
      {7, "no-tie", 0, [&] { return no_tie(canon); }},
      {8, "rate", 60.0,
       [&] {
         const RateResult r = verify_rate(1000000, 1000, 1000000, canon);
         std::ostringstream os;
         os << "fit over [1e3, 1e6]: exponent " << r.fit.exponent << ", coefficient " << r.fit.coefficient
            << " (target -1/3 +- 0.02, 0.36 +- 0.05)";
         return Outcome{r.report.passed(), os.str()};
       }},
      {9, "properties", 0, [&] { return properties(canon); }},
      {10, "negative-controls", 0, [&] { return negative_controls(canon); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(c.budget_seconds) + " s budget";
    }
    failed += o.pass ? 0 : 1;
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << seconds;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << time.str() << " s): " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
