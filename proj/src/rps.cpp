#include "fplb/rps.hpp"

#include <string>

#include "fplb/fp.hpp"

namespace fplb {

namespace {

std::int64_t as_step_count(const Rational& value, const std::string& what) {
  if (value.get_den() != 1) throw std::invalid_argument(what + " is not an integer: " + to_string(value));
  if (value < 0) throw std::invalid_argument(what + " is negative: " + to_string(value));
  if (!mpz_fits_slong_p(value.get_num_mpz_t())) throw std::invalid_argument(what + " is too large");
  return mpz_get_si(value.get_num_mpz_t());
}

std::string range_label(KRange range) {
  return "k=" + std::to_string(range.first) + ".." + std::to_string(range.last);
}

}  // namespace

Matrix rps_matrix() { return Matrix::from_ints({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}); }

QuadMatrix::QuadMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != 3 || m_.cols() != 3) throw DimensionError("QuadMatrix must be 3x3");
}

Vector QuadMatrix::column_sums() const { return Vector::ones(3) * m_; }

std::array<VertexState, 3> vertex_states(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("vertex_states: k must be >= 1");
  const std::int64_t k2 = k * k;
  return {{
      {static_cast<std::uint64_t>(9 * k2), Vector::from_ints({3 * k2 - 2 * k, 3 * k2, 3 * k2 + 2 * k}),
       Vector::from_ints({2 * k, -4 * k, 2 * k})},
      {static_cast<std::uint64_t>(9 * k2 + 6 * k + 1),
       Vector::from_ints({3 * k2 + 4 * k + 1, 3 * k2, 3 * k2 + 2 * k}),
       Vector::from_ints({2 * k, 2 * k + 1, -4 * k - 1})},
      {static_cast<std::uint64_t>(9 * k2 + 12 * k + 4),
       Vector::from_ints({3 * k2 + 4 * k + 1, 3 * k2 + 6 * k + 3, 3 * k2 + 2 * k}),
       Vector::from_ints({-4 * k - 3, 2 * k + 1, 2 * k + 2})},
  }};
}

std::array<QuadMatrix, 3> vertex_matrices() {
  return {QuadMatrix::from_ints({{3, -2, 0}, {3, 0, 0}, {3, 2, 0}}),
          QuadMatrix::from_ints({{3, 4, 1}, {3, 0, 0}, {3, 2, 0}}),
          QuadMatrix::from_ints({{3, 4, 1}, {3, 6, 3}, {3, 2, 0}})};
}

QuadMatrix canonical_q0() { return QuadMatrix::from_ints({{12, 8, -12}, {12, 0, 0}, {12, 4, 0}}); }

QuadMatrix canonical_q1() {
  return QuadMatrix::from_ints({{48, 208, 225}, {48, 200, 213}, {48, 200, 208}});
}

QuadMatrix substitute_k(const QuadMatrix& q, std::int64_t a, std::int64_t b) {
  const Matrix s = Matrix::from_ints({{a * a, 2 * a * b, b * b}, {0, a, b}, {0, 0, 1}});
  return QuadMatrix(q.matrix() * s);
}

std::vector<std::uint32_t> rps_actions(std::uint64_t steps) {
  SymmetricRunner runner(rps_matrix(), Vector(3));
  std::vector<std::uint32_t> out;
  out.reserve(steps);
  for (std::uint64_t s = 0; s < steps; ++s) out.push_back(static_cast<std::uint32_t>(runner.step()));
  return out;
}

VerificationReport is_admissible(const QuadMatrix& q, KRange range) {
  VerificationReport report("admissible", range_label(range));
  if (range.first < 1 || range.last < range.first) throw std::invalid_argument("is_admissible: empty k range");

  std::vector<std::int64_t> targets;
  for (std::int64_t k = range.first; k <= range.last; ++k) {
    const std::int64_t t = as_step_count(q.total(k), "target time at k=" + std::to_string(k));
    if (!targets.empty() && t <= targets.back()) {
      throw std::invalid_argument("is_admissible: target times are not strictly increasing at k=" +
                                  std::to_string(k));
    }
    targets.push_back(t);
  }

  SymmetricRunner runner(rps_matrix(), Vector(3));
  for (std::size_t idx = 0; idx < targets.size(); ++idx) {
    const std::int64_t k = range.first + static_cast<std::int64_t>(idx);
    while (runner.t() < static_cast<std::uint64_t>(targets[idx])) runner.step();
    report.expect_equal("k=" + std::to_string(k) + " t=" + std::to_string(targets[idx]), q.at(k),
                        runner.counts_vector());
  }
  return report;
}

VerificationReport windowed_run_check(const QuadMatrix& q0, const QuadMatrix& q1, KRange range,
                                      Execution exec) {
  VerificationReport report("windowed-run", range_label(range));
  if (range.first < 1 || range.last < range.first) {
    throw std::invalid_argument("windowed_run_check: empty k range");
  }
  const QuadMatrix window = q1 - q0;
  const Matrix a = rps_matrix();
  const std::size_t count = static_cast<std::size_t>(range.last - range.first + 1);

  struct Outcome {
    std::int64_t steps = 0;
    Vector expected;
    Vector actual;
  };
  std::vector<Outcome> outcomes(count);

  for_each_index(count, exec, [&](std::size_t idx) {
    const std::int64_t k = range.first + static_cast<std::int64_t>(idx);
    Outcome& out = outcomes[idx];
    out.steps = as_step_count(window.total(k), "window length at k=" + std::to_string(k));
    out.expected = window.at(k);
    SymmetricRunner runner(a, a * q0.at(k));
    for (std::int64_t s = 0; s < out.steps; ++s) runner.step();
    out.actual = runner.counts_vector();
  });

  for (std::size_t idx = 0; idx < count; ++idx) {
    const std::int64_t k = range.first + static_cast<std::int64_t>(idx);
    report.expect_equal("k=" + std::to_string(k) + " steps=" + std::to_string(outcomes[idx].steps),
                        outcomes[idx].expected, outcomes[idx].actual);
  }
  return report;
}

}  // namespace fplb
