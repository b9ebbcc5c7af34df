#pragma once

// Rock-paper-scissors under lexicographic fictitious play: the closed-form
// vertex states, admissible quadratic matrices, and windowed runs started
// from an admissible initialization.

#include <array>
#include <cstdint>

#include "fplb/exact.hpp"
#include "fplb/parallel.hpp"
#include "fplb/report.hpp"

namespace fplb {

Matrix rps_matrix();

/// A 3×3 matrix Q read as the quadratic family k ↦ Q·bvec(k).
class QuadMatrix {
 public:
  QuadMatrix() : m_(3, 3) {}
  explicit QuadMatrix(Matrix m);
  static QuadMatrix from_ints(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    return QuadMatrix(Matrix::from_ints(rows));
  }

  const Matrix& matrix() const { return m_; }
  Vector at(std::int64_t k) const { return m_ * bvec(k); }
  /// 1ᵀ Q bvec(k)
  Rational total(std::int64_t k) const { return at(k).sum(); }
  /// Column sums 1ᵀQ: coefficients of the quadratic k ↦ total(k).
  Vector column_sums() const;

  friend QuadMatrix operator-(const QuadMatrix& a, const QuadMatrix& b) { return QuadMatrix(a.m_ - b.m_); }
  friend bool operator==(const QuadMatrix&, const QuadMatrix&) = default;

 private:
  Matrix m_;
};

struct VertexState {
  std::uint64_t t;
  Vector x;
  Vector U;
};

/// Closed-form RPS iterates at the three vertices of the k-th spiral turn:
/// t = 9k², 9k²+6k+1 and 9k²+12k+4.
std::array<VertexState, 3> vertex_states(std::int64_t k);

/// The three admissible matrices read off the vertex formulas.
std::array<QuadMatrix, 3> vertex_matrices();

/// The admissible pair used by the hard instance.
QuadMatrix canonical_q0();
QuadMatrix canonical_q1();

/// Q·S with bvec(a k + b) = S·bvec(k).
QuadMatrix substitute_k(const QuadMatrix& q, std::int64_t a, std::int64_t b);

struct KRange {
  std::int64_t first = 1;
  std::int64_t last = 30;
};

/// One lexicographic RPS run to the largest target time; checks that
/// x_t = Q·bvec(k) at t = 1ᵀQ·bvec(k) for every k in the range.
/// Throws std::invalid_argument when a target time is negative, fractional or
/// not strictly increasing in k.
VerificationReport is_admissible(const QuadMatrix& q, KRange range = {});

/// For each k: start symmetric RPS play from U = A_rps·Q0·bvec(k), play
/// 1ᵀ(Q1−Q0)·bvec(k) steps, and compare the counts with (Q1−Q0)·bvec(k).
/// Each k is an independent replay; Execution::parallel fans them out.
VerificationReport windowed_run_check(const QuadMatrix& q0, const QuadMatrix& q1, KRange range = {},
                                      Execution exec = Execution::parallel);

/// Lexicographic RPS actions i_1..i_steps (0-based), from the zero state.
std::vector<std::uint32_t> rps_actions(std::uint64_t steps);

}  // namespace fplb
