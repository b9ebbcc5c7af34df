#pragma once

#include <cstddef>
#include <vector>

#include "fplb/exact.hpp"

namespace fplb {

/// Solution set {particular + span(null_basis)} of A z = b, or the evidence
/// that the system is inconsistent.
struct LinearSolveResult {
  bool consistent = false;
  std::size_t rank = 0;
  Vector particular;
  std::vector<Vector> null_basis;
  /// For an inconsistent system: the nonzero right-hand side left on an
  /// eliminated all-zero row (integer-scaled).
  Rational residual;
};

/// Exact solve by fraction-free (Bareiss) elimination with full pivoting.
/// Rows are first scaled to integers; every intermediate stays an integer.
LinearSolveResult solve_linear(const Matrix& A, const Vector& b);

/// True iff A z = b is satisfied exactly.
bool satisfies(const Matrix& A, const Vector& b, const Vector& z);

/// True iff `z` lies in the affine solution set described by `result`.
bool in_solution_set(const LinearSolveResult& result, const Vector& z);

}  // namespace fplb
