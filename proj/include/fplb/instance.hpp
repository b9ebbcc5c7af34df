#pragma once

// Construction of the 9×9 game M (three coupled RPS blocks) and its 10×10
// augmentation, together with the phase-recurrence algebra that ties the
// interaction matrix B, the offset Δ and the state matrices V1, V2, V3 to an
// admissible pair (Q0, Q1).
//
// Block layout of M:
//   [ A_rps   B    −B  ]
//   [ −B    A_rps   B  ]
//   [  B     −B   A_rps]

#include <cstdint>
#include <vector>

#include "fplb/exact.hpp"
#include "fplb/json_io.hpp"
#include "fplb/linsolve.hpp"
#include "fplb/report.hpp"
#include "fplb/rps.hpp"

namespace fplb {

class InconsistentInstance : public std::runtime_error {
 public:
  InconsistentInstance(const std::string& what, Matrix residual)
      : std::runtime_error(what), residual_(std::move(residual)) {}
  const Matrix& residual() const { return residual_; }

 private:
  Matrix residual_;
};

/// Symmetric 3×3 coupling between RPS blocks.
class InteractionMatrix {
 public:
  explicit InteractionMatrix(Matrix b);
  const Matrix& matrix() const { return b_; }
  bool strictly_negative() const { return b_.max() < 0; }

 private:
  Matrix b_;
};

struct StateMatrices {
  Matrix v1;
  Matrix v2;
  Matrix v3;
};

struct InstanceBundle {
  QuadMatrix q0;
  QuadMatrix q1;
  QuadMatrix q;  // q1 − q0
  InteractionMatrix b;
  Vector delta;  // quadratic coefficients of Δ(k)
  StateMatrices vs;
  Vector u0;     // 9 entries: [V1 b(1); V2 b(1); V3 b(1)]
  Rational shift;  // the augmentation constant δ
  Matrix m;
  Matrix m_aug;

  Json to_json() const;
};

Matrix build_M(const InteractionMatrix& b);

/// Q0, Q1, B, Δ as found by the instance search; V's, U0, M and M_aug are
/// derived from them, never transcribed.
InstanceBundle canonical_constants();

/// Assembles a bundle from the free data, deriving everything else. Throws
/// InconsistentInstance when the block recurrences fail and
/// std::invalid_argument when the shift is out of range.
InstanceBundle make_bundle(const QuadMatrix& q0, const QuadMatrix& q1, const InteractionMatrix& b,
                           const Vector& delta, const Rational& shift);

/// V1 = 1Δᵀ + A_rps Q0, V2 = V1 C + B Q, V3 = V2 C − B Q, without checking.
StateMatrices derive_vs_unchecked(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                                  const QuadMatrix& q);

/// As derive_vs_unchecked, then asserts V1 + A_rps Q = V3 C.
StateMatrices derive_vs(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                        const QuadMatrix& q);

/// Checks all three block recurrences
///   V1 + A_rps Q = V3 C,  V2 − B Q = V1 C,  V3 + B Q = V2 C.
VerificationReport check_blocks(const StateMatrices& vs, const InteractionMatrix& b, const QuadMatrix& q);

/// A_rps Q + B Q (C − C²)  versus  1Δᵀ(C³ − I) + A_rps Q0 (C³ − I), entrywise.
VerificationReport check_key_equation(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                                      const QuadMatrix& q1);

/// Solution family of the key equation. Unknowns are ordered
/// (B11, B12, B13, B22, B23, B33, Δ1, Δ2, Δ3).
struct KeySolution {
  LinearSolveResult system;

  bool consistent() const { return system.consistent; }
  /// The particular solution's B and Δ.
  Matrix particular_b() const;
  Vector particular_delta() const;
  bool contains(const InteractionMatrix& b, const Vector& delta) const;
  Json to_json() const;

  static Vector pack(const Matrix& b, const Vector& delta);
  static Matrix unpack_b(const Vector& z);
  static Vector unpack_delta(const Vector& z);
};

KeySolution solve_key_equation(const QuadMatrix& q0, const QuadMatrix& q1);

struct KeyInequalityResult {
  VerificationReport report;
  std::vector<Rational> differences;  // d(k) for each k in range
  Rational margin;                    // −max{B}
  bool constant_difference = false;   // d(k) identical across the range
};

/// d(k) = max{V1 b(k)} − max{V3 b(k)} against the literal bound
/// 0 < d(k) < −max{B}.
KeyInequalityResult check_key_inequality(const Matrix& v1, const Matrix& v3, const InteractionMatrix& b,
                                         KRange range = {1, 20});

/// Closed-form T_k = Σ_{j<k} 1ᵀQ b(j) as a cubic c3 k³ + c2 k² + c1 k + c0.
struct PhaseTimetable {
  Rational c3, c2, c1, c0;

  static PhaseTimetable from(const QuadMatrix& q);
  Rational at(std::int64_t k) const;
};

/// 36k³ + 244k² + 378k − 658 for the canonical window.
std::int64_t timetable(std::int64_t k);

/// Index (0, 1, 2) of the block whose RPS copy is played during [T_k, T_{k+1}).
std::size_t active_block(std::int64_t k);

/// U at t = T_j: block active_block(j) holds V1 b(j), the next block V2 b(j),
/// the one after V3 b(j).
Vector rotated_stack(const StateMatrices& vs, std::int64_t j);

/// Û0 = U0 − min{U0}·1 + δ·[2,1,0, 2,1,0, 2,1,0], unchecked.
Vector augmented_init(const Vector& u0, const Rational& shift);

/// [[0, −ûᵀ], [û, M]], unchecked.
Matrix augment(const Matrix& m, const Vector& u_hat);

/// Validates δ ∈ (0, 1/1800), then augment(M, augmented_init(U0, δ)).
Matrix build_M_aug(const Matrix& m, const Vector& u0, const Rational& shift);

/// Values as typeset in the source derivation, kept only to document where
/// they disagree with the constructed instance.
struct PrintedConstants {
  Vector delta;  // [2, 290/27, 0]
  Vector u0;     // ninth entry printed as +12
  Vector t1_coefficients;  // window end t1 printed as 44k² + 608k + 646
};
PrintedConstants printed_constants();

/// Compares printed values with the constructed ones; every disagreement is
/// a failing witness with (expected = printed, actual = constructed).
VerificationReport transcription_report(const InstanceBundle& bundle);

/// Fixed-width text rendering with fractions "p/q", one row per line.
std::string format_matrix_text(const Matrix& m);

}  // namespace fplb
