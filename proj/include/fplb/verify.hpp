#pragma once

// Exact replays that certify the counterexample on finite prefixes.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fplb/fp.hpp"
#include "fplb/instance.hpp"
#include "fplb/parallel.hpp"
#include "fplb/report.hpp"

namespace fplb {

/// The RPS vertex formulas for k = 1..K on a single run of `game` to t = 9(K+1)².
/// `game` defaults to A_rps; passing anything else is a negative control.
VerificationReport verify_rps_periodicity(std::int64_t K, const Matrix& game = rps_matrix());

/// One phase [T_k, T_{k+1}) on bundle.m started from the rotated stack at k.
/// Every action must stay in the active block and replay the RPS window from
/// t0 = 1ᵀQ0 b(k). The active block's maximum must strictly lead the other
/// blocks at every step, and U must land on the rotated stack at k+1.
VerificationReport verify_phase(std::int64_t k, const InstanceBundle& bundle);

/// verify_phase for each k in the range; each phase is an independent replay.
VerificationReport verify_phases(KRange range, const InstanceBundle& bundle,
                                 Execution exec = Execution::parallel);

/// One run on M from U0 to T_{3K+1}; checks U at every T_j, j = 1..3K+1,
/// and the growth certificate max{U_{T_{3k+1}}} = V1[1,:]·b(3k+1) ≥ 18k².
VerificationReport verify_theorem(std::int64_t K, const InstanceBundle& bundle);

/// Compares FP on M_aug from zero (T+1 steps) with FP on M from U0 (T steps):
/// first action is the dummy, then î_{t+1} = i_t + 1, and the dummy's utility
/// stays strictly below the maximum for t ≥ 1.
VerificationReport verify_aug_offset(std::uint64_t T, const InstanceBundle& bundle);

struct NoTieResult {
  Rational min_top_gap;
  std::uint64_t at_t = 0;
  std::uint64_t ties = 0;  // t in [2, T] with a tied top
};

/// Exact minimum of top_gap(U_t) over 2 ≤ t ≤ T for lexicographic FP on
/// `game` started from zero. A positive minimum means every decision
/// i_3..i_{T+1} was made without a tie.
NoTieResult no_tie_scan(const Matrix& game, std::uint64_t T);

VerificationReport verify_no_tie(std::uint64_t T, const InstanceBundle& bundle);

struct GapPoint {
  std::uint64_t t;
  Rational gap;
};

/// 2·max{U_t}/t sampled per `stride` over t ∈ [1, T] for symmetric FP on
/// `game` from `u_init` (the duality gap of x_t/t when u_init = 0).
std::vector<GapPoint> gap_curve(const Matrix& game, const Vector& u_init, std::uint64_t T,
                                SampleStride stride = SampleStride::geometric());

struct RateFit {
  double exponent = 0;
  double coefficient = 0;
  double residual = 0;  // RMS of the log-space residuals
  std::uint64_t t_min = 0;
  std::uint64_t t_max = 0;
  std::size_t samples = 0;
};

/// Least-squares line through (log t, log gap) restricted to [t_min, t_max].
/// The window must span two decades and hold at least 10 samples covering
/// one decade or more.
RateFit fit_rate(std::span<const std::pair<std::uint64_t, double>> curve, std::uint64_t t_min,
                 std::uint64_t t_max);
RateFit fit_rate(const std::vector<GapPoint>& curve, std::uint64_t t_min, std::uint64_t t_max);

struct RateTolerance {
  double exponent = -1.0 / 3.0;
  double exponent_tol = 0.02;
  double coefficient = 0.36;
  double coefficient_tol = 0.05;
};

struct RateResult {
  VerificationReport report;
  RateFit fit;
  std::vector<GapPoint> curve;
};

RateResult verify_rate(std::uint64_t t_max_run, std::uint64_t fit_min, std::uint64_t fit_max,
                       const InstanceBundle& bundle, RateTolerance tol = {});

/// max{U_{t+1}} ≥ max{U_t} at every step, and a strict increase only when
/// the following action differs.
VerificationReport verify_monotone(const Matrix& game, const Vector& u_init, std::uint64_t T);

/// Replays `game` from zero in double precision and compares the action
/// sequence with the exact replay.
VerificationReport verify_float_agreement(const Matrix& game, std::uint64_t T);

/// Skew-symmetry of M and M_aug.
VerificationReport verify_skew(const InstanceBundle& bundle);

}  // namespace fplb
