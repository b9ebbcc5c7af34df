#pragma once

// Fictitious play for zero-sum matrix games.
//
// Action indices are 0-based throughout the C++ API; CSV and CLI output use
// 1-based indices.
//
// Two update rules are provided:
//   general:   i_t = argmax (A y_{t-1}),  j_t = argmin (Aᵀ x_{t-1})
//   symmetric: i_t = argmax U_{t-1},      U_t = U_{t-1} + A[:, i_t]
// The symmetric rule applies to skew-symmetric A and optionally starts from a
// nonzero U_init (so U_t = U_init + A x_t).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "fplb/exact.hpp"

namespace fplb {

class TieEncountered : public std::runtime_error {
 public:
  TieEncountered(std::uint64_t t, std::vector<std::size_t> tied);
  std::uint64_t step() const { return t_; }
  const std::vector<std::size_t>& tied() const { return tied_; }

 private:
  std::uint64_t t_;
  std::vector<std::size_t> tied_;
};

enum class TieBreakKind { lexicographic, adversarial, strict };

/// Decision callback for adversarial tie-breaking: (tied set, step t, full
/// utility vector) -> chosen index. The choice must be a member of the tied set.
using TieCallback =
    std::function<std::size_t(std::span<const std::size_t> tied, std::uint64_t t, const Vector& utility)>;

class TieBreakPolicy {
 public:
  static TieBreakPolicy lexicographic() { return TieBreakPolicy(TieBreakKind::lexicographic, {}); }
  static TieBreakPolicy strict() { return TieBreakPolicy(TieBreakKind::strict, {}); }
  static TieBreakPolicy adversarial(TieCallback callback);

  TieBreakKind kind() const { return kind_; }

  /// Picks one index of a tied set of size >= 2. Throws TieEncountered under
  /// the strict policy, std::logic_error if a callback answers outside the set.
  std::size_t choose(std::span<const std::size_t> tied, std::uint64_t t, const Vector& utility) const;

 private:
  TieBreakPolicy(TieBreakKind kind, TieCallback callback)
      : kind_(kind), callback_(std::move(callback)) {}

  TieBreakKind kind_;
  TieCallback callback_;
};

/// Iteration state. x and y hold unnormalized action counts (‖x‖₁ = t).
/// Symmetric mode: U = U_init + A x, y absent.
/// General mode: U = A y (row player's payoffs), col_payoff = Aᵀ x.
struct FpState {
  std::uint64_t t = 0;
  Vector x;
  std::optional<Vector> y;
  Vector U;
  std::optional<Vector> col_payoff;
  TieBreakPolicy policy = TieBreakPolicy::lexicographic();

  static FpState symmetric(std::size_t n, TieBreakPolicy policy = TieBreakPolicy::lexicographic());
  static FpState symmetric(Vector u_init, TieBreakPolicy policy = TieBreakPolicy::lexicographic());
  static FpState general(std::size_t rows, std::size_t cols,
                         TieBreakPolicy policy = TieBreakPolicy::lexicographic());

  bool is_symmetric() const { return !y.has_value(); }
};

struct GeneralStep {
  std::size_t i;
  std::size_t j;
};

/// One round of the two-player rule. The column player's argmin ties are
/// resolved by applying the policy to the negated payoff vector.
GeneralStep fp_step_general(FpState& state, const Matrix& A);

/// One round of the symmetric rule; returns i_t.
std::size_t fp_step_symmetric(FpState& state, const Matrix& A);

/// max{U} minus the second-largest entry; zero iff the top is tied.
Rational top_gap(const Vector& U);

/// Symmetric fictitious play on a scaled-integer fast path.
///
/// Utilities are stored as int64 numerators over the common denominator of A
/// and U_init, so a step is n integer additions. Additions are overflow
/// checked; on overflow the runner switches permanently to exact rationals and
/// records the step in fallback_events().
class SymmetricRunner {
 public:
  SymmetricRunner(const Matrix& A, const Vector& u_init,
                  TieBreakPolicy policy = TieBreakPolicy::lexicographic());
  /// Resumes from existing counts; `u` is the current utility vector.
  SymmetricRunner(const Matrix& A, const Vector& u, std::vector<std::uint64_t> counts,
                  std::uint64_t t, TieBreakPolicy policy);

  /// Plays one step, returns the chosen action.
  std::size_t step();

  std::uint64_t t() const { return t_; }
  std::size_t dimension() const { return n_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  Vector counts_vector() const;

  Vector utility() const;
  Rational utility_at(std::size_t i) const;
  Rational max_utility() const;
  Rational top_gap() const;
  /// Index of the largest entry with ties to the lowest index.
  std::size_t leader() const;

  bool fast_path() const { return fast_; }
  const std::vector<std::uint64_t>& fallback_events() const { return fallback_events_; }

 private:
  void switch_to_exact();
  std::size_t choose_fast();
  std::size_t choose_exact();

  std::size_t n_;
  TieBreakPolicy policy_;
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> counts_;

  bool fast_ = false;
  Rational scale_;                   // common denominator
  std::vector<std::int64_t> cols_;   // scaled A, column-major
  std::vector<std::int64_t> u_;      // scaled U
  std::vector<std::int64_t> scratch_;

  Matrix a_;
  Vector exact_u_;
  std::vector<std::uint64_t> fallback_events_;
  std::vector<std::size_t> tied_;
};

/// Sampling schedule for trajectory traces.
struct SampleStride {
  enum class Kind { none, every, geometric };
  Kind kind = Kind::geometric;
  double ratio = 1.1;

  static SampleStride none() { return {Kind::none, 1.0}; }
  static SampleStride every() { return {Kind::every, 1.0}; }
  static SampleStride geometric(double ratio = 1.1) { return {Kind::geometric, ratio}; }

  /// Sample times in [first, last], ascending. Geometric times are ⌈ratio^n⌉.
  std::vector<std::uint64_t> times(std::uint64_t first, std::uint64_t last) const;
};

struct RunOptions {
  std::set<std::uint64_t> checkpoints;
  SampleStride stride = SampleStride::geometric();
};

struct Checkpoint {
  Vector x;
  Vector U;
};

/// One trace row. `gap` is 2·max{U_t}/t in symmetric mode (the duality gap of
/// x_t/t when U_init = 0) and the two-player duality gap in general mode.
struct TraceSample {
  std::uint64_t t;
  std::size_t action;
  Rational max_u;
  Rational gap;
  Rational top_gap;
};

struct Trajectory {
  std::uint64_t start_t = 0;
  std::vector<std::uint32_t> actions;  // actions[s] is i_{start_t + s + 1}
  std::map<std::uint64_t, Checkpoint> checkpoints;
  std::vector<TraceSample> samples;
  std::vector<std::uint64_t> fallback_events;

  std::uint64_t final_t() const { return start_t + actions.size(); }
  std::vector<std::pair<std::uint64_t, Rational>> gap_samples() const;
};

/// Advances `state` by `steps` rounds (symmetric or general per the state's
/// mode). The trajectory holds the actions plus the requested checkpoints and samples.
Trajectory run(FpState& state, const Matrix& A, std::uint64_t steps, const RunOptions& options = {});

/// CSV with columns t, action, max_U, gap, top_gap (rationals as "p/q",
/// actions 1-based).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace fplb
