#include "fplb/fp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace fplb {

namespace {

std::string describe_tie(std::uint64_t t, const std::vector<std::size_t>& tied) {
  std::ostringstream os;
  os << "tie at t=" << t << " among actions {";
  for (std::size_t k = 0; k < tied.size(); ++k) os << (k ? "," : "") << tied[k] + 1;
  os << "}";
  return os.str();
}

Rational from_count(std::uint64_t c) { return Rational(mpz_class(std::to_string(c))); }

Vector negated(const Vector& v) { return -Vector(v); }

std::size_t resolve(const Vector& payoff, const TieBreakPolicy& policy, std::uint64_t t) {
  const auto tied = payoff.argmax_set();
  if (tied.size() == 1) return tied.front();
  return policy.choose(tied, t, payoff);
}

}  // namespace

TieEncountered::TieEncountered(std::uint64_t t, std::vector<std::size_t> tied)
    : std::runtime_error(describe_tie(t, tied)), t_(t), tied_(std::move(tied)) {}

TieBreakPolicy TieBreakPolicy::adversarial(TieCallback callback) {
  if (!callback) throw std::invalid_argument("adversarial policy needs a callback");
  return TieBreakPolicy(TieBreakKind::adversarial, std::move(callback));
}

std::size_t TieBreakPolicy::choose(std::span<const std::size_t> tied, std::uint64_t t,
                                   const Vector& utility) const {
  if (tied.empty()) throw std::logic_error("empty tied set");
  switch (kind_) {
    case TieBreakKind::lexicographic:
      return tied.front();
    case TieBreakKind::strict:
      throw TieEncountered(t, std::vector<std::size_t>(tied.begin(), tied.end()));
    case TieBreakKind::adversarial: {
      const std::size_t pick = callback_(tied, t, utility);
      if (std::find(tied.begin(), tied.end(), pick) == tied.end()) {
        throw std::logic_error("tie-break callback chose an index outside the tied set");
      }
      return pick;
    }
  }
  throw std::logic_error("unknown tie-break kind");
}

// ---------------------------------------------------------------- FpState

FpState FpState::symmetric(std::size_t n, TieBreakPolicy policy) {
  return symmetric(Vector(n), std::move(policy));
}

FpState FpState::symmetric(Vector u_init, TieBreakPolicy policy) {
  FpState s;
  s.x = Vector(u_init.size());
  s.U = std::move(u_init);
  s.policy = std::move(policy);
  return s;
}

FpState FpState::general(std::size_t rows, std::size_t cols, TieBreakPolicy policy) {
  FpState s;
  s.x = Vector(rows);
  s.y = Vector(cols);
  s.U = Vector(rows);
  s.col_payoff = Vector(cols);
  s.policy = std::move(policy);
  return s;
}

GeneralStep fp_step_general(FpState& state, const Matrix& A) {
  if (state.is_symmetric() || !state.col_payoff) {
    throw std::invalid_argument("fp_step_general: state is not in general mode");
  }
  if (A.rows() != state.x.size() || A.cols() != state.y->size()) {
    throw DimensionError("fp_step_general: matrix does not match state dimensions");
  }
  const std::uint64_t t = state.t + 1;
  const std::size_t i = resolve(state.U, state.policy, t);
  const std::size_t j = resolve(negated(*state.col_payoff), state.policy, t);

  state.x[i] += 1;
  (*state.y)[j] += 1;
  for (std::size_t r = 0; r < A.rows(); ++r) state.U[r] += A(r, j);
  for (std::size_t c = 0; c < A.cols(); ++c) (*state.col_payoff)[c] += A(i, c);
  state.t = t;
  return {i, j};
}

std::size_t fp_step_symmetric(FpState& state, const Matrix& A) {
  if (!state.is_symmetric()) throw std::invalid_argument("fp_step_symmetric: state is in general mode");
  if (!A.is_skew_symmetric()) throw std::invalid_argument("fp_step_symmetric: matrix is not skew-symmetric");
  if (A.rows() != state.U.size()) throw DimensionError("fp_step_symmetric: dimension mismatch");
  const std::uint64_t t = state.t + 1;
  const std::size_t i = resolve(state.U, state.policy, t);
  for (std::size_t r = 0; r < A.rows(); ++r) state.U[r] += A(r, i);
  state.x[i] += 1;
  state.t = t;
  return i;
}

Rational top_gap(const Vector& U) {
  if (U.size() < 2) throw DimensionError("top_gap needs at least two entries");
  const Rational* first = &U[0];
  const Rational* second = &U[1];
  if (*second > *first) std::swap(first, second);
  for (std::size_t i = 2; i < U.size(); ++i) {
    if (U[i] > *first) {
      second = first;
      first = &U[i];
    } else if (U[i] > *second) {
      second = &U[i];
    }
  }
  return *first - *second;
}

// ---------------------------------------------------------------- SymmetricRunner

SymmetricRunner::SymmetricRunner(const Matrix& A, const Vector& u_init, TieBreakPolicy policy)
    : SymmetricRunner(A, u_init, std::vector<std::uint64_t>(u_init.size(), 0), 0, std::move(policy)) {}

SymmetricRunner::SymmetricRunner(const Matrix& A, const Vector& u, std::vector<std::uint64_t> counts,
                                 std::uint64_t t, TieBreakPolicy policy)
    : n_(A.rows()), policy_(std::move(policy)), t_(t), counts_(std::move(counts)), a_(A), exact_u_(u) {
  if (!A.is_skew_symmetric()) throw std::invalid_argument("SymmetricRunner: matrix is not skew-symmetric");
  if (u.size() != n_ || counts_.size() != n_) throw DimensionError("SymmetricRunner: dimension mismatch");

  mpz_class den = common_denominator(A);
  const mpz_class den_u = common_denominator(u);
  mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), den_u.get_mpz_t());
  scale_ = Rational(den);

  auto to_i64 = [&](const Rational& value, std::int64_t& out) {
    const Rational scaled = value * scale_;  // an integer by construction of scale_
    if (!mpz_fits_slong_p(scaled.get_num_mpz_t()) || sizeof(long) < sizeof(std::int64_t)) return false;
    out = mpz_get_si(scaled.get_num_mpz_t());
    return true;
  };

  fast_ = mpz_fits_slong_p(den.get_mpz_t()) != 0;
  if (fast_) {
    cols_.resize(n_ * n_);
    u_.resize(n_);
    scratch_.resize(n_);
    for (std::size_t c = 0; c < n_ && fast_; ++c) {
      for (std::size_t r = 0; r < n_ && fast_; ++r) fast_ = to_i64(A(r, c), cols_[c * n_ + r]);
    }
    for (std::size_t r = 0; r < n_ && fast_; ++r) fast_ = to_i64(u[r], u_[r]);
  }
  if (!fast_) {
    cols_.clear();
    u_.clear();
  }
  tied_.reserve(n_);
}

std::size_t SymmetricRunner::choose_fast() {
  std::int64_t best = u_[0];
  tied_.clear();
  tied_.push_back(0);
  for (std::size_t r = 1; r < n_; ++r) {
    if (u_[r] > best) {
      best = u_[r];
      tied_.clear();
      tied_.push_back(r);
    } else if (u_[r] == best) {
      tied_.push_back(r);
    }
  }
  if (tied_.size() == 1) return tied_.front();
  return policy_.choose(tied_, t_ + 1, utility());
}

std::size_t SymmetricRunner::choose_exact() {
  tied_ = exact_u_.argmax_set();
  if (tied_.size() == 1) return tied_.front();
  return policy_.choose(tied_, t_ + 1, exact_u_);
}

void SymmetricRunner::switch_to_exact() {
  exact_u_ = utility();
  fast_ = false;
  cols_.clear();
  u_.clear();
  fallback_events_.push_back(t_ + 1);
}

std::size_t SymmetricRunner::step() {
  const std::size_t i = fast_ ? choose_fast() : choose_exact();
  if (fast_) {
    const std::int64_t* col = &cols_[i * n_];
    bool overflow = false;
    for (std::size_t r = 0; r < n_; ++r) overflow |= __builtin_add_overflow(u_[r], col[r], &scratch_[r]);
    if (!overflow) {
      u_.swap(scratch_);
    } else {
      switch_to_exact();
    }
  }
  if (!fast_) {
    for (std::size_t r = 0; r < n_; ++r) exact_u_[r] += a_(r, i);
  }
  ++counts_[i];
  ++t_;
  return i;
}

Vector SymmetricRunner::counts_vector() const {
  Vector v(n_);
  for (std::size_t r = 0; r < n_; ++r) v[r] = from_count(counts_[r]);
  return v;
}

Rational SymmetricRunner::utility_at(std::size_t i) const {
  if (!fast_) return exact_u_[i];
  Rational v(mpz_class(static_cast<long>(u_[i])));
  v /= scale_;
  return v;
}

Vector SymmetricRunner::utility() const {
  if (!fast_) return exact_u_;
  Vector v(n_);
  for (std::size_t r = 0; r < n_; ++r) v[r] = utility_at(r);
  return v;
}

std::size_t SymmetricRunner::leader() const {
  std::size_t best = 0;
  for (std::size_t r = 1; r < n_; ++r) {
    if (fast_ ? u_[r] > u_[best] : exact_u_[r] > exact_u_[best]) best = r;
  }
  return best;
}

Rational SymmetricRunner::max_utility() const { return utility_at(leader()); }

Rational SymmetricRunner::top_gap() const {
  if (!fast_) return fplb::top_gap(exact_u_);
  if (n_ < 2) throw DimensionError("top_gap needs at least two entries");
  std::int64_t first = std::numeric_limits<std::int64_t>::min();
  std::int64_t second = first;
  for (std::size_t r = 0; r < n_; ++r) {
    if (u_[r] > first) {
      second = first;
      first = u_[r];
    } else if (u_[r] > second) {
      second = u_[r];
    }
  }
  // first - second is exact as a rational even if it would overflow int64
  Rational gap(mpz_class(static_cast<long>(first)) - mpz_class(static_cast<long>(second)));
  gap /= scale_;
  return gap;
}

// ---------------------------------------------------------------- run

std::vector<std::uint64_t> SampleStride::times(std::uint64_t first, std::uint64_t last) const {
  std::vector<std::uint64_t> out;
  if (first > last) return out;
  switch (kind) {
    case Kind::none:
      break;
    case Kind::every:
      for (std::uint64_t t = first; t <= last; ++t) out.push_back(t);
      break;
    case Kind::geometric: {
      if (!(ratio > 1.0)) throw std::invalid_argument("geometric stride ratio must exceed 1");
      for (int n = 0;; ++n) {
        const double v = std::ceil(std::pow(ratio, n));
        if (v > static_cast<double>(last)) break;
        const auto t = static_cast<std::uint64_t>(v);
        if (t >= first && (out.empty() || out.back() != t)) out.push_back(t);
      }
      break;
    }
  }
  return out;
}

std::vector<std::pair<std::uint64_t, Rational>> Trajectory::gap_samples() const {
  std::vector<std::pair<std::uint64_t, Rational>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.emplace_back(s.t, s.gap);
  return out;
}

namespace {

Trajectory run_symmetric(FpState& state, const Matrix& A, std::uint64_t steps, const RunOptions& options) {
  if (A.rows() != state.U.size()) throw DimensionError("run: dimension mismatch");
  std::vector<std::uint64_t> counts(state.x.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (state.x[r] < 0 || state.x[r].get_den() != 1 || !mpz_fits_ulong_p(state.x[r].get_num_mpz_t())) {
      throw std::invalid_argument("run: action counts must be nonnegative integers");
    }
    counts[r] = mpz_get_ui(state.x[r].get_num_mpz_t());
  }
  SymmetricRunner runner(A, state.U, std::move(counts), state.t, state.policy);

  Trajectory traj;
  traj.start_t = state.t;
  traj.actions.reserve(steps);
  const std::uint64_t last = state.t + steps;
  const auto sample_times = options.stride.times(state.t + 1, last);
  auto next_sample = sample_times.begin();
  auto next_checkpoint = options.checkpoints.lower_bound(state.t);

  auto record_checkpoint = [&] {
    if (next_checkpoint != options.checkpoints.end() && *next_checkpoint == runner.t()) {
      traj.checkpoints.emplace(runner.t(), Checkpoint{runner.counts_vector(), runner.utility()});
      ++next_checkpoint;
    }
  };
  record_checkpoint();

  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::size_t action = runner.step();
    traj.actions.push_back(static_cast<std::uint32_t>(action));
    if (next_sample != sample_times.end() && *next_sample == runner.t()) {
      const Rational max_u = runner.max_utility();
      Rational gap = 2 * max_u / from_count(runner.t());
      traj.samples.push_back({runner.t(), action, max_u, std::move(gap), runner.top_gap()});
      ++next_sample;
    }
    record_checkpoint();
  }

  traj.fallback_events = runner.fallback_events();
  state.t = runner.t();
  state.x = runner.counts_vector();
  state.U = runner.utility();
  return traj;
}

Trajectory run_general(FpState& state, const Matrix& A, std::uint64_t steps, const RunOptions& options) {
  Trajectory traj;
  traj.start_t = state.t;
  traj.actions.reserve(steps);
  const std::uint64_t last = state.t + steps;
  const auto sample_times = options.stride.times(state.t + 1, last);
  auto next_sample = sample_times.begin();
  auto next_checkpoint = options.checkpoints.lower_bound(state.t);

  auto record_checkpoint = [&] {
    if (next_checkpoint != options.checkpoints.end() && *next_checkpoint == state.t) {
      traj.checkpoints.emplace(state.t, Checkpoint{state.x, state.U});
      ++next_checkpoint;
    }
  };
  record_checkpoint();

  for (std::uint64_t s = 0; s < steps; ++s) {
    const auto [i, j] = fp_step_general(state, A);
    (void)j;
    traj.actions.push_back(static_cast<std::uint32_t>(i));
    if (next_sample != sample_times.end() && *next_sample == state.t) {
      const Rational max_u = state.U.max();
      Rational gap = (max_u - state.col_payoff->min()) / from_count(state.t);
      traj.samples.push_back({state.t, i, max_u, std::move(gap), fplb::top_gap(state.U)});
      ++next_sample;
    }
    record_checkpoint();
  }
  return traj;
}

}  // namespace

Trajectory run(FpState& state, const Matrix& A, std::uint64_t steps, const RunOptions& options) {
  if (steps == 0) throw std::invalid_argument("run: steps must be positive");
  return state.is_symmetric() ? run_symmetric(state, A, steps, options)
                              : run_general(state, A, steps, options);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,action,max_U,gap,top_gap\n";
  for (const auto& s : trajectory.samples) {
    out << s.t << ',' << s.action + 1 << ',' << to_string(s.max_u) << ',' << to_string(s.gap) << ','
        << to_string(s.top_gap) << '\n';
  }
}

}  // namespace fplb
