#pragma once

// Brute-force search for (Q0, Q1, B, Δ) over admissible candidates built from
// the RPS vertex matrices. A grid point of a pair's key-equation family is kept
// when its phases replay exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fplb/instance.hpp"
#include "fplb/parallel.hpp"
#include "fplb/rps.hpp"

namespace fplb {

/// substitute_k(vertex_matrices()[vertex], a, b), then row `vertex` gains
/// slope·k + offset: a point part-way along the constant-action run that
/// leaves that vertex.
struct CandidateSpec {
  std::size_t vertex = 0;
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t slope = 0;
  std::int64_t offset = 0;

  QuadMatrix matrix() const;
  /// a ≥ 1, a + b ≥ 1, and 0 ≤ slope·k + offset ≤ run length for all k ≥ 1.
  bool well_formed() const;
  std::string label() const;
  Json to_json() const;

  friend bool operator==(const CandidateSpec&, const CandidateSpec&) = default;
};

CandidateSpec canonical_q0_spec();
CandidateSpec canonical_q1_spec();

struct SearchBounds {
  std::int64_t max_a = 6;
  std::int64_t max_b = 12;
  bool interpolate = false;    // include slope/offset points along each run
  std::optional<CandidateSpec> q0;  // pin Q0 instead of enumerating it
  std::optional<CandidateSpec> q1;  // pin Q1
  std::int64_t delta1_max = 4;     // Δ1 ∈ {1, ..., delta1_max}
  std::int64_t b22_steps = 100;    // B22 ∈ {−1/900, ..., −b22_steps/900}
  std::int64_t admissible_k = 6;   // candidate admissibility replay range
  std::int64_t phase_k = 3;        // phases replayed per surviving instance
  std::size_t max_hits = 128;
};

struct SearchHit {
  CandidateSpec q0;
  CandidateSpec q1;
  Matrix b;
  Vector delta;
  Rational d;  // the constant max{V1 b(k)} − max{V3 b(k)}

  Json to_json() const;
};

struct SearchStats {
  std::size_t candidates = 0;
  std::size_t pairs = 0;
  std::size_t consistent = 0;
  std::size_t sign_ok = 0;
  std::size_t phase_checked = 0;
  std::size_t hits = 0;  // before truncation to max_hits
};

struct SearchResult {
  std::vector<SearchHit> hits;
  SearchStats stats;

  Json to_json() const;
};

/// Admissible candidates within the bounds, in a fixed order.
std::vector<CandidateSpec> enumerate_candidates(const SearchBounds& bounds);

/// Picks a member of the key-equation family with Δ3 = 0, Δ1 = delta1 and
/// B22 = b22 when the family has room for it; a unique solution is returned
/// as is. Empty when no member satisfies the pins.
std::optional<std::pair<Matrix, Vector>> pick_member(const KeySolution& family, const Rational& delta1,
                                                     const Rational& b22);

/// Hits are ordered by (pair index, Δ1, B22 magnitude), independent of `exec`.
SearchResult search_instances(const SearchBounds& bounds, Execution exec = Execution::parallel);

}  // namespace fplb
