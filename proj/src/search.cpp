#include "fplb/search.hpp"

#include <algorithm>

#include "fplb/verify.hpp"

namespace fplb {

namespace {

const std::int64_t kRunExtra[3] = {1, 3, 5};

// Unknown positions in the packed key-equation vector.
constexpr std::size_t kB22 = 3;
constexpr std::size_t kDelta1 = 6;
constexpr std::size_t kDelta3 = 8;

bool admissible(const QuadMatrix& q, std::int64_t k_max) {
  try {
    return is_admissible(q, {1, k_max}).passed();
  } catch (const std::invalid_argument&) {
    return false;
  }
}

bool window_grows(const QuadMatrix& q0, const QuadMatrix& q1, std::int64_t k_max) {
  const QuadMatrix q = q1 - q0;
  if (q.column_sums()[0] <= 0) return false;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const Vector counts = q.at(k);
    for (const auto& c : counts) {
      if (c < 0) return false;
    }
    if (counts.sum() <= 0) return false;
  }
  return true;
}

// Members of a key-equation family as an affine function of the pinned
// values (Δ1, B22), with Δ3 = 0. Falls back to pick_member when the pins are
// not independent on the family.
class FamilyGrid {
 public:
  explicit FamilyGrid(const KeySolution& family) : family_(family) {
    const LinearSolveResult& sys = family.system;
    base_ = sys.particular;
    if (sys.null_basis.empty()) {
      affine_ = true;
      d1_dir_ = Vector(base_.size());
      b22_dir_ = Vector(base_.size());
      return;
    }
    const std::size_t pins[3] = {kDelta3, kDelta1, kB22};
    Matrix coeffs(3, sys.null_basis.size());
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < sys.null_basis.size(); ++c) coeffs(r, c) = sys.null_basis[c][pins[r]];
    }
    const LinearSolveResult probe = solve_linear(coeffs, Vector(3));
    if (probe.rank != 3) return;
    affine_ = true;
    auto combine = [&](const Vector& rhs) {
      const LinearSolveResult c = solve_linear(coeffs, rhs);
      Vector z(base_.size());
      for (std::size_t i = 0; i < sys.null_basis.size(); ++i) {
        Vector step = sys.null_basis[i];
        step *= c.particular[i];
        z += step;
      }
      return z;
    };
    base_ += combine(Vector{-base_[kDelta3], -base_[kDelta1], -base_[kB22]});
    d1_dir_ = combine(Vector{Rational(0), Rational(1), Rational(0)});
    b22_dir_ = combine(Vector{Rational(0), Rational(0), Rational(1)});
  }

  bool unique() const { return family_.system.null_basis.empty(); }

  /// False when some B entry is nonnegative at every corner of the grid
  /// rectangle, hence (being affine) on the whole rectangle.
  bool may_be_negative(const Rational& d1_lo, const Rational& d1_hi, const Rational& b22_lo,
                       const Rational& b22_hi) const {
    if (!affine_) return true;
    for (std::size_t u = 0; u < 6; ++u) {
      bool negative_somewhere = false;
      for (const Rational& d1 : {d1_lo, d1_hi}) {
        for (const Rational& b22 : {b22_lo, b22_hi}) {
          const Rational value = unique() ? base_[u] : base_[u] + d1 * d1_dir_[u] + b22 * b22_dir_[u];
          negative_somewhere |= value < 0;
        }
      }
      if (!negative_somewhere) return false;
    }
    return true;
  }

  std::optional<std::pair<Matrix, Vector>> member(const Rational& delta1, const Rational& b22) const {
    if (!affine_) return pick_member(family_, delta1, b22);
    Vector z = base_;
    if (!unique()) {
      z += delta1 * d1_dir_;
      z += b22 * b22_dir_;
    }
    return std::make_pair(KeySolution::unpack_b(z), KeySolution::unpack_delta(z));
  }

 private:
  const KeySolution& family_;
  bool affine_ = false;
  Vector base_;
  Vector d1_dir_;
  Vector b22_dir_;
};

struct PairOutcome {
  bool consistent = false;
  std::size_t sign_ok = 0;
  std::size_t phase_checked = 0;
  std::vector<SearchHit> hits;
};

PairOutcome examine_pair(const CandidateSpec& s0, const CandidateSpec& s1, const SearchBounds& bounds) {
  PairOutcome out;
  const QuadMatrix q0 = s0.matrix();
  const QuadMatrix q1 = s1.matrix();
  const KeySolution family = solve_key_equation(q0, q1);
  if (!family.consistent()) return out;
  out.consistent = true;

  const FamilyGrid grid(family);
  const bool unique = grid.unique();
  const std::int64_t d1_max = unique ? 1 : bounds.delta1_max;
  const std::int64_t b22_max = unique ? 1 : bounds.b22_steps;
  if (!grid.may_be_negative(make_rational(1), make_rational(d1_max), make_rational(-b22_max, 900),
                            make_rational(-1, 900))) {
    return out;
  }
  for (std::int64_t d1 = 1; d1 <= d1_max; ++d1) {
    for (std::int64_t j = 1; j <= b22_max; ++j) {
      const auto member = grid.member(make_rational(d1), make_rational(-j, 900));
      if (!member) continue;
      const InteractionMatrix b(member->first);
      if (!b.strictly_negative()) continue;
      const QuadMatrix q = q1 - q0;
      StateMatrices vs;
      try {
        vs = derive_vs(b, member->second, q0, q);
      } catch (const InconsistentInstance&) {
        continue;
      }
      const KeyInequalityResult ineq = check_key_inequality(vs.v1, vs.v3, b, {1, 20});
      if (!ineq.constant_difference || ineq.differences.front() <= 0) continue;
      ++out.sign_ok;

      std::optional<InstanceBundle> bundle;
      try {
        bundle.emplace(make_bundle(q0, q1, b, member->second, make_rational(1, 2700)));
      } catch (const std::exception&) {
        continue;
      }
      ++out.phase_checked;
      if (!verify_phases({1, bounds.phase_k}, *bundle, Execution::serial).passed()) continue;
      out.hits.push_back({s0, s1, member->first, member->second, ineq.differences.front()});
    }
  }
  return out;
}

}  // namespace

QuadMatrix CandidateSpec::matrix() const {
  if (vertex > 2) throw std::invalid_argument("candidate vertex must be 0, 1 or 2");
  Matrix m = substitute_k(vertex_matrices()[vertex], a, b).matrix();
  m(vertex, 1) += slope;
  m(vertex, 2) += offset;
  return QuadMatrix(std::move(m));
}

bool CandidateSpec::well_formed() const {
  if (vertex > 2 || a < 1 || a + b < 1) return false;
  if (slope < 0 || slope > 6 * a) return false;
  const std::int64_t at_one = slope + offset;
  return at_one >= 0 && at_one <= 6 * (a + b) + kRunExtra[vertex];
}

std::string CandidateSpec::label() const {
  return "v" + std::to_string(vertex + 1) + "(" + std::to_string(a) + "k" + (b < 0 ? "" : "+") +
         std::to_string(b) + ")" + (slope || offset ? "+[" + std::to_string(slope) + "k" +
                                                          (offset < 0 ? "" : "+") + std::to_string(offset) + "]"
                                                    : "");
}

Json CandidateSpec::to_json() const {
  return Json{{"vertex", vertex + 1}, {"a", a},           {"b", b},
              {"slope", slope},       {"offset", offset}, {"Q", fplb::to_json(matrix().matrix())}};
}

CandidateSpec canonical_q0_spec() { return {0, 2, 0, 12, -12}; }
CandidateSpec canonical_q1_spec() { return {1, 4, 8, 8, 21}; }

Json SearchHit::to_json() const {
  return Json{{"Q0", q0.to_json()},
              {"Q1", q1.to_json()},
              {"B", fplb::to_json(b)},
              {"Delta", fplb::to_json(delta)},
              {"d", fplb::to_json(d)}};
}

Json SearchResult::to_json() const {
  Json out{{"candidates", stats.candidates},
           {"pairs", stats.pairs},
           {"consistent", stats.consistent},
           {"sign_ok", stats.sign_ok},
           {"phase_checked", stats.phase_checked},
           {"hits_found", stats.hits}};
  Json list = Json::array();
  for (const auto& h : hits) list.push_back(h.to_json());
  out["hits"] = std::move(list);
  return out;
}

std::vector<CandidateSpec> enumerate_candidates(const SearchBounds& bounds) {
  std::vector<CandidateSpec> out;
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::int64_t a = 1; a <= bounds.max_a; ++a) {
      for (std::int64_t b = -bounds.max_b; b <= bounds.max_b; ++b) {
        if (a + b < 1) continue;
        if (!bounds.interpolate) {
          out.push_back({v, a, b, 0, 0});
          continue;
        }
        const std::int64_t run = 6 * (a + b) + kRunExtra[v];
        for (std::int64_t slope = 0; slope <= 6 * a; ++slope) {
          for (std::int64_t at_one = 0; at_one <= run; ++at_one) out.push_back({v, a, b, slope, at_one - slope});
        }
      }
    }
  }
  std::erase_if(out, [&](const CandidateSpec& c) { return !c.well_formed(); });
  return out;
}

std::optional<std::pair<Matrix, Vector>> pick_member(const KeySolution& family, const Rational& delta1,
                                                     const Rational& b22) {
  if (!family.consistent()) return std::nullopt;
  const LinearSolveResult& sys = family.system;
  Vector z = sys.particular;
  if (!sys.null_basis.empty()) {
    // Solve for basis coefficients c with (p + N c)[pin] = value.
    const std::size_t pins[3] = {kDelta3, kDelta1, kB22};
    const Rational values[3] = {Rational(0), delta1, b22};
    Matrix coeffs(3, sys.null_basis.size());
    Vector rhs(3);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < sys.null_basis.size(); ++c) coeffs(r, c) = sys.null_basis[c][pins[r]];
      rhs[r] = values[r] - z[pins[r]];
    }
    const LinearSolveResult pinned = solve_linear(coeffs, rhs);
    if (!pinned.consistent) return std::nullopt;
    for (std::size_t c = 0; c < sys.null_basis.size(); ++c) {
      Vector step = sys.null_basis[c];
      step *= pinned.particular[c];
      z += step;
    }
  }
  return std::make_pair(KeySolution::unpack_b(z), KeySolution::unpack_delta(z));
}

SearchResult search_instances(const SearchBounds& bounds, Execution exec) {
  SearchResult result;
  std::vector<CandidateSpec> firsts;
  std::vector<CandidateSpec> seconds;
  if (bounds.q0 && bounds.q1) {
    firsts = {*bounds.q0};
    seconds = {*bounds.q1};
  } else {
    const std::vector<CandidateSpec> all = enumerate_candidates(bounds);
    std::vector<CandidateSpec> good;
    good.reserve(all.size());
    std::vector<char> keep(all.size(), 0);
    for_each_index(all.size(), exec,
                   [&](std::size_t i) { keep[i] = admissible(all[i].matrix(), bounds.admissible_k); });
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (keep[i]) good.push_back(all[i]);
    }
    firsts = bounds.q0 ? std::vector<CandidateSpec>{*bounds.q0} : good;
    seconds = bounds.q1 ? std::vector<CandidateSpec>{*bounds.q1} : good;
    result.stats.candidates = good.size();
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < firsts.size(); ++i) {
    const QuadMatrix q0 = firsts[i].matrix();
    for (std::size_t j = 0; j < seconds.size(); ++j) {
      if (window_grows(q0, seconds[j].matrix(), bounds.phase_k)) pairs.emplace_back(i, j);
    }
  }
  result.stats.pairs = pairs.size();

  std::vector<PairOutcome> outcomes(pairs.size());
  for_each_index(pairs.size(), exec, [&](std::size_t p) {
    outcomes[p] = examine_pair(firsts[pairs[p].first], seconds[pairs[p].second], bounds);
  });

  for (auto& o : outcomes) {
    result.stats.consistent += o.consistent ? 1 : 0;
    result.stats.sign_ok += o.sign_ok;
    result.stats.phase_checked += o.phase_checked;
    result.stats.hits += o.hits.size();
    for (auto& h : o.hits) {
      if (result.hits.size() >= bounds.max_hits) break;
      result.hits.push_back(std::move(h));
    }
  }
  return result;
}

}  // namespace fplb
