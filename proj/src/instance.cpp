#include "fplb/instance.hpp"

#include <algorithm>
#include <sstream>

namespace fplb {

namespace {

Matrix ones_column_times(const Vector& delta) { return Matrix::outer(Vector::ones(3), delta); }

Matrix c_minus_c2() {
  const Matrix c = cmat();
  return c - c * c;
}

Matrix c3_minus_i() { return power(cmat(), 3) - Matrix::identity(3); }

// Unknown u in 0..5 -> symmetric unit matrix for that B entry.
const std::size_t kSymRow[6] = {0, 0, 0, 1, 1, 2};
const std::size_t kSymCol[6] = {0, 1, 2, 1, 2, 2};

Vector flatten(const Matrix& m) {
  Vector v(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  }
  return v;
}

}  // namespace

InteractionMatrix::InteractionMatrix(Matrix b) : b_(std::move(b)) {
  if (b_.rows() != 3 || b_.cols() != 3) throw DimensionError("interaction matrix must be 3x3");
  if (!b_.is_symmetric()) throw std::invalid_argument("interaction matrix must be symmetric");
}

Matrix build_M(const InteractionMatrix& b) {
  const Matrix a = rps_matrix();
  const Matrix& bm = b.matrix();
  const Matrix nb = -bm;
  return Matrix::blocks({{a, bm, nb}, {nb, a, bm}, {bm, nb, a}});
}

StateMatrices derive_vs_unchecked(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                                  const QuadMatrix& q) {
  if (delta.size() != 3) throw DimensionError("delta must have 3 coefficients");
  const Matrix c = cmat();
  const Matrix bq = b.matrix() * q.matrix();
  StateMatrices vs;
  vs.v1 = ones_column_times(delta) + rps_matrix() * q0.matrix();
  vs.v2 = vs.v1 * c + bq;
  vs.v3 = vs.v2 * c - bq;
  return vs;
}

StateMatrices derive_vs(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                        const QuadMatrix& q) {
  StateMatrices vs = derive_vs_unchecked(b, delta, q0, q);
  const Matrix residual = vs.v1 + rps_matrix() * q.matrix() - vs.v3 * cmat();
  if (residual != Matrix::zeros(3, 3)) {
    std::ostringstream os;
    os << "V1 + A_rps Q != V3 C; residual " << residual;
    throw InconsistentInstance(os.str(), residual);
  }
  return vs;
}

VerificationReport check_blocks(const StateMatrices& vs, const InteractionMatrix& b, const QuadMatrix& q) {
  VerificationReport report("block-recurrences", "matrix identities");
  const Matrix c = cmat();
  const Matrix bq = b.matrix() * q.matrix();
  const Matrix lines[3][2] = {{vs.v1 + rps_matrix() * q.matrix(), vs.v3 * c},
                              {vs.v2 - bq, vs.v1 * c},
                              {vs.v3 + bq, vs.v2 * c}};
  const char* names[3] = {"V1 + A_rps Q = V3 C", "V2 - B Q = V1 C", "V3 + B Q = V2 C"};
  for (int line = 0; line < 3; ++line) {
    for (std::size_t r = 0; r < 3; ++r) {
      report.expect_equal(std::string(names[line]) + " row " + std::to_string(r + 1), lines[line][1].row(r),
                          lines[line][0].row(r));
    }
  }
  return report;
}

VerificationReport check_key_equation(const InteractionMatrix& b, const Vector& delta, const QuadMatrix& q0,
                                      const QuadMatrix& q1) {
  VerificationReport report("key-equation", "3x3 entrywise");
  if (delta.size() != 3) throw DimensionError("delta must have 3 coefficients");
  const Matrix a = rps_matrix();
  const Matrix q = (q1 - q0).matrix();
  const Matrix shift = c3_minus_i();
  const Matrix lhs = a * q + b.matrix() * q * c_minus_c2();
  const Matrix rhs = ones_column_times(delta) * shift + a * q0.matrix() * shift;
  for (std::size_t r = 0; r < 3; ++r) {
    report.expect_equal("row " + std::to_string(r + 1), rhs.row(r), lhs.row(r));
  }
  return report;
}

// ---------------------------------------------------------------- key equation solve

Vector KeySolution::pack(const Matrix& b, const Vector& delta) {
  Vector z(9);
  for (std::size_t u = 0; u < 6; ++u) z[u] = b(kSymRow[u], kSymCol[u]);
  for (std::size_t i = 0; i < 3; ++i) z[6 + i] = delta[i];
  return z;
}

Matrix KeySolution::unpack_b(const Vector& z) {
  Matrix b(3, 3);
  for (std::size_t u = 0; u < 6; ++u) {
    b(kSymRow[u], kSymCol[u]) = z[u];
    b(kSymCol[u], kSymRow[u]) = z[u];
  }
  return b;
}

Vector KeySolution::unpack_delta(const Vector& z) { return z.slice(6, 3); }

Matrix KeySolution::particular_b() const { return unpack_b(system.particular); }
Vector KeySolution::particular_delta() const { return unpack_delta(system.particular); }

bool KeySolution::contains(const InteractionMatrix& b, const Vector& delta) const {
  return in_solution_set(system, pack(b.matrix(), delta));
}

Json KeySolution::to_json() const {
  Json out{{"consistent", system.consistent}, {"rank", system.rank}};
  if (!system.consistent) {
    out["residual"] = fplb::to_json(system.residual);
    return out;
  }
  out["unknowns"] = {"B11", "B12", "B13", "B22", "B23", "B33", "Delta1", "Delta2", "Delta3"};
  out["particular"] = {{"B", fplb::to_json(particular_b())}, {"Delta", fplb::to_json(particular_delta())}};
  Json basis = Json::array();
  for (const auto& n : system.null_basis) basis.push_back(fplb::to_json(n));
  out["null_basis"] = std::move(basis);
  return out;
}

KeySolution solve_key_equation(const QuadMatrix& q0, const QuadMatrix& q1) {
  const Matrix a = rps_matrix();
  const Matrix q = (q1 - q0).matrix();
  const Matrix shift = c3_minus_i();
  const Matrix qc = q * c_minus_c2();

  // vec(B Q (C − C²) − 1Δᵀ(C³ − I)) = vec(A_rps Q0 (C³ − I) − A_rps Q)
  Matrix coeffs(9, 9);
  for (std::size_t u = 0; u < 9; ++u) {
    Matrix term(3, 3);
    if (u < 6) {
      Matrix unit(3, 3);
      unit(kSymRow[u], kSymCol[u]) = 1;
      unit(kSymCol[u], kSymRow[u]) = 1;
      term = unit * qc;
    } else {
      Vector unit(3);
      unit[u - 6] = 1;
      term = -(ones_column_times(unit) * shift);
    }
    const Vector col = flatten(term);
    for (std::size_t e = 0; e < 9; ++e) coeffs(e, u) = col[e];
  }
  const Vector rhs = flatten(a * q0.matrix() * shift - a * q);
  return KeySolution{solve_linear(coeffs, rhs)};
}

// ---------------------------------------------------------------- key inequality

KeyInequalityResult check_key_inequality(const Matrix& v1, const Matrix& v3, const InteractionMatrix& b,
                                         KRange range) {
  KeyInequalityResult result{
      VerificationReport("key-inequality", "k=" + std::to_string(range.first) + ".." +
                                               std::to_string(range.last)),
      {},
      -b.matrix().max(),
      true};
  for (std::int64_t k = range.first; k <= range.last; ++k) {
    const Rational d = (v1 * bvec(k)).max() - (v3 * bvec(k)).max();
    result.differences.push_back(d);
    if (d != result.differences.front()) result.constant_difference = false;
    const std::string where = "k=" + std::to_string(k);
    if (d <= 0) {
      result.report.fail(where + " d(k) > 0", Rational(0), d);
    } else if (d >= result.margin) {
      result.report.fail(where + " d(k) < -max{B}", result.margin, d);
    } else {
      result.report.witness(where + " d(k)", result.margin, d);
    }
  }
  if (!result.differences.empty()) {
    result.report.note("d(k) " + std::string(result.constant_difference ? "is constant = " : "varies, d(first) = ") +
                       to_string(result.differences.front()) + "; -max{B} = " + to_string(result.margin));
  }
  return result;
}

// ---------------------------------------------------------------- timetable

PhaseTimetable PhaseTimetable::from(const QuadMatrix& q) {
  const Vector s = q.column_sums();  // coefficients of k², k, 1
  PhaseTimetable tt;
  tt.c3 = s[0] / 3;
  tt.c2 = (s[1] - s[0]) / 2;
  tt.c1 = s[0] / 6 - s[1] / 2 + s[2];
  tt.c0 = -s[2];
  return tt;
}

Rational PhaseTimetable::at(std::int64_t k) const {
  const Rational kr = make_rational(k);
  return ((c3 * kr + c2) * kr + c1) * kr + c0;
}

std::int64_t timetable(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("timetable: k must be >= 1");
  return ((36 * k + 244) * k + 378) * k - 658;
}

std::size_t active_block(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("active_block: k must be >= 1");
  return static_cast<std::size_t>((k - 1) % 3);
}

Vector rotated_stack(const StateMatrices& vs, std::int64_t j) {
  const Matrix* order[3] = {&vs.v1, &vs.v2, &vs.v3};
  const std::size_t r = active_block(j);
  const Vector bj = bvec(j);
  std::vector<Rational> out;
  out.reserve(9);
  for (std::size_t block = 0; block < 3; ++block) {
    const Vector part = *order[(block + 3 - r) % 3] * bj;
    out.insert(out.end(), part.begin(), part.end());
  }
  return Vector(std::move(out));
}

// ---------------------------------------------------------------- augmentation

Vector augmented_init(const Vector& u0, const Rational& shift) {
  if (u0.size() % 3 != 0) throw DimensionError("augmented_init: U0 must consist of 3-blocks");
  Vector u_hat = u0;
  const Rational offset = -u0.min();
  const Rational pattern[3] = {2 * shift, shift, Rational(0)};
  for (std::size_t i = 0; i < u_hat.size(); ++i) u_hat[i] += offset + pattern[i % 3];
  return u_hat;
}

Matrix augment(const Matrix& m, const Vector& u_hat) {
  if (!m.is_square() || m.rows() != u_hat.size()) throw DimensionError("augment: dimension mismatch");
  const std::size_t n = m.rows() + 1;
  Matrix out(n, n);
  for (std::size_t i = 0; i < u_hat.size(); ++i) {
    out(0, i + 1) = -u_hat[i];
    out(i + 1, 0) = u_hat[i];
    for (std::size_t j = 0; j < u_hat.size(); ++j) out(i + 1, j + 1) = m(i, j);
  }
  return out;
}

Matrix build_M_aug(const Matrix& m, const Vector& u0, const Rational& shift) {
  if (shift <= 0 || shift >= make_rational(1, 1800)) {
    throw std::invalid_argument("augmentation shift must lie in (0, 1/1800), got " + to_string(shift));
  }
  return augment(m, augmented_init(u0, shift));
}

// ---------------------------------------------------------------- bundles

InstanceBundle make_bundle(const QuadMatrix& q0, const QuadMatrix& q1, const InteractionMatrix& b,
                           const Vector& delta, const Rational& shift) {
  const QuadMatrix q = q1 - q0;
  StateMatrices vs = derive_vs(b, delta, q0, q);
  Vector u0 = concat({vs.v1 * bvec(1), vs.v2 * bvec(1), vs.v3 * bvec(1)});
  Matrix m = build_M(b);
  Matrix m_aug = build_M_aug(m, u0, shift);
  return InstanceBundle{q0, q1, q, b, delta, std::move(vs), std::move(u0), shift, std::move(m), std::move(m_aug)};
}

InstanceBundle canonical_constants() {
  const Matrix b = make_rational(-1, 900) * Matrix::from_ints({{71, 54, 75}, {54, 21, 25}, {75, 25, 50}});
  const Vector delta{Rational(2), make_rational(298, 27), Rational(0)};
  return make_bundle(canonical_q0(), canonical_q1(), InteractionMatrix(b), delta, make_rational(1, 2700));
}

Json InstanceBundle::to_json() const {
  const PhaseTimetable tt = PhaseTimetable::from(q);
  return Json{{"Q0", fplb::to_json(q0.matrix())},
              {"Q1", fplb::to_json(q1.matrix())},
              {"Q", fplb::to_json(q.matrix())},
              {"B", fplb::to_json(b.matrix())},
              {"Delta", fplb::to_json(delta)},
              {"V1", fplb::to_json(vs.v1)},
              {"V2", fplb::to_json(vs.v2)},
              {"V3", fplb::to_json(vs.v3)},
              {"U0", fplb::to_json(u0)},
              {"delta", fplb::to_json(shift)},
              {"timetable", {{"c3", fplb::to_json(tt.c3)},
                             {"c2", fplb::to_json(tt.c2)},
                             {"c1", fplb::to_json(tt.c1)},
                             {"c0", fplb::to_json(tt.c0)}}},
              {"M", fplb::to_json(m)},
              {"M_aug", fplb::to_json(m_aug)}};
}

PrintedConstants printed_constants() {
  return PrintedConstants{
      Vector{Rational(2), make_rational(290, 27), Rational(0)},
      Vector{make_rational(460, 27), make_rational(136, 27), make_rational(460, 27), make_rational(-169687, 2700),
             make_rational(-67513, 2700), make_rational(-1357, 27), Rational(-5), Rational(17), Rational(12)},
      Vector::from_ints({44, 608, 646})};
}

VerificationReport transcription_report(const InstanceBundle& bundle) {
  VerificationReport report("transcription", "printed vs constructed constants");
  const PrintedConstants printed = printed_constants();
  report.expect_equal("Delta", printed.delta, bundle.delta);
  report.expect_equal("U0", printed.u0, bundle.u0);
  report.expect_equal("t1 = 1^T Q1 b(k) coefficients", printed.t1_coefficients, bundle.q1.column_sums());
  report.note("constructed values are authoritative; printed values are kept for reference only");
  return report;
}

std::string format_matrix_text(const Matrix& m) {
  std::vector<std::string> cells(m.rows() * m.cols());
  std::size_t width = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      cells[r * m.cols() + c] = to_string(m(r, c));
      width = std::max(width, cells[r * m.cols() + c].size());
    }
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::string& cell = cells[r * m.cols() + c];
      if (c) os << "  ";
      os << std::string(width - cell.size(), ' ') << cell;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fplb
