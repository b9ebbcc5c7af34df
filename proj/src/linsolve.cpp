#include "fplb/linsolve.hpp"

#include <numeric>
#include <utility>

namespace fplb {

namespace {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// [A | b] with every row multiplied by the lcm of its denominators.
IntMatrix integer_augmented(const Matrix& A, const Vector& b) {
  IntMatrix out(A.rows(), std::vector<mpz_class>(A.cols() + 1));
  for (std::size_t r = 0; r < A.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < A.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A(r, c).get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b[r].get_den_mpz_t());
    for (std::size_t c = 0; c < A.cols(); ++c) {
      out[r][c] = A(r, c).get_num() * (l / A(r, c).get_den());
    }
    out[r][A.cols()] = b[r].get_num() * (l / b[r].get_den());
  }
  return out;
}

}  // namespace

LinearSolveResult solve_linear(const Matrix& A, const Vector& b) {
  if (A.rows() != b.size()) throw DimensionError("solve_linear: rhs size mismatch");
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  IntMatrix a = integer_augmented(A, b);

  std::vector<std::size_t> col_of(n);  // column position -> original unknown
  std::iota(col_of.begin(), col_of.end(), std::size_t{0});

  mpz_class prev = 1;
  std::size_t rank = 0;
  for (; rank < std::min(m, n); ++rank) {
    // Full pivoting: smallest nonzero magnitude in the trailing block keeps
    // the Bareiss determinants small.
    std::size_t pr = m, pc = n;
    for (std::size_t r = rank; r < m; ++r) {
      for (std::size_t c = rank; c < n; ++c) {
        if (a[r][c] == 0) continue;
        if (pr == m || mpz_cmpabs(a[r][c].get_mpz_t(), a[pr][pc].get_mpz_t()) < 0) {
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == m) break;
    std::swap(a[rank], a[pr]);
    if (pc != rank) {
      for (auto& row : a) std::swap(row[rank], row[pc]);
      std::swap(col_of[rank], col_of[pc]);
    }
    const mpz_class& pivot = a[rank][rank];
    for (std::size_t r = rank + 1; r < m; ++r) {
      for (std::size_t c = rank + 1; c <= n; ++c) {
        mpz_class v = pivot * a[r][c] - a[r][rank] * a[rank][c];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r][c] = std::move(v);
      }
      a[r][rank] = 0;
    }
    prev = a[rank][rank];
  }

  LinearSolveResult result;
  result.rank = rank;
  for (std::size_t r = rank; r < m; ++r) {
    if (a[r][n] != 0) {
      result.consistent = false;
      result.residual = Rational(a[r][n]);
      return result;
    }
  }
  result.consistent = true;

  // Back substitution in permuted coordinates; z[c] is unknown col_of[c].
  auto back_substitute = [&](std::vector<Rational> rhs, std::vector<Rational> z) {
    for (std::size_t i = rank; i-- > 0;) {
      Rational acc = rhs[i];
      for (std::size_t c = i + 1; c < n; ++c) {
        if (a[i][c] != 0 && z[c] != 0) acc -= Rational(a[i][c]) * z[c];
      }
      z[i] = acc / Rational(a[i][i]);
    }
    Vector out(n);
    for (std::size_t c = 0; c < n; ++c) out[col_of[c]] = z[c];
    return out;
  };

  std::vector<Rational> rhs(rank);
  for (std::size_t i = 0; i < rank; ++i) rhs[i] = Rational(a[i][n]);
  result.particular = back_substitute(rhs, std::vector<Rational>(n));

  for (std::size_t f = rank; f < n; ++f) {
    std::vector<Rational> z(n);
    z[f] = 1;
    result.null_basis.push_back(back_substitute(std::vector<Rational>(rank), std::move(z)));
  }
  return result;
}

bool satisfies(const Matrix& A, const Vector& b, const Vector& z) { return A * z == b; }

bool in_solution_set(const LinearSolveResult& result, const Vector& z) {
  if (!result.consistent) return false;
  if (result.null_basis.empty()) return z == result.particular;
  // Solve N c = z - particular for the coefficients c.
  const Vector diff = z - result.particular;
  Matrix basis(diff.size(), result.null_basis.size());
  for (std::size_t j = 0; j < result.null_basis.size(); ++j) {
    for (std::size_t i = 0; i < diff.size(); ++i) basis(i, j) = result.null_basis[j][i];
  }
  return solve_linear(basis, diff).consistent;
}

}  // namespace fplb
