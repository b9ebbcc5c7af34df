#pragma once

// Exact rational scalars, vectors and matrices.
//
// Every quantity that can influence an argmax is kept exact: fictitious play
// is a discontinuous map, and a single rounding error near a tie changes the
// whole downstream trajectory.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fplb {

/// Arbitrary-precision rational, always canonical (lowest terms, q > 0).
using Rational = mpq_class;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p/q" or "p" (optional leading '-'). Throws std::invalid_argument on
/// malformed input or a zero denominator. The result is canonicalized, so
/// "2/4" parses to 1/2.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);

/// Decimal rendering with `digits` significant digits, round-half-even,
/// e.g. 1/3 -> "3.33333333333e-01".
std::string to_decimal(const Rational& value, int digits = 12);

Rational make_rational(std::int64_t num, std::int64_t den = 1);

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t size) : entries_(size) {}
  Vector(std::initializer_list<Rational> entries) : entries_(entries) {}
  explicit Vector(std::vector<Rational> entries) : entries_(std::move(entries)) {}

  static Vector from_ints(std::initializer_list<std::int64_t> values);
  static Vector from_ints(std::span<const std::int64_t> values);
  static Vector ones(std::size_t size);

  std::size_t size() const { return entries_.size(); }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const std::vector<Rational>& entries() const { return entries_; }

  Rational max() const;
  Rational min() const;
  Rational sum() const;
  /// All indices attaining the maximum, ascending.
  std::vector<std::size_t> argmax_set() const;
  Vector slice(std::size_t begin, std::size_t count) const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(const Rational& scale);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<Rational> entries_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator-(Vector v);
Vector operator*(const Rational& scale, Vector v);
Rational dot(const Vector& lhs, const Vector& rhs);
Vector concat(std::initializer_list<Vector> parts);

/// Dense row-major matrix of rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix from_ints(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  /// Assembles a block matrix. All blocks in a block-row share a height and
  /// all blocks in a block-column share a width.
  static Matrix blocks(const std::vector<std::vector<Matrix>>& grid);
  /// u vᵀ
  static Matrix outer(const Vector& u, const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector col(std::size_t c) const;
  Matrix transpose() const;
  Rational max() const;

  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const;
  /// True iff Aᵀ = −A.
  bool is_skew_symmetric() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(const Rational& scale);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(const Rational& scale, Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Vector operator*(const Matrix& lhs, const Vector& rhs);
/// Row vector times matrix: vᵀA.
Vector operator*(const Vector& lhs, const Matrix& rhs);
Matrix power(const Matrix& m, unsigned exponent);

std::ostream& operator<<(std::ostream& os, const Vector& v);
std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// The quadratic basis [k², k, 1].
Vector bvec(std::int64_t k);

/// The shift matrix C with bvec(k+1) = C·bvec(k).
Matrix cmat();

/// max_i (A y)[i] − min_j (xᵀA)[j] for probability vectors x, y.
Rational duality_gap(const Matrix& A, const Vector& x, const Vector& y);

/// Duality gap of an unnormalized count pair (x_t, y_t) with ‖x_t‖₁ = ‖y_t‖₁ = t.
Rational duality_gap_counts(const Matrix& A, const Vector& x_counts, const Vector& y_counts,
                            std::uint64_t t);

/// 2·max{Ax} for skew-symmetric A; equals duality_gap(A, x, x).
Rational sym_gap(const Matrix& A, const Vector& x);

/// Least common multiple of every denominator in the inputs.
mpz_class common_denominator(const Matrix& m);
mpz_class common_denominator(const Vector& v);

}  // namespace fplb
