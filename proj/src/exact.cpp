#include "fplb/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fplb {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

mpz_class pow10(unsigned long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

// round-half-even of num/den, den > 0, num >= 0
mpz_class round_half_even(const mpz_class& num, const mpz_class& den) {
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int cmp_half = cmp(2 * r, den);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                               : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  mpz_class p(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 1) throw std::invalid_argument("to_decimal: digits must be positive");
  if (value == 0) {
    return "0." + std::string(static_cast<std::size_t>(digits - 1), '0') + "e+00";
  }
  const bool negative = value < 0;
  const mpz_class num = abs(value.get_num());
  const mpz_class& den = value.get_den();

  // Decimal exponent e = floor(log10(num/den)), estimated from digit counts and then fixed up.
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto scaled_ge = [&](long exponent) {
    // num/den >= 10^exponent
    return exponent >= 0 ? cmp(num, den * pow10(static_cast<unsigned long>(exponent))) >= 0
                         : cmp(num * pow10(static_cast<unsigned long>(-exponent)), den) >= 0;
  };
  while (!scaled_ge(e)) --e;
  while (scaled_ge(e + 1)) ++e;

  const long shift = digits - 1 - e;
  mpz_class n = shift >= 0 ? round_half_even(num * pow10(static_cast<unsigned long>(shift)), den)
                           : round_half_even(num, den * pow10(static_cast<unsigned long>(-shift)));
  if (n == pow10(static_cast<unsigned long>(digits))) {
    n /= 10;
    ++e;
  }
  const std::string mantissa = n.get_str();
  std::ostringstream out;
  if (negative) out << '-';
  out << mantissa[0];
  if (digits > 1) out << '.' << mantissa.substr(1);
  out << 'e' << (e < 0 ? '-' : '+');
  const long mag = e < 0 ? -e : e;
  if (mag < 10) out << '0';
  out << mag;
  return out.str();
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r{mpz_class(std::to_string(num)), mpz_class(std::to_string(den))};
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- Vector

Vector Vector::from_ints(std::initializer_list<std::int64_t> values) {
  return from_ints(std::span<const std::int64_t>(values.begin(), values.size()));
}

Vector Vector::from_ints(std::span<const std::int64_t> values) {
  Vector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = make_rational(values[i]);
  return v;
}

Vector Vector::ones(std::size_t size) {
  Vector v(size);
  for (auto& e : v.entries_) e = 1;
  return v;
}

Rational Vector::max() const {
  if (entries_.empty()) throw DimensionError("max of empty vector");
  return *std::max_element(entries_.begin(), entries_.end());
}

Rational Vector::min() const {
  if (entries_.empty()) throw DimensionError("min of empty vector");
  return *std::min_element(entries_.begin(), entries_.end());
}

Rational Vector::sum() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e;
  return s;
}

std::vector<std::size_t> Vector::argmax_set() const {
  std::vector<std::size_t> out;
  if (entries_.empty()) return out;
  const Rational m = max();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] == m) out.push_back(i);
  }
  return out;
}

Vector Vector::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > entries_.size()) throw DimensionError("slice out of range");
  return Vector(std::vector<Rational>(entries_.begin() + static_cast<std::ptrdiff_t>(begin),
                                      entries_.begin() + static_cast<std::ptrdiff_t>(begin + count)));
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "vector +");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "vector -");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(const Rational& scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator-(Vector v) { return v *= Rational(-1); }
Vector operator*(const Rational& scale, Vector v) { return v *= scale; }

Rational dot(const Vector& lhs, const Vector& rhs) {
  require_same_size(lhs.size(), rhs.size(), "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) s += lhs[i] * rhs[i];
  return s;
}

Vector concat(std::initializer_list<Vector> parts) {
  std::vector<Rational> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return Vector(std::move(out));
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::from_ints(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  Matrix m(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols()) throw DimensionError("ragged matrix literal");
    std::size_t c = 0;
    for (auto v : row) m(r, c++) = make_rational(v);
    ++r;
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::blocks(const std::vector<std::vector<Matrix>>& grid) {
  if (grid.empty() || grid.front().empty()) return {};
  std::size_t rows = 0, cols = 0;
  for (const auto& block_row : grid) {
    if (block_row.size() != grid.front().size()) throw DimensionError("ragged block grid");
    rows += block_row.front().rows();
  }
  for (const auto& b : grid.front()) cols += b.cols();

  Matrix out(rows, cols);
  std::size_t r0 = 0;
  for (const auto& block_row : grid) {
    std::size_t c0 = 0;
    const std::size_t h = block_row.front().rows();
    for (std::size_t j = 0; j < block_row.size(); ++j) {
      const Matrix& b = block_row[j];
      if (b.rows() != h || b.cols() != grid.front()[j].cols()) {
        throw DimensionError("block dimensions do not line up");
      }
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) out(r0 + r, c0 + c) = b(r, c);
      }
      c0 += b.cols();
    }
    r0 += h;
  }
  return out;
}

Matrix Matrix::outer(const Vector& u, const Vector& v) {
  Matrix m(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = u[r] * v[c];
  }
  return m;
}

Vector Matrix::row(std::size_t r) const {
  Vector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
  return v;
}

Vector Matrix::col(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Rational Matrix::max() const {
  if (entries_.empty()) throw DimensionError("max of empty matrix");
  return *std::max_element(entries_.begin(), entries_.end());
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

bool Matrix::is_skew_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r; c < cols_; ++c) {
      if ((*this)(r, c) != -(*this)(c, r)) return false;
    }
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix + shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix - shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= Rational(-1); }
Matrix operator*(const Rational& scale, Matrix m) { return m *= scale; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("matrix product shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t r = 0; r < lhs.rows(); ++r) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      if (lhs(r, k) == 0) continue;
      for (std::size_t c = 0; c < rhs.cols(); ++c) out(r, c) += lhs(r, k) * rhs(k, c);
    }
  }
  return out;
}

Vector operator*(const Matrix& lhs, const Vector& rhs) {
  require_same_size(lhs.cols(), rhs.size(), "matrix-vector product");
  Vector out(lhs.rows());
  for (std::size_t r = 0; r < lhs.rows(); ++r) {
    for (std::size_t c = 0; c < lhs.cols(); ++c) out[r] += lhs(r, c) * rhs[c];
  }
  return out;
}

Vector operator*(const Vector& lhs, const Matrix& rhs) {
  require_same_size(lhs.size(), rhs.rows(), "vector-matrix product");
  Vector out(rhs.cols());
  for (std::size_t r = 0; r < rhs.rows(); ++r) {
    for (std::size_t c = 0; c < rhs.cols(); ++c) out[c] += lhs[r] * rhs(r, c);
  }
  return out;
}

Matrix power(const Matrix& m, unsigned exponent) {
  if (!m.is_square()) throw DimensionError("power of non-square matrix");
  Matrix out = Matrix::identity(m.rows());
  for (unsigned i = 0; i < exponent; ++i) out = out * m;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Vector& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_string(v[i]);
  return os << ']';
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) os << (r ? "; " : "") << m.row(r);
  return os << ']';
}

// ---------------------------------------------------------------- game helpers

Vector bvec(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("bvec: k must be nonnegative");
  const Rational kr = make_rational(k);
  return Vector{kr * kr, kr, Rational(1)};
}

Matrix cmat() { return Matrix::from_ints({{1, 2, 1}, {0, 1, 1}, {0, 0, 1}}); }

namespace {

void require_probability(const Vector& v, const char* name) {
  Rational total = 0;
  for (const auto& e : v) {
    if (e < 0) throw std::invalid_argument(std::string(name) + " has a negative entry");
    total += e;
  }
  if (total != 1) throw std::invalid_argument(std::string(name) + " does not sum to 1");
}

}  // namespace

Rational duality_gap(const Matrix& A, const Vector& x, const Vector& y) {
  require_same_size(A.rows(), x.size(), "duality_gap x");
  require_same_size(A.cols(), y.size(), "duality_gap y");
  require_probability(x, "x");
  require_probability(y, "y");
  return (A * y).max() - (x * A).min();
}

Rational duality_gap_counts(const Matrix& A, const Vector& x_counts, const Vector& y_counts,
                            std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("duality_gap_counts: t must be positive");
  const Rational inv = Rational(1) / make_rational(static_cast<std::int64_t>(t));
  return duality_gap(A, inv * x_counts, inv * y_counts);
}

Rational sym_gap(const Matrix& A, const Vector& x) {
  if (!A.is_skew_symmetric()) throw std::invalid_argument("sym_gap: matrix is not skew-symmetric");
  require_same_size(A.cols(), x.size(), "sym_gap");
  require_probability(x, "x");
  return 2 * (A * x).max();
}

mpz_class common_denominator(const Matrix& m) {
  mpz_class l = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    }
  }
  return l;
}

mpz_class common_denominator(const Vector& v) {
  mpz_class l = 1;
  for (const auto& e : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.get_den_mpz_t());
  return l;
}

}  // namespace fplb
