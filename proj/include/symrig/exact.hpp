#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symrig/errors.hpp"

namespace symrig {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or a plain integer with optional sign. Anything else
/// (decimals, empty strings, zero denominators) is rejected.
inline Rational parse_rational(const std::string& text) {
  auto is_integer = [](const std::string& s) {
    std::size_t i = (s.size() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  // cpp_int's string constructor takes a bare or '-'-prefixed digit run,
  // so peel an explicit '+' off ourselves.
  auto to_big = [](const std::string& s) {
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  std::size_t slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer(text))
      throw validation_error("not a rational literal: '" + text + "'");
    return Rational(to_big(text));
  }
  std::string num = text.substr(0, slash), den = text.substr(slash + 1);
  if (!is_integer(num) || !is_integer(den))
    throw validation_error("not a rational literal: '" + text + "'");
  BigInt n = to_big(num), d = to_big(den);
  if (d == 0) throw validation_error("zero denominator in '" + text + "'");
  // The two-argument constructor wants a positive denominator.
  if (d < 0) { n = -n; d = -d; }
  return Rational(n, d);
}

/// Formats in the same "p/q" (or plain integer) syntax parse_rational accepts.
inline std::string format_rational(const Rational& r) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1)
    out << "/" << boost::multiprecision::denominator(r);
  return out.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Dense matrix of exact rationals. Deliberately minimal: just what the
/// elimination routines below and the rigidity-matrix builders need.
class RationalMatrix {
public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix transposed() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

/// Exact rank by Bareiss fraction-free elimination. Denominators are cleared
/// row by row first, so every intermediate division in the Bareiss update is
/// an exact integer division.
inline int exact_rank(const RationalMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Scale each row to integers. Row scaling by a positive constant
  // preserves rank.
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    BigInt lcm = 1;
    for (std::size_t j = 0; j < cols; ++j) {
      const BigInt den = boost::multiprecision::denominator(m.at(i, j));
      lcm = boost::multiprecision::lcm(lcm, den);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      Rational scaled = m.at(i, j) * lcm;
      a[i][j] = boost::multiprecision::numerator(scaled);
    }
  }

  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        BigInt t = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
        a[i][j] = t / prev; // exact by the Bareiss identity
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return static_cast<int>(rank);
}

/// Exact kernel basis via reduced row echelon form: one basis vector per free
/// column, with a 1 in the free position. Returns an empty list for a trivial
/// kernel. Vectors are exact and unnormalized.
inline std::vector<std::vector<Rational>> exact_kernel(const RationalMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m.at(i, j);

  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[r], a[pivot]);
    const Rational inv = a[r][col];
    for (std::size_t j = col; j < cols; ++j) a[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(col);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      v[pivot_col[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Multiplies m by a vector, exactly.
inline std::vector<Rational> exact_apply(const RationalMatrix& m,
                                         const std::vector<Rational>& v) {
  if (v.size() != m.cols())
    throw validation_error("vector length does not match matrix columns");
  std::vector<Rational> out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m.at(i, j) * v[j];
  return out;
}

} // namespace symrig
