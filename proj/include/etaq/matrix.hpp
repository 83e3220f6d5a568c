#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "etaq/core.hpp"

namespace etaq {

/// Dense square-friendly matrix over exact integers, row-major.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Integer> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Integer& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  std::vector<Integer> column(std::size_t j) const {
    std::vector<Integer> c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;
};

inline IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw DomainError("matrix dimension mismatch");
  IntMatrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline std::vector<Integer> mul(const IntMatrix& a, const std::vector<Integer>& v) {
  if (a.cols != v.size()) throw DomainError("matrix dimension mismatch");
  std::vector<Integer> r(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r[i] += a(i, j) * v[j];
  return r;
}

inline IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix r(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l)
          r(i * b.rows + k, j * b.cols + l) = a(i, j) * b(k, l);
  return r;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m) {
  if (m.rows != m.cols) throw DomainError("determinant of non-square matrix");
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Dense matrix over exact rationals.
struct RationalMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Rational> data;

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static RationalMatrix from_int(const IntMatrix& m) {
    RationalMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) r.data[i] = m.data[i];
    return r;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;
};

inline RationalMatrix mul(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols != b.rows) throw DomainError("matrix dimension mismatch");
  RationalMatrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline std::vector<Rational> mul(const RationalMatrix& a,
                                 const std::vector<Rational>& v) {
  if (a.cols != v.size()) throw DomainError("matrix dimension mismatch");
  std::vector<Rational> r(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r[i] += a(i, j) * v[j];
  return r;
}

/// Gauss-Jordan inverse; nullopt when singular.
inline std::optional<RationalMatrix> try_inverse(RationalMatrix m) {
  if (m.rows != m.cols) throw DomainError("inverse of non-square matrix");
  const std::size_t n = m.rows;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(col, j), m(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    const Rational dinv = Rational(1) / m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) *= dinv;
      inv(col, j) *= dinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Solves M x = b exactly; throws on singular M.
inline std::vector<Rational> solve(const RationalMatrix& m,
                                   const std::vector<Rational>& b) {
  auto inv = try_inverse(m);
  if (!inv) throw DomainError("singular linear system");
  return mul(*inv, b);
}

}  // namespace etaq
