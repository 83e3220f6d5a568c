#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "etaq/core.hpp"
#include "etaq/matrix.hpp"

namespace etaq {

/// Square integer matrix indexed by divisor pairs (t, d) of the level,
/// rows and columns in ascending-divisor order.
struct OrderMatrix {
  Level level;
  std::vector<long long> divisors;
  IntMatrix entries;
};

/// 24 * ord_{1/t}(eta_d; Gamma0(N)) = N * gcd(d,t)^2 / (d * gcd(t^2, N)).
/// Always a positive integer.
inline Integer order_entry(Level N, long long t, long long d) {
  if (t < 1 || N.n % t != 0)
    throw DomainError("cusp index " + std::to_string(t) + " does not divide level");
  if (d < 1 || N.n % d != 0)
    throw DomainError("divisor " + std::to_string(d) + " does not divide level");
  const Integer g = std::gcd(d, t);
  const Integer gt2 = boost::multiprecision::gcd(Integer(t) * t, Integer(N.n));
  Integer num = Integer(N.n) * g * g;
  Integer den = Integer(d) * gt2;
  if (num % den != 0) throw Error("order entry is not integral");  // unreachable
  return num / den;
}

/// Order matrix A_N, entry (t, d) = 24 * ord_{1/t}(eta_d; Gamma0(N)).
inline OrderMatrix build_A(Level N) {
  const DivisorSet ds = divisors(N);
  const std::size_t m = ds.size();
  IntMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = order_entry(N, ds.divs[i], ds.divs[j]);
  return OrderMatrix{N, ds.divs, std::move(a)};
}

namespace detail {

/// Kronecker index of a divisor: mixed-radix digits are the prime-power
/// valuations, most significant digit first prime. This is the explicit
/// bijection between ascending-divisor order and the lexicographic order
/// the Kronecker product induces.
inline std::size_t kronecker_index(long long d,
                                   const std::vector<std::pair<long long, int>>& fac) {
  std::size_t idx = 0;
  for (const auto& [p, e] : fac) {
    int v = 0;
    while (d % p == 0) d /= p, ++v;
    idx = idx * static_cast<std::size_t>(e + 1) + static_cast<std::size_t>(v);
  }
  return idx;
}

/// Re-indexes a Kronecker product of prime-power blocks into
/// ascending-divisor order.
inline OrderMatrix reindex_kronecker(Level N, const IntMatrix& kron) {
  const auto fac = factorize(N.n);
  const DivisorSet ds = divisors(N);
  const std::size_t m = ds.size();
  std::vector<std::size_t> kidx(m);
  for (std::size_t i = 0; i < m; ++i) kidx[i] = kronecker_index(ds.divs[i], fac);
  IntMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = kron(kidx[i], kidx[j]);
  return OrderMatrix{N, ds.divs, std::move(a)};
}

}  // namespace detail

/// A_N as the Kronecker product of its prime-power blocks, re-indexed into
/// ascending-divisor order. Agrees entrywise with build_A (multiplicativity
/// of the order entry); the agreement is a test, not an assumption.
inline OrderMatrix kronecker_A(Level N) {
  const auto fac = factorize(N.n);
  if (fac.empty()) return build_A(N);  // N = 1
  IntMatrix kron;
  bool first = true;
  for (const auto& [p, e] : fac) {
    IntMatrix block = build_A(Level(checked_pow(p, e))).entries;
    kron = first ? std::move(block) : kronecker(kron, block);
    first = false;
  }
  return detail::reindex_kronecker(N, kron);
}

/// Closed-form tridiagonal inverse of A_{p^n}: the entry (p^i, p^j) equals
/// c(i, j) / (p^{n-1} (p^2 - 1)) with
///   c = p                          for i = j = 0 or i = j = n,
///   c = -p^{min(j, n-j)}           for |i - j| = 1,
///   c = p^{min(j-1, n-j-1)} (p^2+1) for 0 < i = j < n,
///   c = 0                          otherwise.
inline RationalMatrix inverse_A_prime_power(long long p, int n) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (n < 1) throw DomainError("exponent must be >= 1");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  const Integer P = p;
  const Integer scale = boost::multiprecision::pow(P, static_cast<unsigned>(n - 1)) * (P * P - 1);
  auto ppow = [&](int e) -> Integer {
    return boost::multiprecision::pow(P, static_cast<unsigned>(e));
  };
  RationalMatrix inv(m, m);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      Integer c = 0;
      if (i == j && (i == 0 || i == n))
        c = p;
      else if (i - j == 1 || j - i == 1)
        c = -ppow(std::min(j, n - j));
      else if (i == j)
        c = ppow(std::min(j - 1, n - j - 1)) * (Integer(p) * p + 1);
      inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          Rational(c, scale);
    }
  return inv;
}

/// Exact inverse of A_N for any level (generic elimination).
inline RationalMatrix inverse_A(Level N) {
  auto inv = try_inverse(RationalMatrix::from_int(build_A(N).entries));
  if (!inv) throw Error("order matrix is singular");  // unreachable
  return *inv;
}

namespace detail {

/// Minimal positive integers m_t with m_t * A_N^{-1}(., t) integral,
/// together with the resulting integer matrix B_N.
inline std::pair<IntMatrix, std::vector<Integer>> scale_columns(
    const RationalMatrix& ainv) {
  const std::size_t m = ainv.rows;
  IntMatrix b(m, m);
  std::vector<Integer> scalings(m);
  for (std::size_t j = 0; j < m; ++j) {
    Integer l = 1;
    for (std::size_t i = 0; i < m; ++i) {
      const Integer den = boost::multiprecision::denominator(ainv(i, j));
      l = l / boost::multiprecision::gcd(l, den) * den;
    }
    for (std::size_t i = 0; i < m; ++i) {
      const Rational v = ainv(i, j) * l;
      b(i, j) = boost::multiprecision::numerator(v);
    }
    scalings[j] = l;
  }
  return {std::move(b), std::move(scalings)};
}

}  // namespace detail

/// B_N: column t is m_{t,N} * A_N^{-1}(., t) with m_{t,N} minimal making the
/// column integral. Computed by direct column scaling of the exact inverse;
/// the Kronecker route below is the independent cross-check.
inline OrderMatrix build_B(Level N) {
  const DivisorSet ds = divisors(N);
  auto [b, scalings] = detail::scale_columns(inverse_A(N));
  return OrderMatrix{N, ds.divs, std::move(b)};
}

/// The column scalings m_{t,N} of build_B, in ascending-divisor order.
inline std::vector<Integer> column_scalings(Level N) {
  return detail::scale_columns(inverse_A(N)).second;
}

/// B_N as the Kronecker product of prime-power blocks, re-indexed.
inline OrderMatrix build_B_kronecker(Level N) {
  const auto fac = factorize(N.n);
  if (fac.empty()) return build_B(N);
  IntMatrix kron;
  bool first = true;
  for (const auto& [p, e] : fac) {
    IntMatrix block = build_B(Level(checked_pow(p, e))).entries;
    kron = first ? std::move(block) : kronecker(kron, block);
    first = false;
  }
  return detail::reindex_kronecker(N, kron);
}

/// Explicit Smith-form data for B_{p^n}: D = U B V with U U' = I, V V' = I
/// and D = diag(1, ..., 1, p^{n-1}, p^{n-1}(p^2 - 1)).
struct SmithData {
  long long p;
  int n;
  IntMatrix D, U, V, Uprime, Vprime;
};

/// Diagonal of D_{p^n}. The single formula covers every n >= 1.
inline IntMatrix smith_D(long long p, int n) {
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  IntMatrix d(m, m);
  for (std::size_t i = 0; i + 2 < m; ++i) d(i, i) = 1;
  const Integer pn1 = boost::multiprecision::pow(Integer(p), n - 1);
  d(m - 2, m - 2) = pn1;
  d(m - 1, m - 1) = pn1 * (Integer(p) * p - 1);
  return d;
}

inline SmithData smith_data(long long p, int n) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (n < 1) throw DomainError("exponent must be >= 1");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  const Integer P = p;
  auto ppow = [&](long long e) -> Integer {
    return boost::multiprecision::pow(P, static_cast<unsigned>(e));
  };
  auto from_rows = [&](std::vector<std::vector<Integer>> rows) {
    IntMatrix mm(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) mm(i, j) = rows[i][j];
    return mm;
  };

  SmithData s{p, n, smith_D(p, n), {}, {}, {}, {}};

  if (n == 1) {
    s.U = from_rows({{0, -1}, {1, P}});
    s.V = from_rows({{1, P}, {0, 1}});
    s.Uprime = from_rows({{P, 1}, {-1, 0}});
    s.Vprime = from_rows({{1, -P}, {0, 1}});
    return s;
  }
  if (n == 2) {
    s.U = from_rows({{0, 1, 0}, {0, P, 1}, {1, P, 1}});
    s.V = from_rows({{0, -1, P * P}, {0, 0, 1}, {-1, 1, 1}});
    s.Uprime = from_rows({{0, -1, 1}, {1, 0, 0}, {-P, 1, 0}});
    s.Vprime = from_rows({{-1, P * P + 1, -1}, {-1, P * P, 0}, {0, 1, 0}});
    return s;
  }
  if (n == 3) {
    s.U = from_rows({{0, -1, -P, -P * P},
                     {0, 0, -1, -P},
                     {0, 0, -P, -(P * P + 1)},
                     {1, P, P * P, P * P * P}});
    s.V = from_rows({{1, 0, 1, P * P * P},
                     {0, 0, 1, P},
                     {0, -1, P, 1},
                     {0, 0, 0, 1}});
    s.Uprime = from_rows({{P, 0, 0, 1},
                          {-1, P, 0, 0},
                          {0, -(P * P + 1), P, 0},
                          {0, P, -1, 0}});
    s.Vprime = from_rows({{1, -1, 0, -P * (P * P - 1)},
                          {0, P, -1, -(P * P - 1)},
                          {0, 1, 0, -P},
                          {0, 0, 0, 1}});
    return s;
  }

  // n > 3: the tabulated entries, 0 <= i, j <= n.
  IntMatrix U(m, m), V(m, m), Up(m, m), Vp(m, m);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      Integer u = 0;
      if (i < n - 1)
        u = (j > i) ? -ppow(j - i - 1) : Integer(0);
      else if (i == n - 1)
        u = (j > 0) ? -ppow(n - j) * ((ppow(2 * (j - 1)) - 1) / (P * P - 1))
                    : Integer(0);
      else
        u = (j == 0) ? Integer(1) : ppow(j);
      U(i, j) = u;

      Integer v = 0;
      if (i == 0)
        v = (j == 0) ? Integer(1)
                     : (j == n - 1 ? Integer(1) : (j == n ? ppow(n) : Integer(0)));
      else if (i < n)
        v = (j == 0) ? Integer(0)
                     : (j < n - 1 ? (i > j ? -ppow(i - j - 1) : Integer(0))
                                  : (j == n - 1 ? ppow(i - 1) : ppow(n - i - 1)));
      else
        v = (j == n) ? Integer(1) : Integer(0);
      V(i, j) = v;

      Integer up = 0;
      if (i == 0)
        up = (j == 0) ? P : (j == n ? Integer(1) : Integer(0));
      else if (i < n - 1) {
        if (j == 0)
          up = (i == 1) ? Integer(-1) : Integer(0);
        else if (j < n - 2)
          up = (i == j) ? P : (i == j + 1 ? Integer(-1) : Integer(0));
        else if (j == n - 2)
          up = (i == n - 2) ? P : Integer(0);
      } else if (i == n - 1) {
        if (j > 0 && j < n - 2)
          up = -ppow(n - j);
        else if (j == n - 2)
          up = -(P * P + 1);
        else if (j == n - 1)
          up = P;
      } else {
        if (j > 0 && j < n - 2)
          up = ppow(n - j - 1);
        else if (j == n - 2)
          up = P;
        else if (j == n - 1)
          up = -1;
      }
      Up(i, j) = up;

      Integer vp = 0;
      if (i == 0)
        vp = (j == 0) ? Integer(1)
                      : (j == 1 ? Integer(-1)
                                : (j == n ? -ppow(n - 2) * (P * P - 1) : Integer(0)));
      else if (i < n - 1)
        vp = (j == 0) ? Integer(0)
                      : (j < n ? (i == j ? P : (i == j - 1 ? Integer(-1) : Integer(0)))
                               : -ppow(n - i - 2) * (P * P - 1));
      else if (i == n - 1)
        vp = (j == 1) ? Integer(1) : (j == n ? -ppow(n - 2) : Integer(0));
      else
        vp = (j == n) ? Integer(1) : Integer(0);
      Vp(i, j) = vp;
    }
  }
  s.U = std::move(U);
  s.V = std::move(V);
  s.Uprime = std::move(Up);
  s.Vprime = std::move(Vp);
  return s;
}

/// Checks U U' = I, V V' = I and D = U B V exactly against build_B(p^n).
inline bool verify_proposition1(long long p, int n) {
  const SmithData s = smith_data(p, n);
  const IntMatrix b = build_B(Level(checked_pow(p, n))).entries;
  const IntMatrix id = IntMatrix::identity(static_cast<std::size_t>(n) + 1);
  return mul(s.U, s.Uprime) == id && mul(s.V, s.Vprime) == id &&
         mul(mul(s.U, b), s.V) == s.D;
}

/// The last two columns of V_{p^n} by the three-regime closed form;
/// must equal the actual columns of smith_data(p, n).V.
inline std::pair<std::vector<Integer>, std::vector<Integer>> last_two_columns_V(
    long long p, int n) {
  if (n < 1) throw DomainError("exponent must be >= 1");
  const Integer P = p;
  auto ppow = [&](int e) -> Integer {
    return boost::multiprecision::pow(P, static_cast<unsigned>(e));
  };
  std::vector<Integer> c1, c2;
  if (n == 1) {
    c1 = {1, 0};
    c2 = {P, 1};
  } else if (n == 2) {
    c1 = {-1, 0, 1};
    c2 = {P * P, 1, 1};
  } else {
    c1.push_back(1);
    c1.push_back(1);
    for (int e = 1; e <= n - 2; ++e) c1.push_back(ppow(e));
    c1.push_back(0);
    c2.push_back(ppow(n));
    for (int e = n - 2; e >= 0; --e) c2.push_back(ppow(e));
    c2.push_back(1);
  }
  return {std::move(c1), std::move(c2)};
}

/// Invariant factors d_1 | d_2 | ... | d_k of a nonsingular integer matrix.
using InvariantFactors = std::vector<Integer>;

/// Generic Smith reduction by elementary row and column operations with
/// exact integers, pivoting on the smallest nonzero entry. Exists as an
/// independent oracle against the closed-form SmithData.
inline InvariantFactors invariant_factors(IntMatrix m) {
  if (m.rows != m.cols) throw DomainError("invariant factors of non-square matrix");
  const std::size_t n = m.rows;
  if (determinant(m) == 0) throw DomainError("matrix is singular");

  using boost::multiprecision::abs;
  for (std::size_t s = 0; s < n; ++s) {
    for (;;) {
      // Smallest nonzero entry of the trailing submatrix as pivot.
      std::size_t pi = s, pj = s;
      Integer best = 0;
      for (std::size_t i = s; i < n; ++i)
        for (std::size_t j = s; j < n; ++j) {
          if (m(i, j) == 0) continue;
          if (best == 0 || abs(m(i, j)) < best) {
            best = abs(m(i, j));
            pi = i;
            pj = j;
          }
        }
      if (best == 0) throw DomainError("matrix is singular");  // unreachable
      if (pi != s)
        for (std::size_t j = 0; j < n; ++j) std::swap(m(s, j), m(pi, j));
      if (pj != s)
        for (std::size_t i = 0; i < n; ++i) std::swap(m(i, s), m(i, pj));

      bool clean = true;
      for (std::size_t i = s + 1; i < n; ++i) {
        if (m(i, s) == 0) continue;
        const Integer q = m(i, s) / m(s, s);
        for (std::size_t j = 0; j < n; ++j) m(i, j) -= q * m(s, j);
        if (m(i, s) != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < n; ++j) {
        if (m(s, j) == 0) continue;
        const Integer q = m(s, j) / m(s, s);
        for (std::size_t i = 0; i < n; ++i) m(i, j) -= q * m(i, s);
        if (m(s, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Pivot must divide the whole trailing block for the chain to hold.
      bool divides = true;
      for (std::size_t i = s + 1; i < n && divides; ++i)
        for (std::size_t j = s + 1; j < n && divides; ++j)
          if (m(i, j) % m(s, s) != 0) {
            for (std::size_t jj = 0; jj < n; ++jj) m(s, jj) += m(i, jj);
            divides = false;
          }
      if (divides) break;
    }
  }

  InvariantFactors f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = abs(m(i, i));
  // The divisibility fix-up above already yields a chain; normalize anyway.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (f[j] % f[i] != 0) {
        const Integer g = boost::multiprecision::gcd(f[i], f[j]);
        f[j] = f[i] / g * f[j];
        f[i] = g;
      }
  return f;
}

}  // namespace etaq
