#pragma once

#include <cstddef>
#include <vector>

#include "etaq/analytics.hpp"
#include "etaq/core.hpp"

namespace etaq {

/// Exact truncated q-expansion: q^{leading_exponent_24 / 24} times the
/// integer power series coefficients[0] + coefficients[1] q + ...
struct QSeries {
  Integer leading_exponent_24;
  std::vector<Integer> coefficients;

  std::size_t terms() const { return coefficients.size(); }

  friend bool operator==(const QSeries& a, const QSeries& b) = default;
};

namespace series {

/// Truncated product of two integer power series.
inline std::vector<Integer> mul(const std::vector<Integer>& a,
                                const std::vector<Integer>& b, std::size_t terms) {
  std::vector<Integer> c(terms);
  for (std::size_t i = 0; i < a.size() && i < terms; ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size(), terms - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      if (b[j] == 0) continue;
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

/// Inverse of a series with constant term 1 or -1, by the standard
/// recurrence; stays in exact integers.
inline std::vector<Integer> inverse(const std::vector<Integer>& a, std::size_t terms) {
  if (a.empty() || (a[0] != 1 && a[0] != -1))
    throw DomainError("series inversion needs constant term +-1");
  std::vector<Integer> b(terms);
  b[0] = a[0];  // 1/1 = 1, 1/(-1) = -1
  for (std::size_t k = 1; k < terms; ++k) {
    Integer s = 0;
    const std::size_t jmax = std::min(k, a.size() - 1);
    for (std::size_t j = 1; j <= jmax; ++j) s += a[j] * b[k - j];
    b[k] = -s * a[0];
  }
  return b;
}

/// a(q^d), truncated.
inline std::vector<Integer> dilate(const std::vector<Integer>& a, long long d,
                                   std::size_t terms) {
  std::vector<Integer> b(terms);
  for (std::size_t i = 0; i * static_cast<std::size_t>(d) < terms && i < a.size(); ++i)
    b[i * static_cast<std::size_t>(d)] = a[i];
  return b;
}

inline std::vector<Integer> pow(std::vector<Integer> base, Integer e,
                                std::size_t terms) {
  std::vector<Integer> r(terms);
  r[0] = 1;
  while (e > 0) {
    if (boost::multiprecision::bit_test(e, 0)) r = mul(r, base, terms);
    e >>= 1;
    if (e > 0) base = mul(base, base, terms);
  }
  return r;
}

}  // namespace series

/// q-expansion of eta: leading exponent 1 (the q^{1/24} prefactor), series
/// part prod (1 - q^n) via the pentagonal-number expansion, coefficients in
/// {-1, 0, 1} at the generalized pentagonal indices.
inline QSeries eta_series(std::size_t terms) {
  if (terms < 1) throw DomainError("terms must be >= 1");
  std::vector<Integer> c(terms);
  for (long long k = 0;; ++k) {
    const long long g1 = k * (3 * k - 1) / 2;
    const long long g2 = k * (3 * k + 1) / 2;
    if (g1 >= static_cast<long long>(terms) && g2 >= static_cast<long long>(terms))
      break;
    const int sign = (k % 2 == 0) ? 1 : -1;
    if (g1 < static_cast<long long>(terms)) c[static_cast<std::size_t>(g1)] += sign;
    if (k > 0 && g2 < static_cast<long long>(terms))
      c[static_cast<std::size_t>(g2)] += sign;
  }
  return QSeries{1, std::move(c)};
}

/// q-expansion of eta^X: prefactor exponent sum_d d X_d over 24, series part
/// prod_d (prod (1 - q^{d n}))^{X_d} with negative powers via exact series
/// inversion.
inline QSeries quotient_series(const ExponentVector& x, std::size_t terms) {
  if (terms < 1) throw DomainError("terms must be >= 1");
  const std::vector<Integer> base = eta_series(terms).coefficients;
  std::vector<Integer> num(terms), den(terms);
  num[0] = 1;
  den[0] = 1;
  for (const auto& [d, e] : x.entries) {
    const auto dilated = series::dilate(base, d, terms);
    if (e > 0)
      num = series::mul(num, series::pow(dilated, e, terms), terms);
    else
      den = series::mul(den, series::pow(dilated, -e, terms), terms);
  }
  return QSeries{ord_infinity_24(x),
                 series::mul(num, series::inverse(den, terms), terms)};
}

/// True iff the q-expansions of two distinct exponent vectors differ within
/// `terms` coefficients. Distinct eta quotients of weight <= k/2 on
/// Gamma0(N) are guaranteed to differ within k * psi(N) + 1 terms.
inline bool series_distinct(const ExponentVector& a, const ExponentVector& b,
                            std::size_t terms) {
  if (same_mapping(a, b))
    throw DomainError("series_distinct requires distinct exponent vectors");
  return quotient_series(a, terms) != quotient_series(b, terms);
}

}  // namespace etaq
