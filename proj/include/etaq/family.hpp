#pragma once

#include <utility>
#include <vector>

#include "etaq/analytics.hpp"
#include "etaq/core.hpp"
#include "etaq/matrix.hpp"
#include "etaq/order_matrix.hpp"

namespace etaq {

/// A member f_{p,n} of the simple family: palindromic holomorphic eta
/// quotient of exact level p^n, defined for n > 3 (and p odd when n is odd).
struct FamilyMember {
  long long p;
  int n;
  ExponentVector exponents;
  bool even_case;
};

inline FamilyMember build_f(long long p, int n) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (n <= 3) throw DomainError("family undefined for n <= 3");
  const bool even = n % 2 == 0;
  if (!even && p == 2) throw DomainError("family undefined for p = 2 and odd n");

  const Level N(checked_pow(p, n));
  ExponentVector x{N, {}};
  auto pk = [&](int e) { return checked_pow(p, e); };
  const Integer P = p;

  if (even) {
    x.add(1, -(P - 1));
    x.add(pk(n), -(P - 1));
    x.add(pk(1), P);
    x.add(pk(n - 1), (P - 1) * (P - 1));
    for (int s = 1; s <= n / 2 - 1; ++s) {
      x.add(pk(2 * s - 1), P * P - 3 * P + 1);
      x.add(pk(2 * s), P * P - 2 * P + 2);
    }
  } else {
    x.add(1, -(P - 1));
    x.add(pk(n), -(P - 1));
    x.add(pk(1), P);
    x.add(pk(n - 1), P);
    for (int s = 1; s <= n - 1; ++s) x.add(pk(s), P * P - 3 * P + 2);
  }
  return FamilyMember{p, n, std::move(x), even};
}

/// Computed checks on a family member. For even n the orders at 0 and
/// infinity must both be 1/24; odd members carry the computed values with
/// no further claim.
struct FamilyReport {
  long long p;
  int n;
  bool even_case;
  bool holomorphic;
  bool level_exact;
  bool palindromic;
  Integer ord_infinity_24;
  Integer ord_zero_24;

  bool ok() const {
    if (!(holomorphic && level_exact && palindromic)) return false;
    return !even_case || (ord_infinity_24 == 1 && ord_zero_24 == 1);
  }
};

inline FamilyReport verify_family(long long p, int n) {
  const FamilyMember f = build_f(p, n);
  const Level N = f.exponents.level;
  const OrderVector y = order_map(f.exponents, N);
  FamilyReport r{p,
                 n,
                 f.even_case,
                 true,
                 true_level(f.exponents) == N,
                 is_palindromic(f.exponents, N),
                 y.at_infinity(),
                 y.at_zero()};
  for (const Integer& v : y.values)
    if (v < 0) r.holomorphic = false;
  return r;
}

/// F_N = eta^v with v the sum of the columns of B_N. Holomorphic; the
/// extremal cusp orders are the column scalings m_{t,N}.
inline ExponentVector build_F(Level N) {
  const OrderMatrix b = build_B(N);
  ExponentVector x{N, {}};
  for (std::size_t i = 0; i < b.divisors.size(); ++i) {
    Integer row_sum = 0;
    for (std::size_t j = 0; j < b.divisors.size(); ++j) row_sum += b.entries(i, j);
    if (row_sum != 0) x.entries[b.divisors[i]] = row_sum;
  }
  return x;
}

/// Closed form of F_{p^{2m}}: eta(pz)^{p^2-1} for m = 1, and
/// (eta(pz) eta(p^{2m-1}z))^{p(p-1)} prod_{r=2}^{2m-2} eta(p^r z)^{(p-1)^2}
/// for m > 1. Must equal build_F(p^{2m}).
inline ExponentVector closed_form_F_even(long long p, int m) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (m < 1) throw DomainError("m must be >= 1");
  const Level N(checked_pow(p, 2 * m));
  const Integer P = p;
  ExponentVector x{N, {}};
  if (m == 1) {
    x.add(p, P * P - 1);
    return x;
  }
  x.add(p, P * (P - 1));
  x.add(checked_pow(p, 2 * m - 1), P * (P - 1));
  for (int r = 2; r <= 2 * m - 2; ++r) x.add(checked_pow(p, r), (P - 1) * (P - 1));
  return x;
}

/// F_{p^{2m}} / f_{p,2m} as an exponent vector; holomorphic of level p^{2m}.
/// Needs m >= 2 so that the family member exists.
inline ExponentVector quotient_F_over_f(long long p, int m) {
  if (m < 2) throw DomainError("quotient needs m >= 2 (f_{p,2} is undefined)");
  const FamilyMember f = build_f(p, 2 * m);
  const Level N = f.exponents.level;
  ExponentVector out = build_F(N);
  for (const auto& [d, e] : f.exponents.entries) out.add(d, -e);
  return out;
}

/// Coordinates of X in the basis of the columns v_d of B_N, i.e. the exact
/// solution of X = sum_d C_d v_d. Member of Z_N iff every C_d lies in [0,1].
struct ZnCoefficients {
  bool member;
  std::vector<long long> divisors;
  std::vector<Rational> coefficients;
};

inline ZnCoefficients zn_membership(const ExponentVector& x, Level N) {
  const OrderMatrix b = build_B(N);
  const DivisorSet ds{N, b.divisors};
  const std::vector<Integer> dense = detail::dense_exponents(x, ds);
  std::vector<Rational> rhs(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) rhs[i] = dense[i];
  std::vector<Rational> c = solve(RationalMatrix::from_int(b.entries), rhs);
  bool member = true;
  for (const Rational& v : c)
    if (v < 0 || v > 1) member = false;
  return ZnCoefficients{member, b.divisors, std::move(c)};
}

}  // namespace etaq
