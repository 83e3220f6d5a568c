#pragma once

#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "etaq/analytics.hpp"
#include "etaq/core.hpp"
#include "etaq/family.hpp"
#include "etaq/order_matrix.hpp"

namespace etaq {

/// A factorization eta^X = eta^g * eta^h into nonconstant holomorphic
/// factors on Gamma0(N); g is the lexicographically smaller side.
struct Factorization {
  ExponentVector g;
  ExponentVector h;
};

/// True iff the support of X has gcd 1 and lcm equal to the declared level:
/// X is neither a rescaling of a lower-level eta quotient nor of level
/// properly dividing N. Operational definition.
inline bool is_primitive(const ExponentVector& x) {
  if (x.is_zero()) throw DomainError("primitivity of the constant eta quotient is undefined");
  long long g = 0;
  for (const auto& [d, e] : x.entries) g = std::gcd(g, d);
  return g == 1 && true_level(x) == x.level;
}

/// Which integrality test backs the order-space search. Both must agree;
/// the Smith-residue form exists to accelerate large boxes at prime power
/// levels.
enum class IntegralityFilter { rational_inverse, smith_residue };

namespace detail {

/// Residue form of the integrality condition at a prime power level:
/// A^{-1} Y integral iff D V' diag(1/m_t) Y is integral.
inline LatticeTester smith_residue_tester(long long p, int n) {
  const SmithData s = smith_data(p, n);
  const std::vector<Integer> m = column_scalings(Level(checked_pow(p, n)));
  const IntMatrix w = mul(s.D, s.Vprime);
  Integer l = 1;
  for (const Integer& mi : m) l = l / boost::multiprecision::gcd(l, mi) * mi;
  LatticeTester t;
  t.rows.assign(w.rows, std::vector<Integer>(w.cols));
  t.mods.assign(w.rows, l);
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t j = 0; j < w.cols; ++j)
      t.rows[i][j] = w(i, j) * (l / m[j]);
  return t;
}

inline LatticeTester make_tester(Level N, IntegralityFilter filter) {
  if (filter == IntegralityFilter::smith_residue) {
    const auto fac = factorize(N.n);
    if (fac.size() != 1)
      throw DomainError("smith residue filter needs a prime power level");
    return smith_residue_tester(fac[0].first, fac[0].second);
  }
  return tester_from_rational_inverse(inverse_A(N));
}

/// Walks the box 0 <= Y' <= Y in ascending divisor index order, keeping the
/// per-row congruence sums incremental; visit() gets the admissible Y' and
/// its row sums (excluding Y' = 0 and Y' = Y) and returns false to stop.
template <typename I>
struct BoxWalker {
  const std::vector<I>& ybox;
  const BasicLatticeTester<I>& tester;
  std::vector<I> y;
  std::vector<I> partial;
  std::pair<I, I> range1{0, -1};  // restriction at index 1; empty pair = full

  template <typename Visit>
  bool walk(std::size_t idx, bool all_zero, bool all_max, Visit&& visit) {
    if (idx == ybox.size()) {
      if (all_zero || all_max) return true;
      if (!tester.admits(partial)) return true;
      return visit(y, partial);
    }
    I lo = 0, hi = ybox[idx];
    if (idx == 1 && range1.second >= range1.first) {
      lo = range1.first;
      hi = range1.second;
      for (std::size_t r = 0; r < partial.size(); ++r)
        partial[r] += tester.rows[r][idx] * lo;
    }
    for (I v = lo; v <= hi; ++v) {
      y[idx] = v;
      if (!walk(idx + 1, all_zero && v == 0, all_max && v == ybox[idx], visit))
        return false;
      for (std::size_t r = 0; r < partial.size(); ++r)
        partial[r] += tester.rows[r][idx];
    }
    for (std::size_t r = 0; r < partial.size(); ++r)
      partial[r] -= tester.rows[r][idx] * (hi + 1);
    y[idx] = 0;
    return true;
  }
};

struct FactorSearchSetup {
  DivisorSet ds;
  std::vector<Integer> ybox;
  LatticeTester tester;
  RationalMatrix ainv;  // for recovering X' when the smith filter is active
};

inline FactorSearchSetup factor_search_setup(const ExponentVector& x, Level N,
                                             const SearchOptions& opts,
                                             IntegralityFilter filter) {
  if (x.is_zero()) throw DomainError("factorization search needs a nonconstant eta quotient");
  const OrderVector y = order_map(x, N);
  for (const Integer& v : y.values)
    if (v < 0) throw DomainError("factorization search needs a holomorphic eta quotient");
  Integer box = 1;
  for (const Integer& v : y.values) box *= v + 1;
  if (box > opts.max_candidates)
    throw BoundExceededError("bound exceeded: order-space box has " + box.str() +
                                 " candidates (bound " +
                                 std::to_string(opts.max_candidates) + ")",
                             box);
  return FactorSearchSetup{DivisorSet{N, y.divisors}, y.values,
                           make_tester(N, filter), inverse_A(N)};
}

inline ExponentVector recover_exponents(const FactorSearchSetup& setup,
                                        const std::vector<Integer>& y,
                                        const std::vector<Integer>& preimage,
                                        IntegralityFilter filter) {
  if (filter == IntegralityFilter::rational_inverse)
    return from_dense(preimage, setup.ds);
  std::vector<Integer> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    Rational xi = 0;
    for (std::size_t j = 0; j < y.size(); ++j) xi += setup.ainv(i, j) * Rational(y[j]);
    x[i] = boost::multiprecision::numerator(xi);  // integral by admissibility
  }
  return from_dense(x, setup.ds);
}

/// Runs the box walk over [lo, hi] at coordinate 1, collecting the
/// admissible left halves into sink (or stopping at the first when sink is
/// null, reporting through `found`).
template <typename I>
void run_factor_range(const FactorSearchSetup& setup,
                      const BasicLatticeTester<I>& tester, IntegralityFilter filter,
                      I lo, I hi, std::vector<ExponentVector>* sink, bool* found) {
  const std::size_t m = setup.ybox.size();
  std::vector<I> box(m);
  for (std::size_t i = 0; i < m; ++i) {
    if constexpr (std::is_same_v<I, Integer>)
      box[i] = setup.ybox[i];
    else
      box[i] = setup.ybox[i].template convert_to<long long>();
  }
  BoxWalker<I> walker{box, tester, std::vector<I>(m), std::vector<I>(m)};
  walker.range1 = {lo, hi};
  walker.walk(0, true, true, [&](const std::vector<I>& y, const std::vector<I>& partial) {
    if (!sink) {
      *found = true;
      return false;
    }
    std::vector<Integer> yi(m), pre;
    for (std::size_t i = 0; i < m; ++i) yi[i] = y[i];
    if (filter == IntegralityFilter::rational_inverse) pre = tester.preimage(partial);
    sink->push_back(recover_exponents(setup, yi, pre, filter));
    return true;
  });
}

}  // namespace detail

/// All unordered factorizations of eta^X into nonconstant holomorphic
/// factors on Gamma0(N), found by exhausting integer vectors
/// 0 <= Y' <= A_N X with A_N^{-1} Y' integral. Canonically sorted; at most
/// `limit` pairs returned.
inline std::vector<Factorization> find_factorizations(
    const ExponentVector& x, Level N,
    std::size_t limit = std::numeric_limits<std::size_t>::max(),
    SearchOptions opts = {},
    IntegralityFilter filter = IntegralityFilter::rational_inverse) {
  auto setup = detail::factor_search_setup(x, N, opts, filter);
  const std::size_t m = setup.ybox.size();
  const auto small = detail::shrink_tester(setup.tester, setup.ybox);

  std::vector<ExponentVector> halves;
  auto run_range = [&](const Integer& lo, const Integer& hi,
                       std::vector<ExponentVector>& sink) {
    if (small)
      detail::run_factor_range<long long>(setup, *small, filter,
                                          lo.convert_to<long long>(),
                                          hi.convert_to<long long>(), &sink, nullptr);
    else
      detail::run_factor_range<Integer>(setup, setup.tester, filter, lo, hi, &sink,
                                        nullptr);
  };

  if (opts.threads <= 1 || m < 2 || setup.ybox[1] + 1 < opts.threads) {
    run_range(0, m >= 2 ? setup.ybox[1] : Integer(-1), halves);
  } else {
    const int nt = opts.threads;
    std::vector<std::vector<ExponentVector>> buckets(static_cast<std::size_t>(nt));
    std::vector<std::thread> pool;
    const Integer chunk = (setup.ybox[1] + nt) / nt;
    for (int w = 0; w < nt; ++w) {
      const Integer lo = chunk * w;
      const Integer hi = std::min(setup.ybox[1], Integer(lo + chunk - 1));
      pool.emplace_back([&, lo, hi, w] {
        if (lo <= hi) run_range(lo, hi, buckets[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& b : buckets)
      for (auto& g : b) halves.push_back(std::move(g));
  }

  // Each admissible Y' pairs with its complement; keep each unordered pair
  // once, smaller side first.
  std::vector<Factorization> pairs;
  for (const ExponentVector& g : halves) {
    ExponentVector h{N, {}};
    for (long long d : setup.ds.divs) {
      const Integer e = x.at(d) - g.at(d);
      if (e != 0) h.entries[d] = e;
    }
    if (!lex_less(h, g, setup.ds)) pairs.push_back(Factorization{g, h});
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Factorization& a, const Factorization& b) {
    if (a.g.entries != b.g.entries) return lex_less(a.g, b.g, setup.ds);
    return lex_less(a.h, b.h, setup.ds);
  });
  if (pairs.size() > limit)
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(limit), pairs.end());
  return pairs;
}

/// Early-exit variant: true iff eta^X factors at all on Gamma0(N).
inline bool exists_factorization(const ExponentVector& x, Level N, SearchOptions opts = {},
                                 IntegralityFilter filter = IntegralityFilter::rational_inverse) {
  auto setup = detail::factor_search_setup(x, N, opts, filter);
  const auto small = detail::shrink_tester(setup.tester, setup.ybox);
  bool found = false;
  if (small)
    detail::run_factor_range<long long>(setup, *small, filter, 0, -1, nullptr, &found);
  else
    detail::run_factor_range<Integer>(setup, setup.tester, filter, 0, -1, nullptr, &found);
  return found;
}

inline bool is_quasi_irreducible(const ExponentVector& x, Level N, SearchOptions opts = {}) {
  return !exists_factorization(x, N, opts);
}

inline bool is_simple(const ExponentVector& x, Level N, SearchOptions opts = {}) {
  return is_primitive(x) && is_quasi_irreducible(x, N, opts);
}

enum class CertificateStatus { certified_irreducible, inapplicable, decomposition_found };

/// Outcome of replaying the coset-congruence argument for f_{p,n}.
/// certified_irreducible is only produced when the congruence system on the
/// extremal coordinates has no admissible class at all; the certificate is
/// never issued on a failed precondition.
struct Certificate {
  CertificateStatus status;
  std::string detail;
  std::optional<Factorization> witness;
  std::optional<std::pair<Integer, Integer>> admissible_class;
};

namespace detail {

/// Smallest nonnegative solution of a x == r (mod m), if any.
inline std::optional<Integer> solve_linear_congruence(Integer a, Integer r, const Integer& m) {
  using boost::multiprecision::gcd;
  a %= m;
  if (a < 0) a += m;
  r %= m;
  if (r < 0) r += m;
  const Integer g = a == 0 ? m : gcd(a, m);
  if (r % g != 0) return std::nullopt;
  const Integer a0 = a / g, m0 = m / g;
  if (m0 == 1) return Integer(0);
  const Integer r0 = (r / g) % m0;
  // Extended Euclid for the inverse of a0 modulo m0.
  Integer t0 = 0, t1 = 1, s0 = m0, s1 = a0;
  while (s1 != 0) {
    const Integer q = s0 / s1;
    Integer s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Integer t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  Integer inv = t0 % m0;
  if (inv < 0) inv += m0;
  return (r0 * inv) % m0;
}

}  // namespace detail

/// Replays the two-case congruence argument for f_{p,n} with even n > 3:
/// a factorization side would need extremal order entries (1, 0) or (0, 1)
/// in units of 1/d_N, and every residue class
/// l1/p^{n-1} C_{n,1} + l2/d_N C_{n,2} (mod Z) is checked against both
/// patterns on the first and last coordinates. Here d_N is the largest
/// invariant factor p^{n-1}(p^2 - 1).
inline Certificate coset_certificate(long long p, int n, SearchOptions opts = {}) {
  auto inapplicable = [](std::string why) {
    return Certificate{CertificateStatus::inapplicable, std::move(why), {}, {}};
  };
  if (!is_prime(p)) return inapplicable("p is not prime");
  if (n <= 3 || n % 2 != 0) return inapplicable("argument covers even n > 3 only");

  const FamilyMember f = build_f(p, n);
  const Level N = f.exponents.level;
  const OrderVector y = order_map(f.exponents, N);
  if (y.at_zero() != 1 || y.at_infinity() != 1)
    return inapplicable("extremal order entries are not both 1");

  const std::vector<Integer> m = column_scalings(N);
  const Integer d1 = boost::multiprecision::pow(Integer(p), n - 1);
  const Integer d2 = d1 * (Integer(p) * p - 1);
  if (m.front() != d2 || m.back() != d2)
    return inapplicable("extremal column scalings differ from d_N");
  for (std::size_t i = 0; i < m.size(); ++i)
    if (y.values[i] >= m[i])
      return inapplicable("order entry reaches its column scaling; zero lemma unavailable");

  const SmithData s = smith_data(p, n);
  const std::size_t last = static_cast<std::size_t>(n);
  const Integer c1_first = s.V(0, last - 1), c1_last = s.V(last, last - 1);
  const Integer c2_first = s.V(0, last), c2_last = s.V(last, last);
  if (c1_last != 0 || c1_first != 1)
    return inapplicable("unexpected shape of the second-to-last column of V");

  // Scale the mod-Z congruences on the two extremal coordinates by d2.
  // Admissible class for pattern (t_first, t_last) in units of 1/d_N:
  //   l2 c2_last == t_last (mod d2), then
  //   l1 (d2/d1) + l2 c2_first == t_first (mod d2).
  std::optional<std::pair<Integer, Integer>> admissible;
  const std::pair<int, int> patterns[] = {{1, 0}, {0, 1}};
  for (const auto& [t_first, t_last] : patterns) {
    const auto l2_base = detail::solve_linear_congruence(c2_last, t_last, d2);
    if (!l2_base) continue;
    Integer g2 = boost::multiprecision::gcd(c2_last % d2, d2);
    if (g2 < 0) g2 = -g2;
    if (g2 == 0) g2 = d2;
    for (Integer k = 0; k < g2; ++k) {
      const Integer l2 = *l2_base + k * (d2 / g2);
      const auto l1 = detail::solve_linear_congruence(
          d2 / d1, Integer(t_first) - l2 * c2_first, d2);
      if (l1) {
        admissible = {*l1 % d1, l2};
        break;
      }
    }
    if (admissible) break;
  }

  if (!admissible)
    return Certificate{CertificateStatus::certified_irreducible,
                       "no residue class matches either extremal pattern", {}, {}};

  // The congruence alone does not witness a factorization; look for one.
  try {
    auto fs = find_factorizations(f.exponents, N, 1, opts);
    if (!fs.empty())
      return Certificate{CertificateStatus::decomposition_found,
                         "factorization found", fs.front(), admissible};
  } catch (const BoundExceededError&) {
  }
  return Certificate{CertificateStatus::inapplicable,
                     "congruence system admits a class; no certificate", {},
                     admissible};
}

/// Desk-scale probe of the conjecture: every simple holomorphic eta
/// quotient of level exactly p^n with sigma(X) <= max_weight_num, and
/// whether any of them outweighs f_{p,n}.
struct ScanReport {
  long long p;
  int n;
  long long max_weight_num;
  Integer family_weight_num;
  std::vector<ExponentVector> simple_found;
  bool found_heavier;
  bool complete;
  std::vector<long long> skipped_weights;
};

inline ScanReport conjecture_scan(long long p, int n, long long max_weight_num,
                                  SearchOptions opts = {}) {
  const FamilyMember f = build_f(p, n);
  const Level N = f.exponents.level;
  ScanReport report{p, n, max_weight_num, weight_numerator(f.exponents),
                    {},   false, true, {}};
  for (long long w = 1; w <= max_weight_num; ++w) {
    std::vector<ExponentVector> candidates;
    try {
      candidates = enumerate_holomorphic(N, w, opts);
    } catch (const BoundExceededError&) {
      report.complete = false;
      report.skipped_weights.push_back(w);
      continue;
    }
    for (const ExponentVector& x : candidates) {
      if (true_level(x) != N || !is_primitive(x)) continue;
      try {
        if (!exists_factorization(x, N, opts)) {
          if (weight_numerator(x) > report.family_weight_num) report.found_heavier = true;
          report.simple_found.push_back(x);
        }
      } catch (const BoundExceededError&) {
        report.complete = false;
        report.skipped_weights.push_back(w);
      }
    }
  }
  return report;
}

}  // namespace etaq
