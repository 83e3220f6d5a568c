#pragma once

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "etaq/core.hpp"
#include "etaq/matrix.hpp"
#include "etaq/order_matrix.hpp"

namespace etaq {

/// 24-scaled cusp orders of an eta quotient: entry t is
/// 24 * ord_{1/t}(eta^X; Gamma0(N)), one entry per divisor t of N.
struct OrderVector {
  Level level;
  std::vector<long long> divisors;
  std::vector<Integer> values;

  const Integer& at(long long t) const {
    auto it = std::lower_bound(divisors.begin(), divisors.end(), t);
    if (it == divisors.end() || *it != t)
      throw DomainError("no cusp 1/" + std::to_string(t) + " at this level");
    return values[static_cast<std::size_t>(it - divisors.begin())];
  }

  /// 24 * ord at the cusp 0 = 1/1.
  const Integer& at_zero() const { return values.front(); }
  /// 24 * ord at the cusp infinity = 1/N.
  const Integer& at_infinity() const { return values.back(); }
};

namespace detail {

inline std::vector<Integer> dense_exponents(const ExponentVector& x,
                                            const DivisorSet& ds) {
  for (const auto& [d, e] : x.entries)
    if (ds.level.n % d != 0)
      throw DomainError("level mismatch: exponent at " + std::to_string(d) +
                        " does not live on Gamma0(" + std::to_string(ds.level.n) + ")");
  std::vector<Integer> v(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) v[i] = x.at(ds.divs[i]);
  return v;
}

inline ExponentVector from_dense(const std::vector<Integer>& v,
                                 const DivisorSet& ds) {
  ExponentVector x{ds.level, {}};
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (v[i] != 0) x.entries[ds.divs[i]] = v[i];
  return x;
}

}  // namespace detail

/// Y = A_N X, the 24-scaled order vector of eta^X on Gamma0(N).
inline OrderVector order_map(const ExponentVector& x, Level N) {
  const OrderMatrix a = build_A(N);
  const DivisorSet ds{N, a.divisors};
  std::vector<Integer> y = mul(a.entries, detail::dense_exponents(x, ds));
  return OrderVector{N, a.divisors, std::move(y)};
}

/// 24 * ord_infinity = sum_d d * X_d; independent of the ambient level.
inline Integer ord_infinity_24(const ExponentVector& x) {
  Integer s = 0;
  for (const auto& [d, e] : x.entries) s += Integer(d) * e;
  return s;
}

/// eta^X is holomorphic iff A_N X >= 0.
inline bool is_holomorphic(const ExponentVector& x, Level N) {
  for (const Integer& y : order_map(x, N).values)
    if (y < 0) return false;
  return true;
}

/// One cusp class 1/t of Gamma0(N) with its multiplicity phi(gcd(t, N/t)),
/// the number of inequivalent cusps a/t sharing the same order.
struct CuspClass {
  long long t;
  long long multiplicity;
};

inline std::vector<CuspClass> cusp_classes(Level N) {
  std::vector<CuspClass> out;
  for (long long t : divisors(N).divs)
    out.push_back({t, euler_phi(std::gcd(t, N.n / t))});
  return out;
}

/// Both sides of the reduced valence formula at the 24-scale:
/// left = sum_t phi(gcd(t, N/t)) Y_t, right = sigma(X) psi(N).
struct ValenceReport {
  Integer left;
  Integer right;
  bool balanced;
};

inline ValenceReport valence_check(const ExponentVector& x, Level N) {
  const OrderVector y = order_map(x, N);
  Integer left = 0;
  for (std::size_t i = 0; i < y.divisors.size(); ++i) {
    const long long t = y.divisors[i];
    left += Integer(euler_phi(std::gcd(t, N.n / t))) * y.values[i];
  }
  const Integer right = weight_numerator(x) * psi_index(N);
  return ValenceReport{left, right, left == right};
}

/// Exponent action of the Fricke involution W_N: X'_d = X_{N/d}. Defined
/// purely on exponent vectors; the scalar automorphy factor is not tracked.
inline ExponentVector fricke_conjugate(const ExponentVector& x, Level N) {
  const DivisorSet ds = divisors(N);
  (void)detail::dense_exponents(x, ds);  // level-mismatch check
  ExponentVector out{N, {}};
  for (long long d : ds.divs) {
    const Integer e = x.at(N.n / d);
    if (e != 0) out.entries[d] = e;
  }
  return out;
}

inline bool is_palindromic(const ExponentVector& x, Level N) {
  return fricke_conjugate(x, N).entries == x.entries;
}

/// Knobs for the exhaustive searches. max_candidates guards runaway
/// enumerations; worker parallelism stays behind threads and never changes
/// results.
struct SearchOptions {
  long long max_candidates = 100000000;
  int threads = 1;
};

namespace detail {

/// Membership test for the lattice { Y : A_N^{-1} Y integral }, as per-row
/// congruences r_i . Y == 0 (mod m_i) over plain integers.
template <typename I>
struct BasicLatticeTester {
  std::vector<std::vector<I>> rows;
  std::vector<I> mods;

  std::size_t dim() const { return rows.size(); }

  bool admits(const std::vector<I>& partial) const {
    for (std::size_t i = 0; i < mods.size(); ++i)
      if (partial[i] % mods[i] != 0) return false;
    return true;
  }

  /// Preimage coordinates (r_i . Y) / m_i; only valid when admits() holds.
  std::vector<Integer> preimage(const std::vector<I>& partial) const {
    std::vector<Integer> x(partial.size());
    for (std::size_t i = 0; i < partial.size(); ++i)
      x[i] = Integer(partial[i]) / Integer(mods[i]);
    return x;
  }
};

using LatticeTester = BasicLatticeTester<Integer>;

inline LatticeTester tester_from_rational_inverse(const RationalMatrix& ainv) {
  LatticeTester t;
  t.rows.resize(ainv.rows);
  t.mods.resize(ainv.rows);
  for (std::size_t i = 0; i < ainv.rows; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < ainv.cols; ++j) {
      const Integer den = boost::multiprecision::denominator(ainv(i, j));
      l = l / boost::multiprecision::gcd(l, den) * den;
    }
    t.mods[i] = l;
    t.rows[i].resize(ainv.cols);
    for (std::size_t j = 0; j < ainv.cols; ++j)
      t.rows[i][j] = boost::multiprecision::numerator(Rational(ainv(i, j) * l));
  }
  return t;
}

/// int64 mirror of a tester, when every row, modulus and reachable partial
/// sum provably fits. `coord_max` bounds each walk coordinate from above.
inline std::optional<BasicLatticeTester<long long>> shrink_tester(
    const LatticeTester& t, const std::vector<Integer>& coord_max) {
  static const Integer kLimit = (Integer(1) << 62);
  BasicLatticeTester<long long> s;
  s.rows.resize(t.rows.size());
  s.mods.resize(t.mods.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    Integer reach = 0;
    for (std::size_t j = 0; j < t.rows[i].size(); ++j)
      reach += boost::multiprecision::abs(t.rows[i][j]) * coord_max[j];
    if (reach >= kLimit || t.mods[i] >= kLimit) return std::nullopt;
    s.mods[i] = t.mods[i].convert_to<long long>();
    s.rows[i].resize(t.rows[i].size());
    for (std::size_t j = 0; j < t.rows[i].size(); ++j)
      s.rows[i][j] = t.rows[i][j].convert_to<long long>();
  }
  return s;
}

}  // namespace detail

/// Number of solutions of sum_t phi(gcd(t, N/t)) x_t = k psi(N) in
/// nonnegative integers: the counting bound on holomorphic eta quotients of
/// weight k/2 on Gamma0(N).
inline Integer valence_solution_count(Level N, long long weight_num) {
  if (weight_num < 0) throw DomainError("weight numerator must be nonnegative");
  const long long target = checked_mul(weight_num, psi_index(N), "valence target out of range");
  std::vector<Integer> dp(static_cast<std::size_t>(target) + 1);
  dp[0] = 1;
  for (long long t : divisors(N).divs) {
    const long long c = euler_phi(std::gcd(t, N.n / t));
    for (long long r = c; r <= target; ++r)
      dp[static_cast<std::size_t>(r)] += dp[static_cast<std::size_t>(r - c)];
  }
  return dp[static_cast<std::size_t>(target)];
}

namespace detail {

template <typename I>
struct HoloEnumerator {
  const DivisorSet& ds;
  const std::vector<long long>& weights;
  const BasicLatticeTester<I>& tester;
  std::vector<ExponentVector>& out;

  std::vector<I> partial;  // running r_i . Y over the assigned suffix

  // Assigns Y at descending divisor indices; the final index 0 (divisor 1,
  // weight 1) absorbs the remainder.
  void recurse(std::size_t idx, long long remaining) {
    if (idx == 0) {
      for (std::size_t r = 0; r < partial.size(); ++r)
        partial[r] += tester.rows[r][0] * remaining;
      if (tester.admits(partial))
        out.push_back(from_dense(tester.preimage(partial), ds));
      for (std::size_t r = 0; r < partial.size(); ++r)
        partial[r] -= tester.rows[r][0] * remaining;
      return;
    }
    const long long c = weights[idx];
    const long long top = remaining / c;
    for (long long v = 0; v <= top; ++v) {
      recurse(idx - 1, remaining - v * c);
      for (std::size_t r = 0; r < partial.size(); ++r)
        partial[r] += tester.rows[r][idx];
    }
    for (std::size_t r = 0; r < partial.size(); ++r)
      partial[r] -= tester.rows[r][idx] * (top + 1);
  }
};

}  // namespace detail

namespace detail {

template <typename I>
void run_holo_range(const DivisorSet& ds, const std::vector<long long>& weights,
                    const BasicLatticeTester<I>& tester, long long target,
                    long long lo, long long hi, std::vector<ExponentVector>& sink) {
  const std::size_t m = ds.size();
  HoloEnumerator<I> en{ds, weights, tester, sink, std::vector<I>(m)};
  if (m == 1) {
    if (lo == 0) en.recurse(0, target);
    return;
  }
  const std::size_t last = m - 1;
  for (long long v = lo; v <= hi && v * weights[last] <= target; ++v) {
    for (std::size_t r = 0; r < m; ++r) en.partial[r] = tester.rows[r][last] * v;
    en.recurse(last - 1, target - v * weights[last]);
  }
}

}  // namespace detail

/// All X with sigma(X) = weight_num, A_N X >= 0 and level dividing N:
/// enumerates the nonnegative order vectors Y solving the valence equation
/// and keeps those with A_N^{-1} Y integral. Output is sorted
/// lexicographically over ascending divisors and duplicate-free.
inline std::vector<ExponentVector> enumerate_holomorphic(Level N, long long weight_num,
                                                         SearchOptions opts = {}) {
  if (weight_num < 1) throw DomainError("weight numerator must be >= 1");
  const Integer total = valence_solution_count(N, weight_num);
  if (total > opts.max_candidates)
    throw BoundExceededError("bound exceeded: " + total.str() +
                                 " candidate order vectors (bound " +
                                 std::to_string(opts.max_candidates) + ")",
                             total);

  const DivisorSet ds = divisors(N);
  const std::size_t m = ds.size();
  std::vector<long long> weights(m);
  for (std::size_t i = 0; i < m; ++i)
    weights[i] = euler_phi(std::gcd(ds.divs[i], N.n / ds.divs[i]));
  const long long target = checked_mul(weight_num, psi_index(N), "target out of range");
  const auto tester = detail::tester_from_rational_inverse(inverse_A(N));
  std::vector<Integer> coord_max(m);
  for (std::size_t i = 0; i < m; ++i) coord_max[i] = target / weights[i];
  const auto small = detail::shrink_tester(tester, coord_max);

  std::vector<ExponentVector> results;
  auto run_range = [&](long long lo, long long hi, std::vector<ExponentVector>& sink) {
    if (small)
      detail::run_holo_range(ds, weights, *small, target, lo, hi, sink);
    else
      detail::run_holo_range(ds, weights, tester, target, lo, hi, sink);
  };

  const long long outer_top = m == 1 ? 0 : target / weights[m - 1];
  if (opts.threads <= 1 || outer_top < opts.threads || m == 1) {
    run_range(0, outer_top, results);
  } else {
    const int nt = opts.threads;
    std::vector<std::vector<ExponentVector>> buckets(static_cast<std::size_t>(nt));
    std::vector<std::thread> pool;
    const long long chunk = (outer_top + nt) / nt;
    for (int w = 0; w < nt; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min(outer_top, lo + chunk - 1);
      pool.emplace_back([&, lo, hi, w] {
        if (lo <= hi) run_range(lo, hi, buckets[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& b : buckets)
      for (auto& x : b) results.push_back(std::move(x));
  }

  std::sort(results.begin(), results.end(),
            [&](const ExponentVector& a, const ExponentVector& b) {
              return lex_less(a, b, ds);
            });
  return results;
}

}  // namespace etaq
