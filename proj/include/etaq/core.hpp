#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace etaq {

/// Arbitrary-precision integer. All matrix entries, exponents, orders and
/// series coefficients use this type; fixed-width overflow is not acceptable
/// anywhere in the computational core.
using Integer = boost::multiprecision::cpp_int;

/// Exact rational in lowest terms with positive denominator (cpp_rational
/// maintains the canonical form).
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated mathematical precondition (non-divisor index, undefined family
/// member, zero exponent vector where a nonzero one is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would visit more candidates than the configured bound.
class BoundExceededError : public Error {
 public:
  BoundExceededError(const std::string& what, Integer computed)
      : Error(what), computed_(std::move(computed)) {}

  /// Size the enumeration would have had.
  const Integer& computed_size() const { return computed_; }

 private:
  Integer computed_;
};

/// Level N of the congruence subgroup Gamma0(N).
struct Level {
  long long n;

  explicit Level(long long value) : n(value) {
    if (value < 1) throw DomainError("level must be a positive integer");
  }

  friend bool operator==(Level a, Level b) { return a.n == b.n; }
  friend bool operator!=(Level a, Level b) { return a.n != b.n; }
};

inline long long checked_mul(long long a, long long b, const char* what) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError(what);
  return r;
}

/// p^e as long long; throws when the result does not fit.
inline long long checked_pow(long long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, p, "prime power out of range");
  return r;
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization of n >= 1 as (p, e) pairs with ascending p.
inline std::vector<std::pair<long long, int>> factorize(long long n) {
  if (n < 1) throw DomainError("factorize requires a positive integer");
  std::vector<std::pair<long long, int>> out;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// The set of divisors of N, ascending. First element 1, last element N,
/// closed under d -> N/d.
struct DivisorSet {
  Level level;
  std::vector<long long> divs;

  std::size_t size() const { return divs.size(); }

  /// Position of divisor d; throws if d does not divide the level.
  std::size_t index_of(long long d) const {
    auto it = std::lower_bound(divs.begin(), divs.end(), d);
    if (it == divs.end() || *it != d)
      throw DomainError(std::to_string(d) + " is not a divisor of " +
                        std::to_string(level.n));
    return static_cast<std::size_t>(it - divs.begin());
  }
};

inline DivisorSet divisors(Level N) {
  std::vector<long long> divs;
  for (long long d = 1; d * d <= N.n; ++d) {
    if (N.n % d == 0) {
      divs.push_back(d);
      if (d != N.n / d) divs.push_back(N.n / d);
    }
  }
  std::sort(divs.begin(), divs.end());
  return DivisorSet{N, std::move(divs)};
}

/// Euler totient.
inline long long euler_phi(long long n) {
  if (n < 1) throw DomainError("euler_phi requires a positive integer");
  long long result = n;
  for (const auto& [p, e] : factorize(n)) result = result / p * (p - 1);
  return result;
}

/// Index of Gamma0(N) in SL2(Z): N * prod_{p | N} (1 + 1/p).
inline long long psi_index(Level N) {
  long long result = N.n;
  for (const auto& [p, e] : factorize(N.n))
    result = checked_mul(result / p, p + 1, "psi index out of range");
  return result;
}

/// Exponent vector X of an eta quotient: a sparse map d -> X_d over the
/// divisors of the declared level (absent divisor = exponent 0).
struct ExponentVector {
  Level level;
  std::map<long long, Integer> entries;

  static ExponentVector zero(Level N) { return ExponentVector{N, {}}; }

  static ExponentVector make(Level N, std::map<long long, Integer> raw) {
    ExponentVector x{N, {}};
    for (auto& [d, e] : raw) x.set(d, std::move(e));
    return x;
  }

  Integer at(long long d) const {
    auto it = entries.find(d);
    return it == entries.end() ? Integer(0) : it->second;
  }

  void set(long long d, Integer e) {
    if (d < 1 || level.n % d != 0)
      throw DomainError("exponent key " + std::to_string(d) +
                        " does not divide level " + std::to_string(level.n));
    if (e == 0)
      entries.erase(d);
    else
      entries[d] = std::move(e);
  }

  void add(long long d, const Integer& e) { set(d, at(d) + e); }

  bool is_zero() const { return entries.empty(); }

  std::vector<long long> support() const {
    std::vector<long long> s;
    s.reserve(entries.size());
    for (const auto& [d, e] : entries) s.push_back(d);
    return s;
  }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.level == b.level && a.entries == b.entries;
  }

  /// Same mapping d -> X_d, ignoring the declared levels.
  friend bool same_mapping(const ExponentVector& a, const ExponentVector& b) {
    return a.entries == b.entries;
  }
};

/// sigma(X) = sum of exponents; the weight of eta^X is sigma(X)/2.
inline Integer weight_numerator(const ExponentVector& x) {
  Integer s = 0;
  for (const auto& [d, e] : x.entries) s += e;
  return s;
}

/// lcm of the support of X. The zero vector has no level (lcm of an empty
/// set); by convention that is an error rather than 1.
inline Level true_level(const ExponentVector& x) {
  if (x.is_zero()) throw DomainError("constant eta quotient has no level");
  long long l = 1;
  for (const auto& [d, e] : x.entries)
    l = checked_mul(l / std::gcd(l, d), d, "true level out of range");
  return Level(l);
}

/// Rescaling z -> d z: X'_{d e} = X_e, declared at level d * N.
inline ExponentVector rescale(const ExponentVector& x, long long d) {
  if (d < 1) throw DomainError("rescale factor must be positive");
  ExponentVector out{Level(checked_mul(x.level.n, d, "rescaled level out of range")), {}};
  for (const auto& [e, v] : x.entries) out.entries[checked_mul(d, e, "rescaled divisor out of range")] = v;
  return out;
}

/// Lexicographic order on the dense exponent tuple over ascending divisors
/// of the ambient level.
inline bool lex_less(const ExponentVector& a, const ExponentVector& b,
                     const DivisorSet& ds) {
  for (long long d : ds.divs) {
    const Integer xa = a.at(d), xb = b.at(d);
    if (xa != xb) return xa < xb;
  }
  return false;
}

}  // namespace etaq
