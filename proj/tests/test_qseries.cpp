#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "etaq/family.hpp"
#include "etaq/qseries.hpp"

using namespace etaq;

namespace {

ExponentVector ev(long long level, std::map<long long, Integer> m) {
  return ExponentVector::make(Level(level), std::move(m));
}

// Oracle: the truncated product prod_{n>=1} (1 - q^n), multiplied out term
// by term with no pentagonal shortcut.
std::vector<Integer> euler_product_brute(std::size_t terms) {
  std::vector<Integer> acc(terms);
  acc[0] = 1;
  for (std::size_t n = 1; n < terms; ++n) {
    std::vector<Integer> next(terms);
    for (std::size_t i = 0; i < terms; ++i) {
      if (acc[i] == 0) continue;
      next[i] += acc[i];
      if (i + n < terms) next[i + n] -= acc[i];
    }
    acc = std::move(next);
  }
  return acc;
}

// Oracle: partition counts by the direct DP over part sizes.
std::vector<Integer> partitions_brute(std::size_t terms) {
  std::vector<Integer> p(terms);
  p[0] = 1;
  for (std::size_t k = 1; k < terms; ++k)
    for (std::size_t j = k; j < terms; ++j) p[j] += p[j - k];
  return p;
}

}  // namespace

TEST_CASE("eta_series") {
  const QSeries e = eta_series(8);
  CHECK(e.leading_exponent_24 == 1);
  CHECK(e.coefficients == std::vector<Integer>{1, -1, -1, 0, 0, 1, 0, 1});

  const auto brute = euler_product_brute(64);
  CHECK(eta_series(64).coefficients == brute);

  // Nonzero only at generalized pentagonal indices, where the value is +-1.
  std::set<long long> pentagonal;
  for (long long k = -10; k <= 10; ++k) pentagonal.insert(k * (3 * k - 1) / 2);
  const auto c = eta_series(120).coefficients;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (pentagonal.count(static_cast<long long>(i)))
      REQUIRE((c[i] == 1 || c[i] == -1));
    else
      REQUIRE(c[i] == 0);
  }
}

TEST_CASE("quotient_series for the discriminant form") {
  const QSeries d = quotient_series(ev(1, {{1, 24}}), 3);
  CHECK(d.leading_exponent_24 == 24);
  CHECK(d.coefficients == std::vector<Integer>{1, -24, 252});

  // Oracle: 24-fold product of the brute-force Euler product.
  const std::size_t T = 16;
  const auto e = euler_product_brute(T);
  std::vector<Integer> acc(T);
  acc[0] = 1;
  for (int k = 0; k < 24; ++k) acc = series::mul(acc, e, T);
  CHECK(quotient_series(ev(1, {{1, 24}}), T).coefficients == acc);
}

TEST_CASE("quotient_series generates partitions") {
  const QSeries p = quotient_series(ev(1, {{1, -1}}), 10);
  CHECK(p.leading_exponent_24 == -1);
  CHECK(p.coefficients == std::vector<Integer>{1, 1, 2, 3, 5, 7, 11, 15, 22, 30});
  CHECK(quotient_series(ev(1, {{1, -1}}), 40).coefficients == partitions_brute(40));
}

TEST_CASE("leading exponent agrees with the order map") {
  const auto f24 = build_f(2, 4).exponents;
  CHECK(quotient_series(f24, 4).leading_exponent_24 == 1);
  CHECK(quotient_series(f24, 4).leading_exponent_24 ==
        order_map(f24, Level(16)).at_infinity());

  const auto f35 = build_f(3, 5).exponents;
  CHECK(quotient_series(f35, 4).leading_exponent_24 ==
        order_map(f35, Level(243)).at_infinity());
}

TEST_CASE("series multiplicativity in the exponents") {
  const std::size_t T = 24;
  const auto a = ev(4, {{1, 2}, {2, -1}});
  const auto b = ev(4, {{2, -1}, {4, 2}});
  ExponentVector sum{Level(4), {}};
  for (long long d : {1LL, 2LL, 4LL}) {
    const Integer e = a.at(d) + b.at(d);
    if (e != 0) sum.entries[d] = e;
  }
  const auto qa = quotient_series(a, T), qb = quotient_series(b, T);
  const auto qs = quotient_series(sum, T);
  CHECK(qs.leading_exponent_24 == qa.leading_exponent_24 + qb.leading_exponent_24);
  CHECK(qs.coefficients == series::mul(qa.coefficients, qb.coefficients, T));
}

TEST_CASE("series_distinct") {
  CHECK(series_distinct(ev(1, {{1, 1}}), ev(2, {{2, 1}}), 5));
  CHECK(series_distinct(ev(4, {{1, 2}, {2, -1}}), ev(4, {{2, -1}, {4, 2}}), 5));
  CHECK_THROWS_AS(series_distinct(ev(1, {{1, 1}}), ev(2, {{1, 1}}), 5), DomainError);

  // Constant terms of eta-quotient expansions are 1.
  CHECK(quotient_series(build_f(2, 4).exponents, 6).coefficients[0] == 1);
}
