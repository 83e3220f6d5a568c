#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "etaq/core.hpp"
#include "etaq/expr.hpp"

using namespace etaq;

namespace {

// Brute-force totient, the oracle for euler_phi.
long long phi_brute(long long n) {
  long long c = 0;
  for (long long k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

ExponentVector ev(long long level, std::map<long long, Integer> m) {
  return ExponentVector::make(Level(level), std::move(m));
}

}  // namespace

TEST_CASE("divisors") {
  CHECK(divisors(Level(1)).divs == std::vector<long long>{1});
  CHECK(divisors(Level(16)).divs == std::vector<long long>{1, 2, 4, 8, 16});
  CHECK(divisors(Level(6)).divs == std::vector<long long>{1, 2, 3, 6});

  for (long long n = 1; n <= 400; ++n) {
    const auto ds = divisors(Level(n));
    long long count = 0;
    for (long long d = 1; d <= n; ++d)
      if (n % d == 0) ++count;
    REQUIRE(static_cast<long long>(ds.size()) == count);
    REQUIRE(std::is_sorted(ds.divs.begin(), ds.divs.end()));
    for (long long d : ds.divs)  // closed under d -> N/d
      REQUIRE(std::binary_search(ds.divs.begin(), ds.divs.end(), n / d));
  }
}

TEST_CASE("euler_phi") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(2) == 1);
  CHECK(euler_phi(12) == 4);
  for (long long n = 1; n <= 200; ++n) REQUIRE(euler_phi(n) == phi_brute(n));
}

TEST_CASE("psi_index") {
  CHECK(psi_index(Level(1)) == 1);
  CHECK(psi_index(Level(16)) == 24);
  CHECK(psi_index(Level(6)) == 12);

  // Multiplicative over coprime factors.
  for (long long m = 1; m <= 40; ++m)
    for (long long n = 1; n <= 40; ++n)
      if (std::gcd(m, n) == 1)
        REQUIRE(psi_index(Level(m * n)) == psi_index(Level(m)) * psi_index(Level(n)));
}

TEST_CASE("weight_numerator") {
  CHECK(weight_numerator(ev(1, {{1, 1}})) == 1);
  CHECK(weight_numerator(ev(1, {{1, 24}})) == 24);
  CHECK(weight_numerator(ev(81, {{1, -2}, {3, 4}, {9, 5}, {27, 4}, {81, -2}})) == 9);
}

TEST_CASE("true_level") {
  CHECK(true_level(ev(4, {{2, 3}})) == Level(2));
  CHECK(true_level(ev(16, {{1, -1}, {2, 1}, {4, 2}, {8, 1}, {16, -1}})) == Level(16));
  CHECK(true_level(ev(1, {{1, 5}})) == Level(1));
  CHECK_THROWS_AS(true_level(ExponentVector::zero(Level(7))), DomainError);
}

TEST_CASE("rescale") {
  const auto a = rescale(ev(1, {{1, 1}}), 2);
  CHECK(a.level == Level(2));
  CHECK(a.entries == std::map<long long, Integer>{{2, 1}});

  const auto f24 = ev(16, {{1, -1}, {2, 1}, {4, 2}, {8, 1}, {16, -1}});
  const auto b = rescale(f24, 3);
  CHECK(b.level == Level(48));
  CHECK(b.entries ==
        std::map<long long, Integer>{{3, -1}, {6, 1}, {12, 2}, {24, 1}, {48, -1}});

  CHECK(rescale(f24, 1) == f24);

  // Weight invariant, level multiplied.
  for (long long d : {2LL, 3LL, 5LL}) {
    CHECK(weight_numerator(rescale(f24, d)) == weight_numerator(f24));
    CHECK(true_level(rescale(f24, d)).n == d * true_level(f24).n);
  }
}

TEST_CASE("rational round-trip") {
  for (int a = -6; a <= 6; ++a)
    for (int b = 1; b <= 6; ++b)
      for (int c = -6; c <= 6; ++c)
        for (int d = 1; d <= 6; ++d) {
          const Rational x(a, b), y(c, d);
          REQUIRE(Rational(Rational(x + y) - y) == x);
        }
  CHECK(boost::multiprecision::denominator(Rational(4, 8)) == 2);  // reduced form
}

TEST_CASE("expression format round-trips") {
  const auto f24 = parse_eta_expr("1^-1 2^1 4^2 8^1 16^-1");
  CHECK(f24.level == Level(16));
  CHECK(f24.entries ==
        std::map<long long, Integer>{{1, -1}, {2, 1}, {4, 2}, {8, 1}, {16, -1}});
  CHECK(parse_eta_expr(format_eta_expr(f24)) == f24);

  const auto declared = parse_eta_expr("2^3 @4");
  CHECK(declared.level == Level(4));
  CHECK(declared.entries == std::map<long long, Integer>{{2, 3}});
  CHECK(parse_eta_expr(format_eta_expr(declared)) == declared);

  // Repeated divisors accumulate; zero exponents vanish.
  CHECK(parse_eta_expr("2^1 2^2").entries == std::map<long long, Integer>{{2, 3}});
  CHECK(parse_eta_expr("1^0 2^1").entries == std::map<long long, Integer>{{2, 1}});

  const auto zero = parse_eta_expr("@6");
  CHECK(zero.is_zero());
  CHECK(format_eta_expr(zero) == "@6");
}

TEST_CASE("expression parse errors carry positions") {
  try {
    parse_eta_expr("1^1 zork");
    FAIL("expected a parse error");
  } catch (const ExprParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_eta_expr(""), ExprParseError);
  CHECK_THROWS_AS(parse_eta_expr("3^1 @4"), ExprParseError);  // 3 does not divide 4
  CHECK_THROWS_AS(parse_eta_expr("2^"), ExprParseError);
  CHECK_THROWS_AS(parse_eta_expr("0^1"), ExprParseError);
  CHECK_THROWS_AS(parse_eta_expr("@4 2^1"), ExprParseError);  // @N must be final
}

TEST_CASE("lexicographic order is dense, not map order") {
  const DivisorSet ds = divisors(Level(2));
  // (0, -5) < (1, 0) even though the map {2:-5} starts at a larger key.
  CHECK(lex_less(ev(2, {{2, -5}}), ev(2, {{1, 1}}), ds));
  CHECK_FALSE(lex_less(ev(2, {{1, 1}}), ev(2, {{2, -5}}), ds));
}
