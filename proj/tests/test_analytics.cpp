#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <set>

#include "etaq/analytics.hpp"
#include "etaq/family.hpp"

using namespace etaq;

namespace {

ExponentVector ev(long long level, std::map<long long, Integer> m) {
  return ExponentVector::make(Level(level), std::move(m));
}

std::vector<Integer> values(const OrderVector& y) { return y.values; }

}  // namespace

TEST_CASE("order_map frozen values") {
  const auto f24 = build_f(2, 4).exponents;
  CHECK(values(order_map(f24, Level(16))) == std::vector<Integer>{1, 13, 10, 13, 1});

  CHECK(values(order_map(ev(1, {{1, 24}}), Level(1))) == std::vector<Integer>{24});

  const auto f34 = build_f(3, 4).exponents;
  CHECK(values(order_map(f34, Level(81))) == std::vector<Integer>{1, 145, 65, 145, 1});

  CHECK_THROWS_AS(order_map(ev(3, {{3, 1}}), Level(4)), DomainError);
}

TEST_CASE("is_holomorphic") {
  CHECK(is_holomorphic(build_f(2, 4).exponents, Level(16)));
  CHECK_FALSE(is_holomorphic(ev(2, {{1, 1}, {2, -1}}), Level(2)));
  CHECK(is_holomorphic(ev(1, {{1, 1}}), Level(1)));
}

TEST_CASE("valence frozen values") {
  const auto r16 = valence_check(build_f(2, 4).exponents, Level(16));
  CHECK(r16.left == 48);
  CHECK(r16.right == 48);
  CHECK(r16.balanced);

  const auto r1 = valence_check(ev(1, {{1, 1}}), Level(1));
  CHECK(r1.left == 1);
  CHECK(r1.right == 1);

  const auto r81 = valence_check(build_f(3, 4).exponents, Level(81));
  CHECK(r81.left == 972);
  CHECK(r81.right == 972);
}

TEST_CASE("valence identity on random exponent vectors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> coin(-4, 4);
  const std::vector<long long> levels = {1,  2,  3,  4,   6,   8,   12,  16,  24,  36,
                                         48, 60, 81, 96, 120, 128, 144, 180, 210, 240};
  for (long long n : levels) {
    const DivisorSet ds = divisors(Level(n));
    for (int rep = 0; rep < 100; ++rep) {
      ExponentVector x{Level(n), {}};
      for (long long d : ds.divs) {
        const long long e = coin(rng);
        if (e != 0) x.entries[d] = e;
      }
      REQUIRE(valence_check(x, Level(n)).balanced);
    }
  }
}

TEST_CASE("cusp classes") {
  const auto c16 = cusp_classes(Level(16));
  std::vector<long long> mult;
  long long total = 0;
  for (const auto& c : c16) {
    mult.push_back(c.multiplicity);
    total += c.multiplicity;
  }
  CHECK(mult == std::vector<long long>{1, 1, 2, 1, 1});
  CHECK(total == 6);

  CHECK(cusp_classes(Level(1)).size() == 1);
  CHECK(cusp_classes(Level(1))[0].multiplicity == 1);

  long long total6 = 0;
  for (const auto& c : cusp_classes(Level(6))) {
    CHECK(c.multiplicity == 1);
    total6 += c.multiplicity;
  }
  CHECK(total6 == 4);
}

TEST_CASE("fricke conjugation") {
  const auto f34 = build_f(3, 4).exponents;
  CHECK(fricke_conjugate(f34, Level(81)).entries == f34.entries);  // palindrome

  const auto e = fricke_conjugate(ev(4, {{1, 1}}), Level(4));
  CHECK(e.entries == std::map<long long, Integer>{{4, 1}});

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long long> coin(-3, 3);
  for (long long n : {12LL, 16LL, 36LL}) {
    const DivisorSet ds = divisors(Level(n));
    for (int rep = 0; rep < 20; ++rep) {
      ExponentVector x{Level(n), {}};
      for (long long d : ds.divs) {
        const long long c = coin(rng);
        if (c != 0) x.entries[d] = c;
      }
      // Involution.
      REQUIRE(fricke_conjugate(fricke_conjugate(x, Level(n)), Level(n)).entries ==
              x.entries);
      // Reverses the order vector.
      const auto y = order_map(x, Level(n));
      const auto yf = order_map(fricke_conjugate(x, Level(n)), Level(n));
      for (std::size_t i = 0; i < ds.size(); ++i)
        REQUIRE(yf.values[i] == y.at(n / ds.divs[i]));
    }
  }
}

TEST_CASE("ord at infinity is level independent") {
  const auto x = ev(4, {{1, 2}, {4, -1}});
  for (long long n : {4LL, 8LL, 12LL, 16LL, 36LL}) {
    const auto y = order_map(x, Level(n));
    REQUIRE(y.at_infinity() == ord_infinity_24(x));
    REQUIRE(y.at_infinity() == Integer(2 * 1 + (-1) * 4));
  }
}

TEST_CASE("valence_solution_count") {
  CHECK(valence_solution_count(Level(4), 1) == 28);  // weights (1,1,1), target 6
  CHECK(valence_solution_count(Level(1), 1) == 1);
}

TEST_CASE("enumerate_holomorphic at level 4") {
  const auto out = enumerate_holomorphic(Level(4), 1);
  const DivisorSet ds = divisors(Level(4));

  const std::vector<ExponentVector> expected = {
      ev(4, {{1, 1}}), ev(4, {{2, 1}}), ev(4, {{4, 1}}),
      ev(4, {{1, 2}, {2, -1}}), ev(4, {{2, -1}, {4, 2}})};
  for (const auto& want : expected)
    CHECK(std::count_if(out.begin(), out.end(), [&](const ExponentVector& x) {
            return x.entries == want.entries;
          }) == 1);

  std::set<std::map<long long, Integer>> seen;
  for (const auto& x : out) {
    REQUIRE(is_holomorphic(x, Level(4)));
    REQUIRE(weight_numerator(x) == 1);
    REQUIRE(true_level(x).n % 1 == 0);
    REQUIRE(Level(4).n % true_level(x).n == 0);
    REQUIRE(seen.insert(x.entries).second);  // pairwise distinct
  }
  CHECK(Integer(out.size()) <= valence_solution_count(Level(4), 1));
  CHECK(std::is_sorted(out.begin(), out.end(),
                       [&](const ExponentVector& a, const ExponentVector& b) {
                         return lex_less(a, b, ds);
                       }));
}

TEST_CASE("enumerate_holomorphic at level 1") {
  const auto out = enumerate_holomorphic(Level(1), 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].entries == std::map<long long, Integer>{{1, 1}});
}

TEST_CASE("enumerate_holomorphic bound guard") {
  SearchOptions opts;
  opts.max_candidates = 5;
  try {
    enumerate_holomorphic(Level(4), 1, opts);
    FAIL("expected BoundExceededError");
  } catch (const BoundExceededError& e) {
    CHECK(e.computed_size() == 28);
  }
}

TEST_CASE("enumerate_holomorphic is schedule independent") {
  SearchOptions threaded;
  threaded.threads = 3;
  const auto a = enumerate_holomorphic(Level(12), 1);
  const auto b = enumerate_holomorphic(Level(12), 1, threaded);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}
