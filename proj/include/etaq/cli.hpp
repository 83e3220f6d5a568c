#pragma once

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "etaq/etaq.hpp"

namespace etaq::cli {

struct CommandResult {
  int exit_code = 0;
  std::string payload;
};

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kIdentityFailure = 2;
inline constexpr int kCounterexample = 3;
inline constexpr int kInconclusive = 4;
inline constexpr int kUsage = 64;
inline constexpr int kExprParse = 65;

namespace detail {

using nlohmann::json;

inline json int_matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json rational_matrix_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string join_values(const std::vector<Integer>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i].str();
  }
  return s;
}

inline std::string format_qseries(const QSeries& qs) {
  std::string prefix;
  const Integer& a = qs.leading_exponent_24;
  if (a != 0) {
    if (a % 24 == 0) {
      const Integer e = a / 24;
      prefix = e == 1 ? "q" : "q^" + e.str();
    } else {
      prefix = "q^(" + a.str() + "/24)";
    }
  }
  std::string series;
  for (std::size_t k = 0; k < qs.coefficients.size(); ++k) {
    const Integer& c = qs.coefficients[k];
    if (c == 0) continue;
    const bool neg = c < 0;
    const Integer mag = neg ? Integer(-c) : c;
    std::string term;
    if (k == 0)
      term = mag.str();
    else {
      if (mag != 1) term = mag.str();
      term += k == 1 ? "q" : "q^" + std::to_string(k);
    }
    if (series.empty())
      series = (neg ? "-" : "") + term;
    else
      series += (neg ? " - " : " + ") + term;
  }
  if (series.empty()) series = "0";
  series = "(" + series + " + ...)";
  return prefix.empty() ? series : prefix + " * " + series;
}

struct ExprContext {
  ExponentVector x;
  Level ambient;
};

inline ExprContext load_expr(const std::string& text, std::optional<long long> level) {
  ExponentVector x = parse_eta_expr(text);
  if (!level) return {std::move(x), x.level};
  const Level N(*level);
  if (N.n % x.level.n != 0)
    throw DomainError("declared level " + std::to_string(x.level.n) +
                      " does not divide --level " + std::to_string(N.n));
  return {std::move(x), N};
}

inline int selftest(std::ostringstream& out) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  for (long long p : {2LL, 3LL, 5LL, 7LL})
    for (int n = 1; n <= 8; ++n)
      check(verify_proposition1(p, n),
            "prop1 p=" + std::to_string(p) + " n=" + std::to_string(n));

  std::mt19937_64 rng(20240416);
  std::uniform_int_distribution<long long> coin(-4, 4);
  bool valence_ok = true;
  for (long long N : {1LL, 2LL, 4LL, 6LL, 12LL, 16LL, 24LL, 36LL, 48LL, 60LL,
                      81LL, 96LL, 120LL, 128LL, 144LL, 180LL, 210LL, 225LL, 236LL, 240LL}) {
    const DivisorSet ds = divisors(Level(N));
    for (int rep = 0; rep < 25 && valence_ok; ++rep) {
      ExponentVector x{Level(N), {}};
      for (long long d : ds.divs) {
        const long long e = coin(rng);
        if (e != 0) x.entries[d] = e;
      }
      valence_ok = valence_check(x, Level(N)).balanced;
    }
  }
  check(valence_ok, "valence identity on random exponent vectors");

  for (long long p : {2LL, 3LL, 5LL})
    for (int n : {4, 6})
      check(verify_family(p, n).ok(),
            "family p=" + std::to_string(p) + " n=" + std::to_string(n));
  for (long long p : {3LL, 5LL})
    check(verify_family(p, 5).ok(), "family p=" + std::to_string(p) + " n=5");

  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? kOk : kIdentityFailure;
}

}  // namespace detail

/// Dispatches one CLI invocation; args exclude the program name.
inline CommandResult run(std::vector<std::string> args) {
  using detail::json;
  std::ostringstream out;
  bool as_json = false;
  SearchOptions opts;

  CLI::App app{"exact computations with Dedekind eta quotients on Gamma0(N)", "etaq"};
  app.require_subcommand(1);
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_option("--threads", opts.threads, "worker threads for enumerations");
  app.add_option("--max-box", opts.max_candidates, "candidate bound for enumerations")
      ->envname("ETAQ_MAX_BOX");

  std::string expr_text, matrix_kind, verify_kind;
  std::optional<long long> level_opt;
  long long level = 0, weight_num = 0, max_weight_num = 0, pval = 0;
  int nval = 0;
  std::size_t terms = 10, pair_limit = 1000;
  bool family_verify = false;

  auto add_level_opt = [&](CLI::App* c) {
    c->add_option_function<long long>(
        "--level", [&](const long long& v) { level_opt = v; },
        "ambient level N (default: the level of the expression)");
  };
  auto add_expr = [&](CLI::App* c) {
    c->add_option("expr", expr_text, "eta quotient, e.g. \"1^-1 2^1 4^2 8^1 16^-1\"")
        ->required();
  };

  CLI::App* orders = app.add_subcommand("orders", "24-scaled cusp orders of eta^X");
  add_level_opt(orders);
  add_expr(orders);

  CLI::App* holo = app.add_subcommand("holo", "holomorphy test (exit 3 when not)");
  add_level_opt(holo);
  add_expr(holo);

  CLI::App* valence = app.add_subcommand("valence", "valence-formula accounting");
  add_level_opt(valence);
  add_expr(valence);

  CLI::App* qexp = app.add_subcommand("qexp", "exact q-expansion");
  qexp->add_option("--terms", terms, "number of series coefficients")->required();
  add_expr(qexp);

  CLI::App* enum_cmd = app.add_subcommand("enum", "holomorphic eta quotients of a given weight");
  enum_cmd->add_option("--level", level, "level N")->required();
  enum_cmd->add_option("--weight-num", weight_num, "weight numerator k (weight k/2)")->required();
  enum_cmd->add_option("--limit", opts.max_candidates, "candidate bound");

  CLI::App* matrix = app.add_subcommand("matrix", "order matrix data as exact JSON");
  matrix->add_option("kind", matrix_kind, "A | Ainv | B | smith")
      ->required()
      ->check(CLI::IsMember({"A", "Ainv", "B", "smith"}));
  matrix->add_option("--level", level, "level N")->required();

  CLI::App* verify = app.add_subcommand("verify", "verify matrix identities (exit 2 on failure)");
  verify->add_option("what", verify_kind, "prop1")->required()->check(CLI::IsMember({"prop1"}));
  verify->add_option("--p", pval, "prime p")->required();
  verify->add_option("--n", nval, "exponent n")->required();

  CLI::App* family = app.add_subcommand("family", "the eta quotient f_{p,n}");
  family->add_option("--p", pval, "prime p")->required();
  family->add_option("--n", nval, "exponent n > 3")->required();
  family->add_flag("--verify", family_verify, "also run the family checks");

  CLI::App* bigF = app.add_subcommand("bigF", "F_N = eta^v, v the column sum of B_N");
  bigF->add_option("--level", level, "level N")->required();

  CLI::App* zn = app.add_subcommand("zn", "coordinates of X in the B_N column basis");
  add_level_opt(zn);
  add_expr(zn);

  CLI::App* factor = app.add_subcommand("factor", "factorizations into holomorphic factors");
  add_level_opt(factor);
  factor->add_option("--limit", pair_limit, "maximum number of pairs listed");
  add_expr(factor);

  CLI::App* simple = app.add_subcommand("simple", "primitivity + quasi-irreducibility");
  add_level_opt(simple);
  add_expr(simple);

  CLI::App* certify = app.add_subcommand("certify", "coset-congruence irreducibility certificate");
  certify->add_option("--p", pval, "prime p")->required();
  certify->add_option("--n", nval, "even exponent n > 3")->required();

  CLI::App* scan = app.add_subcommand("scan", "search for simple eta quotients of level p^n");
  scan->add_option("--p", pval, "prime p")->required();
  scan->add_option("--n", nval, "exponent n > 3")->required();
  scan->add_option("--max-weight-num", max_weight_num, "scan weights up to this numerator")
      ->required();

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "matrix + valence + family suite");
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    return {kOk, app.help()};
  } catch (const CLI::ParseError& e) {
    return {kUsage, std::string(e.what()) + "\nrun 'etaq --help' for usage\n"};
  }

  try {
    if (orders->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const OrderVector y = order_map(ctx.x, ctx.ambient);
      if (as_json) {
        json j{{"level", ctx.ambient.n}, {"divisors", y.divisors}};
        json ords = json::array();
        for (const Integer& v : y.values) ords.push_back(v.str());
        j["orders_24"] = std::move(ords);
        out << j.dump() << "\n";
      } else {
        for (std::size_t i = 0; i < y.divisors.size(); ++i)
          out << "cusp 1/" << y.divisors[i] << ": " << y.values[i].str() << "/24\n";
      }
      return {kOk, out.str()};
    }

    if (holo->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const OrderVector y = order_map(ctx.x, ctx.ambient);
      bool ok = true;
      for (const Integer& v : y.values)
        if (v < 0) ok = false;
      if (as_json) {
        json j{{"holomorphic", ok}};
        json ords = json::array();
        for (const Integer& v : y.values) ords.push_back(v.str());
        j["orders_24"] = std::move(ords);
        out << j.dump() << "\n";
      } else {
        out << (ok ? "holomorphic" : "not holomorphic") << ", orders/24 = "
            << detail::join_values(y.values) << "\n";
      }
      return {ok ? kOk : kCounterexample, out.str()};
    }

    if (valence->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const ValenceReport r = valence_check(ctx.x, ctx.ambient);
      if (as_json)
        out << json{{"left", r.left.str()}, {"right", r.right.str()}, {"balanced", r.balanced}}
                   .dump()
            << "\n";
      else
        out << "left = " << r.left.str() << ", right = " << r.right.str() << ", "
            << (r.balanced ? "balanced" : "NOT BALANCED") << "\n";
      return {r.balanced ? kOk : kIdentityFailure, out.str()};
    }

    if (qexp->parsed()) {
      auto ctx = detail::load_expr(expr_text, std::nullopt);
      const QSeries qs = quotient_series(ctx.x, terms);
      if (as_json) {
        json coeffs = json::array();
        for (const Integer& c : qs.coefficients) coeffs.push_back(c.str());
        out << json{{"leading_exponent_24", qs.leading_exponent_24.str()},
                    {"coefficients", std::move(coeffs)}}
                   .dump()
            << "\n";
      } else {
        out << detail::format_qseries(qs) << "\n";
      }
      return {kOk, out.str()};
    }

    if (enum_cmd->parsed()) {
      const auto xs = enumerate_holomorphic(Level(level), weight_num, opts);
      if (as_json) {
        json list = json::array();
        for (const auto& x : xs) list.push_back(format_eta_expr(x));
        out << json{{"level", level}, {"weight_num", weight_num}, {"count", xs.size()},
                    {"quotients", std::move(list)}}
                   .dump()
            << "\n";
      } else {
        for (const auto& x : xs) out << format_eta_expr(x) << "\n";
      }
      return {kOk, out.str()};
    }

    if (matrix->parsed()) {
      const Level N(level);
      json j{{"level", level}, {"divisors", divisors(N).divs}};
      if (matrix_kind == "A") {
        j["A"] = detail::int_matrix_json(build_A(N).entries);
      } else if (matrix_kind == "B") {
        j["B"] = detail::int_matrix_json(build_B(N).entries);
      } else if (matrix_kind == "Ainv") {
        const auto fac = factorize(N.n);
        j["Ainv"] = detail::rational_matrix_json(
            fac.size() == 1 ? inverse_A_prime_power(fac[0].first, fac[0].second)
                            : inverse_A(N));
      } else {
        const auto fac = factorize(N.n);
        if (fac.size() != 1)
          throw DomainError("smith data needs a prime power level");
        const SmithData s = smith_data(fac[0].first, fac[0].second);
        j["p"] = s.p;
        j["n"] = s.n;
        j["D"] = detail::int_matrix_json(s.D);
        j["U"] = detail::int_matrix_json(s.U);
        j["V"] = detail::int_matrix_json(s.V);
        j["Uprime"] = detail::int_matrix_json(s.Uprime);
        j["Vprime"] = detail::int_matrix_json(s.Vprime);
      }
      out << j.dump() << "\n";
      return {kOk, out.str()};
    }

    if (verify->parsed()) {
      const bool ok = verify_proposition1(pval, nval);
      out << "prop1 p=" << pval << " n=" << nval << ": "
          << (ok ? "UU'=I, VV'=I, D=UBV all hold" : "IDENTITY FAILURE") << "\n";
      return {ok ? kOk : kIdentityFailure, out.str()};
    }

    if (family->parsed()) {
      const FamilyMember f = build_f(pval, nval);
      out << format_eta_expr(f.exponents) << "\n";
      if (family_verify) {
        const FamilyReport r = verify_family(pval, nval);
        out << "holomorphic: " << (r.holomorphic ? "yes" : "NO")
            << ", level p^n: " << (r.level_exact ? "yes" : "NO")
            << ", palindromic: " << (r.palindromic ? "yes" : "NO")
            << ", ord_inf = " << r.ord_infinity_24.str() << "/24"
            << ", ord_0 = " << r.ord_zero_24.str() << "/24\n";
        if (!r.ok()) return {kIdentityFailure, out.str()};
      }
      return {kOk, out.str()};
    }

    if (bigF->parsed()) {
      out << format_eta_expr(build_F(Level(level))) << "\n";
      return {kOk, out.str()};
    }

    if (zn->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const ZnCoefficients c = zn_membership(ctx.x, ctx.ambient);
      if (as_json) {
        json coeffs = json::array();
        for (const Rational& v : c.coefficients) coeffs.push_back(v.str());
        out << json{{"member", c.member}, {"divisors", c.divisors},
                    {"coefficients", std::move(coeffs)}}
                   .dump()
            << "\n";
      } else {
        for (std::size_t i = 0; i < c.divisors.size(); ++i)
          out << "C_" << c.divisors[i] << " = " << c.coefficients[i].str() << "\n";
        out << (c.member ? "member of Z_N" : "not a member of Z_N") << "\n";
      }
      return {kOk, out.str()};
    }

    if (factor->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const auto pairs = find_factorizations(ctx.x, ctx.ambient, pair_limit, opts);
      if (as_json) {
        json list = json::array();
        for (const auto& f : pairs)
          list.push_back({{"g", format_eta_expr(f.g)}, {"h", format_eta_expr(f.h)}});
        out << json{{"count", pairs.size()}, {"factorizations", std::move(list)}}.dump()
            << "\n";
      } else if (pairs.empty()) {
        out << "no factorization: quasi-irreducible on Gamma0(" << ctx.ambient.n << ")\n";
      } else {
        for (const auto& f : pairs)
          out << "(" << format_eta_expr(f.g) << ")  *  (" << format_eta_expr(f.h) << ")\n";
      }
      return {pairs.empty() ? kOk : kCounterexample, out.str()};
    }

    if (simple->parsed()) {
      auto ctx = detail::load_expr(expr_text, level_opt);
      const bool prim = is_primitive(ctx.x);
      const bool quasi = prim && is_quasi_irreducible(ctx.x, ctx.ambient, opts);
      if (as_json) {
        out << json{{"primitive", prim}, {"quasi_irreducible", quasi},
                    {"simple", prim && quasi}}
                   .dump()
            << "\n";
      } else if (prim && quasi) {
        out << "simple (primitive and quasi-irreducible)\n";
      } else if (!prim) {
        out << "not simple: imprimitive (rescaling or lower level)\n";
      } else {
        const auto pairs = find_factorizations(ctx.x, ctx.ambient, 1, opts);
        out << "not simple: factorizable";
        if (!pairs.empty())
          out << ", e.g. (" << format_eta_expr(pairs.front().g) << ")  *  ("
              << format_eta_expr(pairs.front().h) << ")";
        out << "\n";
      }
      return {prim && quasi ? kOk : kCounterexample, out.str()};
    }

    if (certify->parsed()) {
      const Certificate c = coset_certificate(pval, nval, opts);
      const char* status = c.status == CertificateStatus::certified_irreducible
                               ? "certified-irreducible"
                               : (c.status == CertificateStatus::decomposition_found
                                      ? "decomposition-found"
                                      : "inapplicable");
      if (as_json) {
        json j{{"status", status}, {"detail", c.detail}};
        if (c.witness)
          j["witness"] = {{"g", format_eta_expr(c.witness->g)},
                          {"h", format_eta_expr(c.witness->h)}};
        if (c.admissible_class)
          j["admissible_class"] = {c.admissible_class->first.str(),
                                   c.admissible_class->second.str()};
        out << j.dump() << "\n";
      } else {
        out << status << ": " << c.detail << "\n";
        if (c.witness)
          out << "witness: (" << format_eta_expr(c.witness->g) << ")  *  ("
              << format_eta_expr(c.witness->h) << ")\n";
      }
      const int code = c.status == CertificateStatus::certified_irreducible
                           ? kOk
                           : (c.status == CertificateStatus::decomposition_found
                                  ? kCounterexample
                                  : kInconclusive);
      return {code, out.str()};
    }

    if (scan->parsed()) {
      const ScanReport r = conjecture_scan(pval, nval, max_weight_num, opts);
      if (as_json) {
        json list = json::array();
        for (const auto& x : r.simple_found) list.push_back(format_eta_expr(x));
        out << json{{"p", r.p}, {"n", r.n}, {"max_weight_num", r.max_weight_num},
                    {"family_weight_num", r.family_weight_num.str()},
                    {"simple", std::move(list)}, {"found_heavier", r.found_heavier},
                    {"complete", r.complete}}
                   .dump()
            << "\n";
      } else {
        out << "sigma(f_{" << r.p << "," << r.n << "}) = " << r.family_weight_num.str()
            << "\n";
        for (const auto& x : r.simple_found)
          out << "simple: " << format_eta_expr(x)
              << "  (sigma = " << weight_numerator(x).str() << ")\n";
        if (!r.complete) out << "scan incomplete: candidate bound hit\n";
        out << (r.found_heavier ? "heavier simple quotient FOUND"
                                : "no simple quotient heavier than the family member")
            << "\n";
      }
      const int code = !r.complete ? kInconclusive : (r.found_heavier ? kCounterexample : kOk);
      return {code, out.str()};
    }

    if (selftest_cmd->parsed()) {
      const int code = detail::selftest(out);
      return {code, out.str()};
    }
  } catch (const ExprParseError& e) {
    return {kExprParse, std::string("parse error: ") + e.what() + "\n"};
  } catch (const BoundExceededError& e) {
    return {kInconclusive, std::string("inconclusive: ") + e.what() + "\n"};
  } catch (const Error& e) {
    return {kUsage, std::string("error: ") + e.what() + "\n"};
  }
  return {kUsage, "unknown command\n"};
}

}  // namespace etaq::cli
