#pragma once

#include <cctype>
#include <optional>
#include <string>

#include "etaq/core.hpp"

namespace etaq {

/// Malformed eta-quotient expression; position is the byte offset of the
/// offending token in the input string.
class ExprParseError : public Error {
 public:
  ExprParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

inline long long parse_positive_int(const std::string& tok, std::size_t pos,
                                    const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size() || v < 1) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw ExprParseError(std::string("expected ") + what, pos);
  }
}

}  // namespace detail

/// Parses the eta-quotient text format: whitespace-separated tokens `d^e`
/// with d a positive integer and e a (possibly negative) integer, e.g.
/// `1^-1 2^1 4^2 8^1 16^-1`. A final `@N` token declares the level;
/// otherwise the level defaults to the lcm of the support. Repeated
/// divisors accumulate additively.
inline ExponentVector parse_eta_expr(const std::string& text) {
  struct RawEntry {
    long long d;
    Integer e;
    std::size_t pos;
  };
  std::vector<RawEntry> raw;
  std::optional<long long> declared;
  std::size_t declared_pos = 0;

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::string tok = text.substr(start, i - start);

    if (declared)
      throw ExprParseError("'@N' must be the final token", start);

    if (tok[0] == '@') {
      declared = detail::parse_positive_int(tok.substr(1), start,
                                            "positive level after '@'");
      declared_pos = start;
      continue;
    }

    const std::size_t caret = tok.find('^');
    if (caret == std::string::npos)
      throw ExprParseError("expected token of the form d^e", start);
    const long long d = detail::parse_positive_int(tok.substr(0, caret), start,
                                                   "positive divisor before '^'");
    const std::string etext = tok.substr(caret + 1);
    if (etext.empty() ||
        etext.find_first_not_of("-0123456789") != std::string::npos ||
        (etext.size() > 1 && etext.find('-', 1) != std::string::npos) ||
        etext == "-")
      throw ExprParseError("expected integer exponent after '^'", start + caret + 1);
    raw.push_back({d, Integer(etext), start});
  }

  // Resolve the level, then validate every divisor against it.
  long long level = 1;
  if (declared) {
    level = *declared;
  } else {
    bool any = false;
    for (const auto& r : raw) {
      if (r.e == 0) continue;
      level = checked_mul(level / std::gcd(level, r.d), r.d, "level out of range");
      any = true;
    }
    if (!any)
      throw ExprParseError("empty eta quotient needs an explicit '@N' level",
                           text.size());
  }

  ExponentVector x{Level(level), {}};
  for (const auto& r : raw) {
    if (level % r.d != 0)
      throw ExprParseError("divisor " + std::to_string(r.d) +
                               " does not divide declared level " +
                               std::to_string(level),
                           declared ? declared_pos : r.pos);
    x.add(r.d, r.e);
  }
  return x;
}

/// Inverse of parse_eta_expr: `d^e` tokens over ascending divisors, plus a
/// trailing `@N` whenever the declared level is not recoverable from the
/// support alone.
inline std::string format_eta_expr(const ExponentVector& x) {
  std::string out;
  for (const auto& [d, e] : x.entries) {
    if (!out.empty()) out += ' ';
    out += std::to_string(d) + "^" + e.str();
  }
  const bool needs_level = x.is_zero() || true_level(x) != x.level;
  if (needs_level) {
    if (!out.empty()) out += ' ';
    out += "@" + std::to_string(x.level.n);
  }
  return out;
}

}  // namespace etaq
