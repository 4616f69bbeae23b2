#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace advreal {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RatVector = std::vector<Rational>;

// 2^n for n of either sign.
inline Rational pow2(long n) {
  if (n >= 0) return Rational(BigInt(1) << n);
  return Rational(BigInt(1), BigInt(1) << (-n));
}

inline BigInt floor_rat(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

inline BigInt ceil_rat(const Rational& q) { return -floor_rat(-q); }

// Nearest integer, ties away from zero (never hit where we use it).
inline BigInt round_rat(const Rational& q) {
  return floor_rat(q + Rational(1, 2));
}

inline Rational abs_rat(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

// Smallest k >= 0 with 2^k >= q (q > 0); used for precision budgets.
inline long ceil_log2(const Rational& q) {
  if (q <= 0) throw std::invalid_argument("ceil_log2: argument must be positive");
  long k = 0;
  Rational p(1);
  while (p < q) { p *= 2; ++k; }
  while (p / 2 >= q) { p /= 2; --k; }
  return k;
}

inline long floor_log2_int(const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("floor_log2_int: argument must be positive");
  long k = -1;
  BigInt m = n;
  while (m > 0) { m >>= 1; ++k; }
  return k;
}

// Canonical text format: "p/q" (q > 1) or "p". No whitespace inside.
inline std::string print_rat(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

inline std::optional<Rational> try_parse_rat(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (!is_int(text)) return std::nullopt;
      return Rational(BigInt(text));
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return std::nullopt;
    BigInt d(den);
    if (d == 0) return std::nullopt;
    return Rational(BigInt(num), d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline Rational parse_rat(const std::string& text) {
  auto r = try_parse_rat(text);
  if (!r) throw std::invalid_argument("bad rational literal: '" + text + "'");
  return *r;
}

}  // namespace advreal
