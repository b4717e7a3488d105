#include "mcs/rational.hpp"

#include <cctype>

#include "mcs/errors.hpp"

namespace mcs {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

boost::multiprecision::mpz_int parse_integer(std::string_view s) {
  return boost::multiprecision::mpz_int(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError(0, "malformed rational '" + std::string(text) + "'");
    auto d = parse_integer(den);
    if (d == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
    value = Rational(parse_integer(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ParseError(0, "malformed decimal '" + std::string(text) + "'");
    boost::multiprecision::mpz_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    boost::multiprecision::mpz_int w = whole.empty() ? 0 : parse_integer(whole);
    boost::multiprecision::mpz_int f = frac.empty() ? 0 : parse_integer(frac);
    value = Rational(w * scale + f, scale);
  } else {
    if (!all_digits(s)) throw ParseError(0, "malformed number '" + std::string(text) + "'");
    value = Rational(parse_integer(s));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational floor_to_multiple(const Rational& value, const Rational& step) {
  Rational q = value / step;
  boost::multiprecision::mpz_int n = boost::multiprecision::numerator(q);
  boost::multiprecision::mpz_int d = boost::multiprecision::denominator(q);
  boost::multiprecision::mpz_int f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return Rational(f) * step;
}

}  // namespace mcs
