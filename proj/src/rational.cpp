#include "obfloc/rational.hpp"

#include <ostream>

#include "obfloc/errors.hpp"

namespace obfloc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Accepts an optional leading '-' followed by decimal digits.
Rational::Int parse_int(std::string_view s, std::string_view whole) {
  bool negative = !s.empty() && s.front() == '-';
  if (negative) s.remove_prefix(1);
  if (!all_digits(s))
    throw ParseError("invalid rational '" + std::string(whole) + "'");
  Rational::Int value{std::string(s)};
  return negative ? Rational::Int(-value) : value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : Rational(Int(num), Int(den)) {}

Rational::Rational(Int num, Int den) {
  if (den.is_zero()) throw ValidationError("rational denominator is zero");
  if (den < 0) {  // cpp_rational insists on a positive denominator
    num = -num;
    den = -den;
  }
  v_ = Backend(std::move(num), std::move(den));  // reduced on construction
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text), Int(1));
  Int num = parse_int(text.substr(0, slash), text);
  Int den = parse_int(text.substr(slash + 1), text);
  if (den.is_zero()) throw ParseError("invalid rational '" + std::string(text) + "': zero denominator");
  return Rational(std::move(num), std::move(den));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ValidationError("rational division by zero");
  return Rational(Rational::Backend(a.v_ / b.v_));
}

std::string Rational::str() const {
  std::string out = numerator().str();
  if (!is_integer()) {
    out += '/';
    out += denominator().str();
  }
  return out;
}

std::string Rational::decimal(int digits) const {
  Int num = numerator();
  const Int den = denominator();
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  Int whole = num / den;
  Int rem = num % den;
  std::string frac;
  frac.reserve(digits);
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    frac += static_cast<char>('0' + static_cast<int>(rem / den));
    rem %= den;
  }
  if (2 * rem >= den) {  // round half away from zero
    int i = digits - 1;
    for (; i >= 0 && frac[i] == '9'; --i) frac[i] = '0';
    if (i >= 0)
      ++frac[i];
    else
      ++whole;
  }
  out += whole.str();
  if (digits > 0) {
    out += '.';
    out += frac;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace obfloc
