#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace obfloc {

/// Exact rational number. Every quantity in this library (locations,
/// distances, utilities, probabilities, ratios) is carried as a Rational;
/// there is no floating point on any computation path. The representation is
/// always canonical: reduced, denominator positive, sign on the numerator.
class Rational {
 public:
  using Int = boost::multiprecision::cpp_int;

  Rational() : v_(0) {}
  Rational(std::int64_t value) : v_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);
  Rational(Int num, Int den);

  // Strict grammar: "a" or "a/b", optional leading '-', decimal digits of any
  // length, denominator nonzero. Throws ParseError otherwise.
  static Rational parse(std::string_view text);

  Int numerator() const { return boost::multiprecision::numerator(v_); }
  Int denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  // "a" when the denominator is 1, "a/b" otherwise. parse(str()) round-trips.
  std::string str() const;

  // Exact decimal expansion with `digits` fractional digits, last digit
  // rounded half away from zero. Rendering only; never fed back into math.
  std::string decimal(int digits = 12) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  using Backend = boost::multiprecision::cpp_rational;
  explicit Rational(Backend v) : v_(std::move(v)) {}

  Backend v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

}  // namespace obfloc
