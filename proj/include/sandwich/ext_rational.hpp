#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sandwich {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// An exact rational number or +infinity. Every parameter on the decision
/// path is an ExtRational; no floating point is involved in comparisons.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(long long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  ExtRational(const Rational& v) : value_(v) {}  // NOLINT
  ExtRational(long long num, long long den);

  static ExtRational infinity();

  /// Parses "inf", "∞", integers, "a/b" and terminating decimals ("2.2" is 11/5).
  static ExtRational parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  bool is_integer() const;

  /// Requires a finite value.
  const Rational& value() const;

  double to_double() const;
  std::string str() const;

  /// 1/x with 1/inf = 0; 1/0 throws ParameterRange.
  ExtRational reciprocal() const;

  ExtRational operator-() const;
  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator-(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator*(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator/(const ExtRational& a, const ExtRational& b);

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a,
                                          const ExtRational& b);

 private:
  Rational value_{0};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtRational& x);

/// max(0, x), exact.
ExtRational pos_part(const ExtRational& x);

ExtRational abs(const ExtRational& x);
ExtRational min(const ExtRational& a, const ExtRational& b);
ExtRational max(const ExtRational& a, const ExtRational& b);

/// (d/p1 - d/2)_+ + (d/2 - d/p2)_+ with d/inf = 0. Both indices must lie in
/// [1, inf]; otherwise ParameterRange is thrown.
ExtRational deficiency(const ExtRational& p1, const ExtRational& p2, int d);

/// d/p with d/inf = 0.
ExtRational dim_over(int d, const ExtRational& p);

}  // namespace sandwich
