#include "sandwich/ext_rational.hpp"

#include <ostream>

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

[[noreturn]] void undefined(const char* op) {
  throw Error(ErrorCode::ParameterRange,
              std::string("undefined extended-rational operation: ") + op);
}

BigInt parse_int(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw Error(ErrorCode::Parse, "malformed number '" + std::string(whole) + "'");
  }
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::Parse,
                  "malformed number '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(digits));
}

}  // namespace

ExtRational::ExtRational(long long num, long long den) {
  if (den == 0) undefined("zero denominator");
  value_ = Rational(num, den);
}

ExtRational ExtRational::infinity() {
  ExtRational x;
  x.infinite_ = true;
  return x;
}

ExtRational ExtRational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "∞") {
    return infinity();
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(s.substr(0, slash), text);
    BigInt den = parse_int(s.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    }
    r = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    BigInt whole = ip.empty() ? BigInt(0) : parse_int(ip, text);
    BigInt frac = fp.empty() ? BigInt(0) : parse_int(fp, text);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    r = Rational(whole * scale + frac, scale);
  } else {
    r = Rational(parse_int(s, text));
  }
  return ExtRational(negative ? Rational(-r) : r);
}

bool ExtRational::is_integer() const {
  return !infinite_ && boost::multiprecision::denominator(value_) == 1;
}

const Rational& ExtRational::value() const {
  if (infinite_) undefined("finite value of inf");
  return value_;
}

double ExtRational::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return static_cast<double>(value_);
}

std::string ExtRational::str() const {
  if (infinite_) return "inf";
  return value_.str();
}

ExtRational ExtRational::reciprocal() const {
  if (infinite_) return ExtRational(0);
  if (value_ == 0) undefined("1/0");
  return ExtRational(Rational(1) / value_);
}

ExtRational ExtRational::operator-() const {
  if (infinite_) undefined("-inf");
  return ExtRational(Rational(-value_));
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return ExtRational::infinity();
  return ExtRational(Rational(a.value_ + b.value_));
}

ExtRational operator-(const ExtRational& a, const ExtRational& b) {
  if (b.infinite_) undefined("x - inf");
  if (a.infinite_) return a;
  return ExtRational(Rational(a.value_ - b.value_));
}

ExtRational operator*(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) {
    const ExtRational& other = a.infinite_ ? b : a;
    if (other.infinite_ || other.value_ > 0) return ExtRational::infinity();
    undefined("inf * non-positive");
  }
  return ExtRational(Rational(a.value_ * b.value_));
}

ExtRational operator/(const ExtRational& a, const ExtRational& b) {
  return a * b.reciprocal();
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ExtRational& x) {
  return os << x.str();
}

ExtRational pos_part(const ExtRational& x) {
  return x > ExtRational(0) ? x : ExtRational(0);
}

ExtRational abs(const ExtRational& x) {
  return x < ExtRational(0) ? -x : x;
}

ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }
ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

ExtRational dim_over(int d, const ExtRational& p) {
  return ExtRational(d) * p.reciprocal();
}

ExtRational deficiency(const ExtRational& p1, const ExtRational& p2, int d) {
  if (p1 < ExtRational(1) || p2 < ExtRational(1)) {
    throw Error(ErrorCode::ParameterRange,
                "integration index outside [1, inf]: p1=" + p1.str() + ", p2=" + p2.str());
  }
  if (d < 1) throw Error(ErrorCode::ParameterRange, "dimension must be positive");
  const ExtRational half_d(d, 2);
  return pos_part(dim_over(d, p1) - half_d) + pos_part(half_d - dim_over(d, p2));
}

}  // namespace sandwich
