#pragma once

#include <beepmac/core.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

namespace beepmac {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// A probability held exactly as a rational, with a cached double for the
/// hot paths (seeded fault draws). Decimal strings parse exactly: "0.3" is 3/10.
class Probability {
 public:
  Probability() = default;
  explicit Probability(Rational value) : exact_(std::move(value)), approx_(exact_.convert_to<double>()) {}

  /// Accepts "0.25", "1/4", "2.5e-1".
  static Probability parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      const BigInt num = parse_decimal(text.substr(0, slash)).exact_.convert_to<BigInt>();
      const BigInt den = parse_decimal(text.substr(slash + 1)).exact_.convert_to<BigInt>();
      if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
      return Probability(Rational(num, den));
    }
    return parse_decimal(text);
  }

  const Rational& exact() const noexcept { return exact_; }
  double value() const noexcept { return approx_; }

  /// Canonical "num/den" rendering (integers render without denominator).
  std::string str() const { return render(exact_); }

  static std::string render(const Rational& r) {
    std::string s = boost::multiprecision::numerator(r).str();
    const BigInt den = boost::multiprecision::denominator(r);
    if (den != 1) s += "/" + den.str();
    return s;
  }

  bool in_open_unit_interval() const { return exact_ > 0 && exact_ < 1; }

  friend bool operator==(const Probability& a, const Probability& b) { return a.exact_ == b.exact_; }

 private:
  static Probability parse_decimal(std::string_view text) {
    const std::string original(text);
    auto fail = [&] { return DomainError("not a decimal number: '" + original + "'"); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw fail();

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    BigInt mantissa = 0;
    long scale = 0;
    bool seen_digit = false, seen_point = false;
    std::size_t pos = 0;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        mantissa = mantissa * 10 + (c - '0');
        if (seen_point) --scale;
        seen_digit = true;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) throw fail();
    if (pos < text.size()) {
      if (text[pos] != 'e' && text[pos] != 'E') throw fail();
      std::string_view exp = text.substr(pos + 1);
      bool exp_negative = false;
      if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
        exp_negative = exp.front() == '-';
        exp.remove_prefix(1);
      }
      if (exp.empty() || exp.size() > 6) throw fail();
      long e = 0;
      for (char c : exp) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
        e = e * 10 + (c - '0');
      }
      scale += exp_negative ? -e : e;
    }
    Rational r(mantissa);
    const BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    r = scale < 0 ? r / Rational(ten_pow) : r * Rational(ten_pow);
    return Probability(negative ? Rational(-r) : r);
  }

  Rational exact_{0};
  double approx_ = 0.0;
};

}  // namespace beepmac
