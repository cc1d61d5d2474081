#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bkr {

// Exact rational arithmetic for every verification path. No floating point,
// no tolerances: inequality checks compare rationals exactly.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" with optional sign; denominator must be positive.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] {
    throw std::invalid_argument("invalid rational: '" + std::string(text) + "'");
  };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(BigInt(std::string(text)));
    }
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    if (den <= 0) bad();
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return {};  // unreachable
}

/// Renders as "p/q", or "p" when the denominator is 1.
inline std::string format_rational(const Rational& value) {
  std::string out = numerator(value).str();
  if (denominator(value) != 1) {
    out += '/';
    out += denominator(value).str();
  }
  return out;
}

/// 2^exponent as an exact integer.
inline BigInt pow2(unsigned exponent) { return BigInt(1) << exponent; }

}  // namespace bkr
