#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "dkit/errors.hpp"

namespace dkit {

/// Exact arbitrary-precision rational scalar. All arithmetic in the library
/// bottoms out here; there is no floating point anywhere.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
  require(den != 0, errc::zero_division, "rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses the external "p/q" form: optional sign, decimal digits, optional
/// "/q" with positive q. Anything else is a ParseError.
inline Rational parse_rational(std::string_view text) {
  auto is_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  std::string_view num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
    num_digits.remove_prefix(1);
  require(is_digits(num_digits) && is_digits(den), errc::parse_error,
          "bad rational literal '" + std::string(text) + "'");
  Rational r(std::string(num) + "/" + std::string(den), 10);
  require(r.get_den() != 0, errc::zero_division,
          "zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

/// Emits the canonical external form: "p" when the denominator is 1,
/// otherwise "p/q" with q > 0 and gcd(p, q) = 1.
inline std::string format_rational(const Rational& r) { return r.get_str(10); }

}  // namespace dkit
