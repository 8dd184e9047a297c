#include "addmart/numeric.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace addmart {

Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int result = 1;
  for (unsigned i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;  // exact: product of j consecutive integers divides by j!
  }
  return result;
}

Int factorial(unsigned n) {
  Int result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational(Int(text));
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") {
    throw std::invalid_argument("malformed decimal literal: " + text);
  }
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed decimal literal: " + text);
    }
  }
  Int denom = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) denom *= 10;
  return Rational(Int(digits), denom);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace addmart
