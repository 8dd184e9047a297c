#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "addmart/numeric.hpp"

namespace addmart {

/// Exponent vector: entry i holds the exponent of the 1-based variable
/// x_{i+1}. Canonical form has no trailing zeros.
using Exponents = std::vector<unsigned>;

/// Sparse multivariate polynomial in indexed variables x_1, x_2, ... with
/// exact rational coefficients. All arithmetic is exact; no term with a
/// zero coefficient is ever stored, so equality of polynomials is equality
/// of the underlying term maps.
class ExactPolynomial {
 public:
  using TermMap = std::map<Exponents, Rational>;

  ExactPolynomial() = default;  // zero

  static ExactPolynomial constant(Rational value);
  static ExactPolynomial variable(unsigned index);  // 1-based
  static ExactPolynomial monomial(Exponents exponents, Rational coefficient);

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Highest variable index appearing in any term (0 for constants).
  unsigned variable_count() const;

  /// Total degree of the highest-degree term (0 for constants and zero).
  unsigned degree() const;

  const TermMap& terms() const { return terms_; }

  Rational coefficient(const Exponents& exponents) const;

  ExactPolynomial& operator+=(const ExactPolynomial& rhs);
  ExactPolynomial& operator-=(const ExactPolynomial& rhs);
  ExactPolynomial& operator*=(const ExactPolynomial& rhs);
  ExactPolynomial& operator*=(const Rational& scalar);
  ExactPolynomial operator-() const;

  friend ExactPolynomial operator+(ExactPolynomial lhs, const ExactPolynomial& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ExactPolynomial operator-(ExactPolynomial lhs, const ExactPolynomial& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend ExactPolynomial operator*(const ExactPolynomial& lhs, const ExactPolynomial& rhs);
  friend ExactPolynomial operator*(ExactPolynomial lhs, const Rational& scalar) {
    lhs *= scalar;
    return lhs;
  }
  friend ExactPolynomial operator*(const Rational& scalar, ExactPolynomial rhs) {
    rhs *= scalar;
    return rhs;
  }

  ExactPolynomial pow(unsigned exponent) const;

  /// Replaces x_index by an arbitrary polynomial, exactly.
  ExactPolynomial substitute(unsigned index, const ExactPolynomial& value) const;

  /// d/dx_index, exactly.
  ExactPolynomial partial_derivative(unsigned index) const;

  /// Exact evaluation; point[i] supplies x_{i+1} and must cover every
  /// variable that occurs.
  Rational evaluate(std::span<const Rational> point) const;

  /// Floating evaluation through the compiled term list.
  double evaluate(std::span<const double> point) const;

  /// Flattened double-precision view for hot evaluation loops.
  struct Compiled {
    struct Term {
      double coefficient;
      std::vector<std::pair<unsigned, unsigned>> powers;  // (0-based var, exp)
    };
    std::vector<Term> terms;
    double operator()(std::span<const double> point) const;
  };
  Compiled compile() const;

  bool operator==(const ExactPolynomial&) const = default;

  /// Human-readable form, e.g. "x1^3 + 3 x1 x2 + x3"; terms in descending
  /// lexicographic exponent order. Optional names override "x<i>".
  std::string str() const;
  std::string str(const std::vector<std::string>& names) const;

  /// Canonical JSON: {"vars": k, "terms": [{"exp": [e_1..e_k],
  /// "coef": "<integer or p/q string>"}, ...]} with terms in ascending
  /// lexicographic exponent order and coefficients as exact strings.
  nlohmann::json to_json() const;
  static ExactPolynomial from_json(const nlohmann::json& j);

 private:
  void add_term(Exponents exponents, const Rational& coefficient);
  static void trim(Exponents& e);

  TermMap terms_;
};

}  // namespace addmart
