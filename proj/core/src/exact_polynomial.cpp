#include "addmart/exact_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace addmart {

void ExactPolynomial::trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

void ExactPolynomial::add_term(Exponents exponents, const Rational& coefficient) {
  if (coefficient == 0) return;
  trim(exponents);
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_.emplace(std::move(exponents), coefficient);
  } else {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

ExactPolynomial ExactPolynomial::constant(Rational value) {
  ExactPolynomial p;
  p.add_term({}, value);
  return p;
}

ExactPolynomial ExactPolynomial::variable(unsigned index) {
  if (index == 0) throw std::invalid_argument("variable indices are 1-based");
  Exponents e(index, 0);
  e[index - 1] = 1;
  return monomial(std::move(e), 1);
}

ExactPolynomial ExactPolynomial::monomial(Exponents exponents, Rational coefficient) {
  ExactPolynomial p;
  p.add_term(std::move(exponents), coefficient);
  return p;
}

unsigned ExactPolynomial::variable_count() const {
  std::size_t width = 0;
  for (const auto& [e, c] : terms_) width = std::max(width, e.size());
  return static_cast<unsigned>(width);
}

unsigned ExactPolynomial::degree() const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

Rational ExactPolynomial::coefficient(const Exponents& exponents) const {
  Exponents key = exponents;
  trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

ExactPolynomial& ExactPolynomial::operator+=(const ExactPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

ExactPolynomial& ExactPolynomial::operator-=(const ExactPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

ExactPolynomial ExactPolynomial::operator-() const {
  ExactPolynomial out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

ExactPolynomial& ExactPolynomial::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

ExactPolynomial operator*(const ExactPolynomial& lhs, const ExactPolynomial& rhs) {
  ExactPolynomial out;
  for (const auto& [ea, ca] : lhs.terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.add_term(std::move(e), ca * cb);
    }
  }
  return out;
}

ExactPolynomial& ExactPolynomial::operator*=(const ExactPolynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

ExactPolynomial ExactPolynomial::pow(unsigned exponent) const {
  ExactPolynomial result = constant(1);
  for (unsigned i = 0; i < exponent; ++i) result *= *this;
  return result;
}

ExactPolynomial ExactPolynomial::substitute(unsigned index, const ExactPolynomial& value) const {
  if (index == 0) throw std::invalid_argument("variable indices are 1-based");
  ExactPolynomial out;
  for (const auto& [e, c] : terms_) {
    const unsigned exp = index <= e.size() ? e[index - 1] : 0;
    Exponents rest = e;
    if (index <= rest.size()) rest[index - 1] = 0;
    ExactPolynomial term = monomial(std::move(rest), c);
    if (exp > 0) term *= value.pow(exp);
    out += term;
  }
  return out;
}

ExactPolynomial ExactPolynomial::partial_derivative(unsigned index) const {
  if (index == 0) throw std::invalid_argument("variable indices are 1-based");
  ExactPolynomial out;
  for (const auto& [e, c] : terms_) {
    const unsigned exp = index <= e.size() ? e[index - 1] : 0;
    if (exp == 0) continue;
    Exponents d = e;
    d[index - 1] -= 1;
    out.add_term(std::move(d), c * exp);
  }
  return out;
}

Rational ExactPolynomial::evaluate(std::span<const Rational> point) const {
  if (variable_count() > point.size()) {
    throw std::invalid_argument("evaluation point has fewer entries than variables used");
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

double ExactPolynomial::Compiled::operator()(std::span<const double> point) const {
  double sum = 0.0;
  for (const auto& term : terms) {
    double value = term.coefficient;
    for (const auto& [var, exp] : term.powers) {
      double base = point[var];
      for (unsigned k = 0; k < exp; ++k) value *= base;
    }
    sum += value;
  }
  return sum;
}

ExactPolynomial::Compiled ExactPolynomial::compile() const {
  Compiled out;
  out.terms.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    Compiled::Term term;
    term.coefficient = to_double(c);
    for (unsigned i = 0; i < e.size(); ++i) {
      if (e[i] > 0) term.powers.emplace_back(i, e[i]);
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

double ExactPolynomial::evaluate(std::span<const double> point) const {
  if (variable_count() > point.size()) {
    throw std::invalid_argument("evaluation point has fewer entries than variables used");
  }
  return compile()(point);
}

namespace {

std::string default_name(unsigned index_zero_based) {
  return "x" + std::to_string(index_zero_based + 1);
}

}  // namespace

std::string ExactPolynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Descending lexicographic exponent order reads leading term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = c < 0;
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    const Rational mag = negative ? Rational(-c) : c;
    const bool has_vars = !e.empty();
    if (!has_vars || mag != 1) {
      os << rational_to_string(mag);
      if (has_vars) os << " ";
    }
    bool first_var = true;
    for (unsigned i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first_var) os << " ";
      first_var = false;
      os << (i < names.size() ? names[i] : default_name(i));
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

std::string ExactPolynomial::str() const { return str({}); }

nlohmann::json ExactPolynomial::to_json() const {
  const unsigned vars = variable_count();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : terms_) {
    Exponents padded = e;
    padded.resize(vars, 0);
    terms.push_back({{"exp", padded}, {"coef", rational_to_string(c)}});
  }
  return {{"vars", vars}, {"terms", std::move(terms)}};
}

ExactPolynomial ExactPolynomial::from_json(const nlohmann::json& j) {
  ExactPolynomial p;
  for (const auto& term : j.at("terms")) {
    Exponents e = term.at("exp").get<Exponents>();
    p.add_term(std::move(e), parse_rational(term.at("coef").get<std::string>()));
  }
  return p;
}

}  // namespace addmart
