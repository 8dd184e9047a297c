#include <doctest.h>

#include <nlohmann/json.hpp>

#include "addmart/exact_polynomial.hpp"
#include "addmart/rng.hpp"

using addmart::ExactPolynomial;
using addmart::Exponents;
using addmart::Rational;

namespace {

ExactPolynomial x(unsigned i) { return ExactPolynomial::variable(i); }

ExactPolynomial random_polynomial(addmart::RandomStream& rng) {
  ExactPolynomial p;
  const unsigned terms = 1 + static_cast<unsigned>(rng.next_u64() % 8);
  for (unsigned t = 0; t < terms; ++t) {
    Exponents e(1 + rng.next_u64() % 6, 0);
    for (auto& exp : e) exp = static_cast<unsigned>(rng.next_u64() % 5);
    const long long num = static_cast<long long>(rng.next_u64() % 101) - 50;
    const long long den = 1 + static_cast<long long>(rng.next_u64() % 9);
    p += ExactPolynomial::monomial(e, Rational(num, den));
  }
  return p;
}

}  // namespace

TEST_CASE("canonical term storage") {
  // Zero coefficients are never stored and trailing zeros are trimmed.
  ExactPolynomial p = ExactPolynomial::monomial({1, 0, 0}, 2);
  ExactPolynomial q = ExactPolynomial::monomial({1}, 2);
  CHECK(p == q);
  CHECK(p.term_count() == 1);
  CHECK(p.variable_count() == 1);

  ExactPolynomial z = ExactPolynomial::monomial({2}, 1) + ExactPolynomial::monomial({2}, -1);
  CHECK(z.is_zero());
  CHECK(z.term_count() == 0);
  CHECK(z == ExactPolynomial());
}

TEST_CASE("ring arithmetic") {
  const ExactPolynomial sum = x(1) + x(2);
  const ExactPolynomial square = sum * sum;
  ExactPolynomial expected = ExactPolynomial::monomial({2}, 1);
  expected += ExactPolynomial::monomial({1, 1}, 2);
  expected += ExactPolynomial::monomial({0, 2}, 1);
  CHECK(square == expected);

  CHECK((square - square).is_zero());
  CHECK(square.pow(0) == ExactPolynomial::constant(1));
  CHECK(square.pow(2) == square * square);
  CHECK((square * Rational(0)).is_zero());
  CHECK(-(-square) == square);
}

TEST_CASE("substitution") {
  // x1 -> x1 + y (y = x2) in x1^2.
  const ExactPolynomial shifted = x(1).pow(2).substitute(1, x(1) + x(2));
  CHECK(shifted == x(1).pow(2) + Rational(2) * x(1) * x(2) + x(2).pow(2));

  // Substituting x1 -> x2 into x1 + x2 must not touch the fresh x2 twice.
  CHECK((x(1) + x(2)).substitute(1, x(2)) == Rational(2) * x(2));

  // Substituting the zero polynomial kills all terms using the variable.
  const ExactPolynomial p = x(1) * x(2) + x(2).pow(2);
  CHECK(p.substitute(1, ExactPolynomial()) == x(2).pow(2));

  // Absent variable: substitution is a no-op.
  CHECK(p.substitute(7, x(1)) == p);
}

TEST_CASE("partial derivative") {
  const ExactPolynomial p = x(1).pow(3) * x(2) + Rational(5) * x(2);
  CHECK(p.partial_derivative(1) == Rational(3) * x(1).pow(2) * x(2));
  CHECK(p.partial_derivative(2) == x(1).pow(3) + ExactPolynomial::constant(5));
  CHECK(p.partial_derivative(3).is_zero());
}

TEST_CASE("exact and floating evaluation") {
  const ExactPolynomial p = x(1).pow(2) + Rational(3) * x(1) * x(2) + x(3);
  const std::vector<Rational> point = {Rational(1, 2), Rational(-2), Rational(7)};
  CHECK(p.evaluate(std::span<const Rational>(point)) == Rational(1, 4) - 3 + 7);

  const std::vector<double> dpoint = {0.5, -2.0, 7.0};
  CHECK(p.evaluate(std::span<const double>(dpoint)) == doctest::Approx(4.25).epsilon(1e-15));

  const std::vector<Rational> short_point = {Rational(1)};
  CHECK_THROWS_AS((void)p.evaluate(std::span<const Rational>(short_point)),
                  std::invalid_argument);
}

TEST_CASE("compiled evaluation matches") {
  addmart::RandomStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const ExactPolynomial p = random_polynomial(rng);
    const auto compiled = p.compile();
    std::vector<double> point(6);
    for (auto& v : point) v = rng.uniform01() * 4.0 - 2.0;
    const double direct = p.evaluate(std::span<const double>(point));
    CHECK(compiled(point) == direct);
  }
}

TEST_CASE("string rendering") {
  CHECK(ExactPolynomial().str() == "0");
  CHECK(ExactPolynomial::constant(Rational(-3, 2)).str() == "-3/2");
  const ExactPolynomial gamma3 = x(1).pow(3) + Rational(3) * x(1) * x(2) + x(3);
  CHECK(gamma3.str() == "x1^3 + 3 x1 x2 + x3");
  CHECK((x(1) - x(2)).str({"y", "a"}) == "y - a");
  CHECK((Rational(1, 2) * x(1).pow(2)).str() == "1/2 x1^2");
}

TEST_CASE("canonical JSON form") {
  const ExactPolynomial gamma2 = x(1).pow(2) + x(2);
  const nlohmann::json j = gamma2.to_json();
  CHECK(j.at("vars") == 2);
  // Ascending lexicographic exponent order: [0,1] before [2,0].
  CHECK(j.at("terms")[0].at("exp") == nlohmann::json::array({0, 1}));
  CHECK(j.at("terms")[0].at("coef") == "1");
  CHECK(j.at("terms")[1].at("exp") == nlohmann::json::array({2, 0}));
  CHECK(ExactPolynomial::from_json(j) == gamma2);
}

TEST_CASE("JSON round trip is exact on random polynomials") {
  addmart::RandomStream rng(20260810);
  for (int rep = 0; rep < 50; ++rep) {
    const ExactPolynomial p = random_polynomial(rng);
    const ExactPolynomial back = ExactPolynomial::from_json(p.to_json());
    CHECK(back == p);
    // Serialization is canonical: dumping twice gives identical bytes.
    CHECK(p.to_json().dump() == back.to_json().dump());
  }
}
