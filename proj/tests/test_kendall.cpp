#include <doctest.h>

#include <vector>

#include "addmart/kendall.hpp"
#include "addmart/rng.hpp"

using addmart::CumulantSequence;
using addmart::ExactPolynomial;
using addmart::Exponents;
using addmart::gamma_partition_oracle;
using addmart::Int;
using addmart::MomentSequence;
using addmart::Rational;

namespace {

ExactPolynomial x(unsigned i) { return ExactPolynomial::variable(i); }

// Qualified wrapper; a bare `gamma` would collide with the libm function.
const ExactPolynomial& Gamma(unsigned n, unsigned cap = addmart::kGammaOrderCap) {
  return addmart::gamma(n, cap);
}

// Independent Bell numbers through the binomial recurrence
// B_{n+1} = sum_k C(n,k) B_k.
Int bell_number(unsigned n) {
  std::vector<Int> bell{1};
  for (unsigned m = 0; m < n; ++m) {
    Int next = 0;
    for (unsigned k = 0; k <= m; ++k) next += addmart::binomial(m, k) * bell[k];
    bell.push_back(next);
  }
  return bell[n];
}

// Direct count of set partitions by enumerating restricted-growth strings;
// shares no code with the oracle used in the library.
std::uint64_t count_partitions(unsigned n, unsigned element = 0, unsigned blocks = 0) {
  if (element == n) return 1;
  std::uint64_t total = blocks * count_partitions(n, element + 1, blocks);
  total += count_partitions(n, element + 1, blocks + 1);
  return total;
}

// Perfect matchings of an n-set: (n-1)!! for even n.
Int double_factorial_odd(unsigned n) {
  Int result = 1;
  for (unsigned k = n; k > 1; k -= 2) result *= k - 1;
  return result;
}

}  // namespace

TEST_CASE("gamma base cases and paper tables") {
  CHECK(Gamma(0) == ExactPolynomial::constant(1));
  CHECK(Gamma(1) == x(1));
  CHECK(Gamma(2) == x(1).pow(2) + x(2));
  CHECK(Gamma(3) == x(1).pow(3) + Rational(3) * x(1) * x(2) + x(3));

  ExactPolynomial gamma4 = x(1).pow(4);
  gamma4 += Rational(6) * x(1).pow(2) * x(2);
  gamma4 += Rational(3) * x(2).pow(2);
  gamma4 += Rational(4) * x(1) * x(3);
  gamma4 += x(4);
  CHECK(Gamma(4) == gamma4);
}

TEST_CASE("gamma cap error names the cap") {
  CHECK_THROWS_WITH_AS((void)Gamma(25), doctest::Contains("cap 24"), std::domain_error);
  CHECK_NOTHROW((void)Gamma(10, 10));
  CHECK_THROWS_AS((void)Gamma(11, 10), std::domain_error);
}

TEST_CASE("partition oracle matches printed low orders") {
  CHECK(gamma_partition_oracle(0) == ExactPolynomial::constant(1));
  CHECK(gamma_partition_oracle(1) == x(1));
  CHECK(gamma_partition_oracle(3) == x(1).pow(3) + Rational(3) * x(1) * x(2) + x(3));

  // Bell evaluation: all variables set to one counts set partitions.
  const std::vector<Rational> ones(5, Rational(1));
  CHECK(gamma_partition_oracle(5).evaluate(std::span<const Rational>(ones)) == Rational(52));

  CHECK_THROWS_WITH_AS((void)gamma_partition_oracle(13), doctest::Contains("oracle cap"),
                       std::domain_error);
  CHECK_THROWS_AS((void)gamma_partition_oracle(16, 16), std::domain_error);
}

TEST_CASE("recurrence equals oracle term-for-term") {
  for (unsigned n = 0; n <= 9; ++n) {
    CAPTURE(n);
    CHECK(Gamma(n) == gamma_partition_oracle(n));
  }
}

TEST_CASE("isobaric grading and positive integer coefficients") {
  for (unsigned n = 1; n <= 12; ++n) {
    for (const auto& [e, c] : Gamma(n).terms()) {
      unsigned weight = 0;
      for (std::size_t i = 0; i < e.size(); ++i) weight += static_cast<unsigned>(i + 1) * e[i];
      CHECK(weight == n);
      CHECK(denominator(c) == 1);
      CHECK(numerator(c) > 0);
    }
  }
}

TEST_CASE("Bell evaluation against independent counts") {
  for (unsigned n = 1; n <= 10; ++n) {
    const std::vector<Rational> ones(n, Rational(1));
    const Rational value = Gamma(n).evaluate(std::span<const Rational>(ones));
    CHECK(value == Rational(bell_number(n)));
    CHECK(value == Rational(count_partitions(n)));
  }
}

TEST_CASE("Gaussian specialization: only pair partitions survive") {
  const Rational s(3);
  for (unsigned n = 1; n <= 12; ++n) {
    std::vector<Rational> point(n, Rational(0));
    if (n >= 2) point[1] = s;
    const Rational value = Gamma(n).evaluate(std::span<const Rational>(point));
    if (n % 2 == 1) {
      CHECK(value == 0);
    } else {
      Rational expected(double_factorial_odd(n));
      for (unsigned k = 0; k < n / 2; ++k) expected *= s;
      CHECK(value == expected);
    }
  }
}

TEST_CASE("moments from cumulants") {
  CHECK(addmart::moments_from_cumulants({0, 1}) == MomentSequence{0, 1});
  CHECK(addmart::moments_from_cumulants({1, 1, 1}) == MomentSequence{1, 2, 5});
  // Centered Gaussian with variance 2: moments (0, 2, 0, 3*2^2).
  CHECK(addmart::moments_from_cumulants({0, 2, 0, 0}) == MomentSequence{0, 2, 0, 12});
  CHECK_THROWS_AS((void)addmart::moments_from_cumulants({}), std::invalid_argument);
}

TEST_CASE("cumulants from moments") {
  CHECK(addmart::cumulants_from_moments({0, 1}) == CumulantSequence{0, 1});
  CHECK(addmart::cumulants_from_moments({1, 2, 5}) == CumulantSequence{1, 1, 1});
  CHECK(addmart::cumulants_from_moments({0, 1, 0, 3}) == CumulantSequence{0, 1, 0, 0});
}

TEST_CASE("conversion round trip on random exact rationals") {
  addmart::RandomStream rng(42);
  for (int rep = 0; rep < 30; ++rep) {
    CumulantSequence seq(10);
    for (auto& v : seq) {
      const long long num = static_cast<long long>(rng.next_u64() % 41) - 20;
      const long long den = 1 + static_cast<long long>(rng.next_u64() % 20);
      v = Rational(num, den);
    }
    CHECK(addmart::cumulants_from_moments(addmart::moments_from_cumulants(seq)) == seq);
    CHECK(addmart::moments_from_cumulants(addmart::cumulants_from_moments(seq)) == seq);
  }
}

TEST_CASE("partial derivative identity") {
  CHECK(addmart::gamma_partial(3, 3) == ExactPolynomial::constant(1));
  CHECK(addmart::gamma_partial(3, 2) == Rational(3) * x(1));
  CHECK(addmart::gamma_partial(5, 2) == Rational(10) * Gamma(3));
  for (unsigned n = 1; n <= 8; ++n) {
    for (unsigned j = 1; j <= n; ++j) {
      CAPTURE(n);
      CAPTURE(j);
      CHECK(addmart::gamma_partial(n, j) == Rational(addmart::binomial(n, j)) * Gamma(n - j));
    }
  }
  CHECK_THROWS_AS((void)addmart::gamma_partial(3, 4), std::domain_error);
  CHECK_THROWS_AS((void)addmart::gamma_partial(3, 0), std::domain_error);
}

TEST_CASE("shift expansion") {
  // n = 1: x1 + y with y encoded as variable 2.
  CHECK(addmart::gamma_shift_expand(1) == x(1) + x(2));
  // n = 2: x1^2 + 2 x1 y + y^2 + x2 with y as variable 3.
  const ExactPolynomial expected =
      x(1).pow(2) + Rational(2) * x(1) * x(3) + x(3).pow(2) + x(2);
  CHECK(addmart::gamma_shift_expand(2) == expected);
  // Both assembly routes agree (the call itself asserts map equality).
  for (unsigned n = 1; n <= 8; ++n) CHECK_NOTHROW((void)addmart::gamma_shift_expand(n));
}

TEST_CASE("coefficients of gamma in powers of x1") {
  const auto c2 = addmart::gamma_x1_coefficients(2);
  REQUIRE(c2.size() == 3);
  CHECK(c2[0] == x(2));
  CHECK(c2[1].is_zero());
  CHECK(c2[2] == ExactPolynomial::constant(1));

  const auto c3 = addmart::gamma_x1_coefficients(3);
  REQUIRE(c3.size() == 4);
  CHECK(c3[0] == x(3));
  CHECK(c3[1] == Rational(3) * x(2));
  CHECK(c3[2].is_zero());
  CHECK(c3[3] == ExactPolynomial::constant(1));

  for (unsigned n = 0; n <= 10; ++n) {
    const auto coefficients = addmart::gamma_x1_coefficients(n);
    CHECK(coefficients[n] == ExactPolynomial::constant(1));
    ExactPolynomial rebuilt;
    for (unsigned j = 0; j <= n; ++j) rebuilt += coefficients[j] * x(1).pow(j);
    CHECK(rebuilt == Gamma(n));
  }
}
