#include "addmart/kendall.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace addmart {

const ExactPolynomial& gamma(unsigned n, unsigned cap) {
  if (n > cap) {
    throw std::domain_error("gamma: order " + std::to_string(n) +
                            " exceeds the configured cap " + std::to_string(cap));
  }
  static std::mutex mutex;
  static std::deque<ExactPolynomial> cache;  // cache[i] = Gamma_i; append-only

  std::scoped_lock lock(mutex);
  if (cache.empty()) cache.push_back(ExactPolynomial::constant(1));
  while (cache.size() <= n) {
    const unsigned m = static_cast<unsigned>(cache.size()) - 1;  // building Gamma_{m+1}
    ExactPolynomial next;
    for (unsigned j = 0; j <= m; ++j) {
      next += cache[j] * ExactPolynomial::variable(m + 1 - j) * Rational(binomial(m, j));
    }
    cache.push_back(std::move(next));
  }
  return cache[n];
}

namespace {

// Enumerates set partitions of {1..n} in restricted-growth order,
// maintaining the block-size profile incrementally. profile[s-1] counts
// blocks of size s; each leaf contributes one monomial prod_s x_s^profile.
void enumerate_partitions(unsigned n, unsigned element, std::vector<unsigned>& block_sizes,
                          std::vector<unsigned>& profile,
                          std::map<Exponents, std::uint64_t>& counts) {
  if (element == n) {
    Exponents key = profile;
    while (!key.empty() && key.back() == 0) key.pop_back();
    ++counts[key];
    return;
  }
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    const unsigned s = block_sizes[b];
    --profile[s - 1];
    ++profile[s];
    ++block_sizes[b];
    enumerate_partitions(n, element + 1, block_sizes, profile, counts);
    --block_sizes[b];
    --profile[s];
    ++profile[s - 1];
  }
  block_sizes.push_back(1);
  ++profile[0];
  enumerate_partitions(n, element + 1, block_sizes, profile, counts);
  --profile[0];
  block_sizes.pop_back();
}

}  // namespace

ExactPolynomial gamma_partition_oracle(unsigned n, unsigned cap) {
  const unsigned effective_cap = std::min(cap, kPartitionOracleCeiling);
  if (n > effective_cap) {
    throw std::domain_error("gamma_partition_oracle: oracle cap exceeded (order " +
                            std::to_string(n) + ", cap " + std::to_string(effective_cap) + ")");
  }
  if (n == 0) return ExactPolynomial::constant(1);
  std::map<Exponents, std::uint64_t> counts;
  std::vector<unsigned> block_sizes;
  std::vector<unsigned> profile(n, 0);
  block_sizes.reserve(n);
  enumerate_partitions(n, 0, block_sizes, profile, counts);
  ExactPolynomial out;
  for (const auto& [exps, count] : counts) {
    out += ExactPolynomial::monomial(exps, Rational(count));
  }
  return out;
}

MomentSequence moments_from_cumulants(const CumulantSequence& cumulants) {
  if (cumulants.empty()) throw std::invalid_argument("cumulant sequence must be non-empty");
  MomentSequence moments(cumulants.size());
  for (std::size_t i = 1; i <= cumulants.size(); ++i) {
    moments[i - 1] = gamma(static_cast<unsigned>(i))
                         .evaluate(std::span<const Rational>(cumulants.data(), i));
  }
  return moments;
}

CumulantSequence cumulants_from_moments(const MomentSequence& moments) {
  if (moments.empty()) throw std::invalid_argument("moment sequence must be non-empty");
  CumulantSequence cumulants(moments.size());
  cumulants[0] = moments[0];
  for (std::size_t m = 1; m < moments.size(); ++m) {
    // kappa_{m+1} = mu_{m+1} - sum_{j=1..m} C(m,j) mu_j kappa_{m+1-j}
    Rational value = moments[m];
    for (std::size_t j = 1; j <= m; ++j) {
      value -= Rational(binomial(static_cast<unsigned>(m), static_cast<unsigned>(j))) *
               moments[j - 1] * cumulants[m - j];
    }
    cumulants[m] = value;
  }
  return cumulants;
}

ExactPolynomial gamma_partial(unsigned n, unsigned j) {
  if (j < 1 || j > n) {
    throw std::domain_error("gamma_partial: j must lie in 1.." + std::to_string(n));
  }
  return gamma(n).partial_derivative(j);
}

ExactPolynomial gamma_shift_expand(unsigned n) {
  if (n < 1) throw std::domain_error("gamma_shift_expand: n must be positive");
  const unsigned y = n + 1;
  const ExactPolynomial shifted_x1 = ExactPolynomial::variable(1) + ExactPolynomial::variable(y);
  const ExactPolynomial lhs = gamma(n).substitute(1, shifted_x1);

  ExactPolynomial rhs;
  for (unsigned j = 0; j <= n; ++j) {
    rhs += gamma(n - j) * ExactPolynomial::variable(y).pow(j) * Rational(binomial(n, j));
  }
  if (lhs != rhs) {
    throw std::logic_error("gamma_shift_expand: substitution and binomial sum disagree at n = " +
                           std::to_string(n));
  }
  return lhs;
}

std::vector<ExactPolynomial> gamma_x1_coefficients(unsigned n) {
  std::vector<ExactPolynomial> coefficients(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    coefficients[j] =
        gamma(n - j).substitute(1, ExactPolynomial()) * Rational(binomial(n, j));
  }
  return coefficients;
}

}  // namespace addmart
