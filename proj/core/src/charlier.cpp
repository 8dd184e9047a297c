#include "addmart/charlier.hpp"

#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "addmart/kendall.hpp"

namespace addmart {

LambdaTable lambda_table(unsigned n) {
  if (n < 1) throw std::domain_error("lambda_table: order must be >= 1");
  // Build tables 1..n; table m depends on tables k..m-1 through column k.
  std::vector<std::vector<Int>> tables(n + 1);
  for (unsigned m = 1; m <= n; ++m) {
    auto& table = tables[m];
    table.assign(m, 0);
    table[0] = 1;
    for (unsigned k = 1; k < m; ++k) {
      Int sum = 0;
      for (unsigned j = k; j <= m - 1; ++j) sum += binomial(m, j) * tables[j][k - 1];
      table[k] = sum;
    }
  }
  return LambdaTable{n, std::move(tables[n])};
}

const ExactPolynomial& charlier_poly(unsigned n) {
  static std::mutex mutex;
  static std::deque<ExactPolynomial> cache;  // cache[k] = C_k; append-only

  std::scoped_lock lock(mutex);
  if (cache.empty()) {
    cache.push_back(ExactPolynomial::constant(1));
    cache.push_back(ExactPolynomial::variable(1) - ExactPolynomial::variable(2));
  }
  while (cache.size() <= n) {
    const unsigned k = static_cast<unsigned>(cache.size()) - 1;
    const ExactPolynomial lead = ExactPolynomial::variable(1) -
                                 ExactPolynomial::constant(Rational(k)) -
                                 ExactPolynomial::variable(2);
    ExactPolynomial next = lead * cache[k] -
                           Rational(k) * ExactPolynomial::variable(2) * cache[k - 1];
    cache.push_back(std::move(next));
  }
  return cache[n];
}

double charlier_value(unsigned n, double y, double a) {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = y - a;
  for (unsigned k = 1; k < n; ++k) {
    const double next = (y - k - a) * cur - k * a * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// g_n(x, a) = Gamma_n(x, -a, -a, ..., -a) with x = x_1, a = x_2. The
// cumulant slots are first routed through a fresh variable so that
// substituting into x_2 cannot collide with the x_2 already produced.
ExactPolynomial harmonic_symbol(unsigned n) {
  const unsigned fresh = n + 1;
  const ExactPolynomial minus_a = -ExactPolynomial::variable(fresh);
  ExactPolynomial g = gamma(n);
  for (unsigned i = 2; i <= n; ++i) g = g.substitute(i, minus_a);
  return g.substitute(fresh, ExactPolynomial::variable(2));
}

}  // namespace

ExpansionReport expansion_check(unsigned n) {
  if (n < 1) throw std::domain_error("expansion_check: order must be >= 1");
  const ExactPolynomial g = harmonic_symbol(n);
  const LambdaTable lambda = lambda_table(n);

  const ExactPolynomial raw_argument =
      ExactPolynomial::variable(1) + ExactPolynomial::variable(2);  // x + a

  ExactPolynomial paper_literal_rhs;
  ExactPolynomial raw_weighted_rhs;
  for (unsigned j = 1; j <= n; ++j) {
    const ExactPolynomial& c_j = charlier_poly(j);
    paper_literal_rhs += Rational(lambda.entries[j - 1]) * c_j;
    raw_weighted_rhs += Rational(lambda.entries[j - 1], factorial(j)) *
                        c_j.substitute(1, raw_argument);
  }

  ExpansionReport report;
  report.order = n;
  const ExactPolynomial paper_diff = g - paper_literal_rhs;
  const ExactPolynomial raw_diff = g - raw_weighted_rhs;
  report.paper_literal_holds = paper_diff.is_zero();
  report.raw_argument_weighted_holds = raw_diff.is_zero();
  report.paper_literal_difference_terms = paper_diff.term_count();
  report.raw_argument_weighted_difference_terms = raw_diff.term_count();
  return report;
}

bool expansion_holds(unsigned n, ExpansionConvention convention) {
  const ExpansionReport report = expansion_check(n);
  return convention == ExpansionConvention::PaperLiteral ? report.paper_literal_holds
                                                         : report.raw_argument_weighted_holds;
}

nlohmann::json ExpansionReport::to_json() const {
  return {{"order", order},
          {"paper_literal", {{"holds", paper_literal_holds},
                             {"difference_terms", paper_literal_difference_terms}}},
          {"raw_argument_weighted",
           {{"holds", raw_argument_weighted_holds},
            {"difference_terms", raw_argument_weighted_difference_terms}}}};
}

StatisticFactory charlier_count_statistic(unsigned n) {
  return [n](const ProcessSpec& spec, std::span<const double> grid) -> GridStatistic {
    if (spec.atoms().size() != 1 || spec.atoms()[0].size != 1.0) {
      throw std::invalid_argument(
          "charlier count statistic requires a single atom of size 1 (counting spec)");
    }
    auto intensity = std::make_shared<std::vector<double>>(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      (*intensity)[k] = spec.atoms()[0].intensity.value(grid[k]);
    }
    return [n, intensity](const PathRecord& path, std::size_t k) {
      double count = 0.0;
      for (const auto& jump : path.jumps) {
        if (jump.time > path.grid[k]) break;
        count += 1.0;
      }
      return charlier_value(n, count, (*intensity)[k]);
    };
  };
}

MartingaleReport charlier_martingale_test(const ProcessSpec& spec, unsigned n,
                                          const IncrementTestConfig& config) {
  return statistic_increment_test("Charlier C" + std::to_string(n) + "(N_t, Lambda(t))", n, spec,
                                  charlier_count_statistic(n), config);
}

}  // namespace addmart
