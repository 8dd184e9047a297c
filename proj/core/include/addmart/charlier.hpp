#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "addmart/exact_polynomial.hpp"
#include "addmart/martingale_lab.hpp"

namespace addmart {

/// Integer coefficient table lambda^(n)_k, k = 1..n, from the recurrence
///   lambda^(n)_1 = 1,
///   lambda^(n)_{k+1} = sum_{j=k..n-1} C(n,j) lambda^(j)_k.
struct LambdaTable {
  unsigned order = 0;
  std::vector<Int> entries;  // entries[k-1] = lambda^(n)_k
};

LambdaTable lambda_table(unsigned n);

/// Monic Charlier polynomial in (y, a) = (x_1, x_2), built by the
/// three-term recurrence
///   C_0 = 1, C_1 = y - a, C_{k+1} = (y - k - a) C_k - k a C_{k-1},
/// equivalently the coefficients of w^n/n! in exp(-wa) (1+w)^y.
/// Memoized; the reference stays valid and is safe for concurrent reads.
const ExactPolynomial& charlier_poly(unsigned n);

/// Numeric evaluation via the same three-term recurrence.
double charlier_value(unsigned n, double y, double a);

/// The two readings of the expansion of g_n = Gamma_n(x, -a, ..., -a) in
/// Charlier polynomials, with a one free symbol standing for the
/// cumulative intensity:
///   paper-literal:          g_n =? sum_j lambda^(n)_j C_j(x, a)
///   raw-argument-weighted:  g_n =? sum_j lambda^(n)_j C_j(x + a, a) / j!
enum class ExpansionConvention { PaperLiteral, RawArgumentWeighted };

/// Evaluates both conventions as exact polynomial identities in (x, a) and
/// reports them side by side; callers decide what to make of the verdicts.
struct ExpansionReport {
  unsigned order = 0;
  bool paper_literal_holds = false;
  bool raw_argument_weighted_holds = false;
  /// Term counts of (lhs - rhs) per convention; zero means identical.
  std::size_t paper_literal_difference_terms = 0;
  std::size_t raw_argument_weighted_difference_terms = 0;
  nlohmann::json to_json() const;
};

ExpansionReport expansion_check(unsigned n);
bool expansion_holds(unsigned n, ExpansionConvention convention);

/// Martingale cross-check statistic for a single-atom counting spec:
/// the Charlier polynomial evaluated at the raw jump count with
/// a = Lambda(t). Requires a spec with exactly one atom of size 1.
StatisticFactory charlier_count_statistic(unsigned n);

MartingaleReport charlier_martingale_test(const ProcessSpec& spec, unsigned n,
                                          const IncrementTestConfig& config);

}  // namespace addmart
