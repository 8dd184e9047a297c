#pragma once

#include <vector>

#include "addmart/exact_polynomial.hpp"

namespace addmart {

/// Order cap for the recurrence-built Kendall polynomials. Coefficient
/// counts grow as partition numbers, so the cap keeps accidental huge
/// requests from running away; raise it per call when genuinely needed.
inline constexpr unsigned kGammaOrderCap = 24;

/// Default and hard caps for the set-partition oracle (Bell-number growth;
/// B_15 is already ~1.4e9 leaves).
inline constexpr unsigned kPartitionOracleCap = 12;
inline constexpr unsigned kPartitionOracleCeiling = 15;

/// Kendall polynomial Gamma_n(x_1,...,x_n): the universal polynomial with
/// mu_n = Gamma_n(kappa_1,...,kappa_n). Built by the binomial recurrence
/// Gamma_{n+1} = sum_{j=0..n} C(n,j) Gamma_j x_{n+1-j}, Gamma_0 = 1.
/// Results are memoized; the returned reference stays valid for the
/// lifetime of the process and is safe to read concurrently.
/// Throws std::domain_error when n exceeds `cap`.
const ExactPolynomial& gamma(unsigned n, unsigned cap = kGammaOrderCap);

/// Independent cross-check: Gamma_n assembled by enumerating every set
/// partition of {1..n} and multiplying x_{|B|} over blocks. Deliberately
/// shares no code with gamma(). Throws std::domain_error above the cap.
ExactPolynomial gamma_partition_oracle(unsigned n, unsigned cap = kPartitionOracleCap);

using MomentSequence = std::vector<Rational>;
using CumulantSequence = std::vector<Rational>;

/// mu_i = Gamma_i(kappa_1,...,kappa_i) for each prefix, exactly.
MomentSequence moments_from_cumulants(const CumulantSequence& cumulants);

/// Triangular inversion of the recurrence:
/// kappa_{n+1} = mu_{n+1} - sum_{j=1..n} C(n,j) mu_j kappa_{n+1-j}.
/// Exact inverse of moments_from_cumulants.
CumulantSequence cumulants_from_moments(const MomentSequence& moments);

/// d Gamma_n / d x_j, which equals C(n,j) Gamma_{n-j}; computed by symbolic
/// differentiation so the identity stays a testable statement.
ExactPolynomial gamma_partial(unsigned n, unsigned j);

/// Gamma_n(x_1 + y, x_2,...,x_n) with y encoded as variable index n+1.
/// Assembles the substitution and the binomial sum
/// sum_j C(n,j) Gamma_{n-j} y^j independently and throws std::logic_error
/// if they ever disagree; returns the common value.
ExactPolynomial gamma_shift_expand(unsigned n);

/// Coefficients of Gamma_n read as a polynomial in x_1:
/// c_j = C(n,j) Gamma_{n-j}(0, x_2,...,x_{n-j}) for j = 0..n, so that
/// sum_j c_j x_1^j reproduces Gamma_n and c_n = 1.
std::vector<ExactPolynomial> gamma_x1_coefficients(unsigned n);

}  // namespace addmart
