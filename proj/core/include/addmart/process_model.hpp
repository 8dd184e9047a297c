#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace addmart {

/// Nondecreasing function of time with value(0) = 0, drawn from a small
/// catalog (zero, linear a*t, power a*t^p with p >= 1, piecewise-linear
/// tables) so that the generalized inverse needed for jump-time generation
/// is available in closed form. Construction is permissive; validate()
/// on the owning spec is what certifies monotonicity and continuity.
class MonotoneFunction {
 public:
  enum class Kind { Zero, Linear, Power, PiecewiseLinear };

  MonotoneFunction() : kind_(Kind::Zero) {}

  static MonotoneFunction zero();
  static MonotoneFunction linear(double slope);
  static MonotoneFunction power(double scale, double exponent);
  /// Knots (times[i], values[i]); times nondecreasing starting at 0.
  /// Duplicate times encode a jump (useful to exercise the continuity
  /// validator); beyond the last knot the final slope extrapolates.
  static MonotoneFunction piecewise_linear(std::vector<double> times,
                                           std::vector<double> values);

  Kind kind() const { return kind_; }
  bool is_zero() const;

  double value(double t) const;

  /// Generalized inverse inf{t >= 0 : value(t) >= v}; +infinity when the
  /// level is never reached.
  double inverse(double v) const;

  /// Short tag such as "power(a=1, p=2)" used in validation messages.
  std::string description() const;

  nlohmann::json to_json() const;
  static MonotoneFunction from_json(const nlohmann::json& j);

  bool operator==(const MonotoneFunction&) const = default;

 private:
  Kind kind_;
  double a_ = 0.0;
  double p_ = 1.0;
  std::vector<double> knot_times_;
  std::vector<double> knot_values_;
};

/// One jump species: fixed nonzero size with cumulative intensity
/// Lambda_i(t), i.e. the Levy measure carries mass Lambda_i(t) at `size`
/// up to time t.
struct JumpAtom {
  double size = 1.0;
  MonotoneFunction intensity;
};

/// Centered additive process: Gaussian variance function sigma^2(t) plus a
/// finite list of jump atoms. Jumps are compensated by construction, so
/// E[X_t] = 0 identically. Immutable after construction; concurrent reads
/// are safe.
class ProcessSpec {
 public:
  ProcessSpec(MonotoneFunction gaussian_variance, std::vector<JumpAtom> atoms);

  const MonotoneFunction& gaussian_variance() const { return sigma2_; }
  const std::vector<JumpAtom>& atoms() const { return atoms_; }

  double sigma2(double t) const { return sigma2_.value(t); }

  /// True when the Gaussian part is identically zero.
  bool pure_jump() const { return sigma2_.is_zero(); }

  /// Drift removed by compensation: sum_i size_i * Lambda_i(t).
  double compensator_drift(double t) const;

  nlohmann::json to_json() const;
  static ProcessSpec from_json(const nlohmann::json& j);

 private:
  MonotoneFunction sigma2_;
  std::vector<JumpAtom> atoms_;
};

/// Cumulant function of order n >= 2:
///   F_2(t) = sigma^2(t) + sum_i size_i^2 Lambda_i(t)
///   F_n(t) = sum_i size_i^n Lambda_i(t),  n >= 3.
/// Closed form, no quadrature; F_n(0) = 0. Throws std::domain_error for
/// n < 2 (the process is centered, so order 1 is not defined).
double cumulant_fn(const ProcessSpec& spec, unsigned n, double t);

struct ValidationIssue {
  std::string function_name;
  double at = 0.0;
  double increment = 0.0;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  std::vector<std::string> notes;
  nlohmann::json to_json() const;
};

/// Grid checks of the hypotheses the martingale construction needs:
/// value(0) = 0, monotonicity and continuity of sigma^2 and every
/// Lambda_i, and nondecrease of F_n for even n up to 2*max_order.
/// Continuity tolerance is 10 * (max value on the horizon) / grid_points.
ValidationReport validate(const ProcessSpec& spec, double horizon, std::size_t grid_points,
                          unsigned max_order = 5);

/// Coefficients [c_0..c_n] of the time-space harmonic polynomial
/// g_n(x, t) = sum_j c_j x^j, where c_j = C(n,j) Gamma_{n-j} evaluated at
/// (0, -F_2(t), ..., -F_{n-j}(t)). Evaluating at x = X_t reproduces
/// Gamma_n(X_t, -F_2(t), ..., -F_n(t)).
std::vector<double> harmonic_coefficients(const ProcessSpec& spec, unsigned n, double t);

}  // namespace addmart
