#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "addmart/process_model.hpp"
#include "addmart/simulator.hpp"

namespace addmart {

/// M^(n)_{t_k} = Gamma_n(X_{t_k}, -F_2(t_k), ..., -F_n(t_k)) on the path's
/// grid; M^(n)_0 = 0 exactly.
std::vector<double> martingale_path(const ProcessSpec& spec, const PathRecord& path, unsigned n);

/// Residual per grid point of the stochastic-integral decomposition
///   M^(n)_t = sum_{j=1..n} C(n,j) int_0^t M^(n-j)_{s-} dY^(j)_s.
/// Jump contributions use exact left limits at the recorded jump times;
/// the continuous compensator parts use left-point Riemann-Stieltjes sums
/// on the grid, so the residual decays at first order in the cell width.
/// Only defined for pure-jump specs (a Gaussian part would add a genuine
/// stochastic integral with unquantified discretization error).
std::vector<double> decomposition_residual(const ProcessSpec& spec, const PathRecord& path,
                                           unsigned n);

struct TimePair {
  double s = 0.0;
  double t = 0.0;
};

enum class TestFunction { One, X, XSquared };
const char* test_function_name(TestFunction h);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct EstimateRow {
  TimePair pair;
  TestFunction h = TestFunction::One;
  double estimate = 0.0;
  double std_error = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Monte Carlo certificate for one statistic: estimates of
/// E[(S_t - S_s) h(X_s)] with standard errors and pass/fail verdicts at a
/// fixed standard-error threshold. Regenerates identically from the seed.
struct MartingaleReport {
  std::string statistic;
  unsigned order = 0;
  std::size_t num_paths = 0;
  std::uint64_t seed = 0;
  double threshold = 4.0;
  std::vector<EstimateRow> rows;

  bool all_passed() const;
  bool any_failed() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Statistic evaluated at a grid index of a simulated path. Must be pure
/// (no mutable state): the harness calls it from several workers.
using GridStatistic = std::function<double(const PathRecord& path, std::size_t k)>;

/// Builds a GridStatistic once the test grid is known.
using StatisticFactory =
    std::function<GridStatistic(const ProcessSpec& spec, std::span<const double> grid)>;

struct IncrementTestConfig {
  std::vector<TimePair> pairs;
  std::size_t num_paths = 1000;
  std::uint64_t seed = 1;
  double threshold = 4.0;
  unsigned threads = 1;
  std::vector<TestFunction> test_functions = {TestFunction::One, TestFunction::X,
                                              TestFunction::XSquared};
};

/// Core harness: simulates `num_paths` paths on the minimal grid spanned
/// by the pairs, accumulates E[(S_t - S_s) h(X_s)] for h in {1, x, x^2},
/// and issues verdicts: pass iff |estimate| <= threshold * SE, degenerate
/// zero-variance estimators reported Inconclusive. Accumulation runs in
/// fixed-size chunks combined in index order, so the report is identical
/// for any worker count.
MartingaleReport statistic_increment_test(const std::string& label, unsigned order,
                                          const ProcessSpec& spec, const StatisticFactory& factory,
                                          const IncrementTestConfig& config);

/// Statistic factories.
StatisticFactory martingale_statistic(unsigned n);             // M^(n)
StatisticFactory uncompensated_variation_statistic(unsigned n);  // X^(n), a planted non-martingale
StatisticFactory compensated_square_statistic(unsigned n);       // (Y^(n))^2 - F_{2n}

/// Theorem-style certificate for M^(n).
MartingaleReport martingale_test(const ProcessSpec& spec, unsigned n,
                                 const IncrementTestConfig& config);

/// Certificate that (Y^(n))^2 - F_{2n} has zero-mean increments.
MartingaleReport compensator_test(const ProcessSpec& spec, unsigned n,
                                  const IncrementTestConfig& config);

/// Planted negative control: the uncompensated variation X^(2). The
/// harness is expected to reject it (h = 1 rows must fail).
MartingaleReport negative_control_test(const ProcessSpec& spec, const IncrementTestConfig& config);

/// True when every h = 1 row of the report fails, i.e. the harness
/// detected the planted bias.
bool negative_control_rejected(const MartingaleReport& report);

}  // namespace addmart
