#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "addmart/martingale_lab.hpp"
#include "addmart/process_model.hpp"

namespace addmart {

/// Everything a verification run needs; a bundle regenerated from the same
/// RunConfig is byte-identical. Worker count is deliberately not part of
/// the config: it must not influence any emitted byte.
struct RunConfig {
  std::string spec_path;        // informational; spec_json is the source of truth
  nlohmann::json spec_json;
  std::vector<unsigned> orders = {1, 2, 3, 4, 5};
  std::vector<TimePair> pairs = {{0.25, 0.5}, {0.5, 1.0}};
  std::size_t num_paths = 100000;
  std::size_t covariation_paths = 1000;
  std::size_t decomposition_paths = 100;
  std::size_t decomposition_grid_cells = 1 << 14;
  std::size_t covariation_grid_cells = 1 << 10;
  unsigned covariation_max_total_order = 8;
  double horizon = 1.0;
  std::uint64_t seed = 20260801;
  double threshold = 4.0;
  bool negative_control = false;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct CovariationResult {
  unsigned n = 1;
  unsigned m = 1;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct DecompositionResult {
  unsigned order = 1;
  double mean_residual_coarse = 0.0;
  double mean_residual_fine = 0.0;
  double ratio = 0.0;           // fine / coarse of the mean max-residual
  double worst_relative = 0.0;  // max over paths of residual / max|M^(n)|
  bool pass = false;
};

struct VerifyBundle {
  RunConfig config;
  ValidationReport validation;
  std::vector<CovariationResult> covariation;
  std::vector<MartingaleReport> martingale_reports;
  std::vector<MartingaleReport> compensator_reports;
  std::vector<std::string> skipped;  // degenerate combinations, with reasons
  std::vector<DecompositionResult> decomposition;
  std::optional<MartingaleReport> negative_control;
  bool negative_control_rejected = false;

  /// 0 = all checks pass, 1 = a mathematical check failed,
  /// 2 = configuration/validation error.
  int exit_code = 0;
  std::string failing_stage;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Runs validate -> covariation -> martingale/compensator tests ->
/// (pure-jump only) decomposition residuals -> optional negative control.
/// `threads` parallelizes path batches without affecting any output byte.
VerifyBundle run_verify(const RunConfig& config, unsigned threads = 1);

}  // namespace addmart
