#include "addmart/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "addmart/numeric.hpp"
#include "addmart/simulator.hpp"

namespace addmart {

nlohmann::json RunConfig::to_json() const {
  nlohmann::json pairs_json = nlohmann::json::array();
  for (const auto& pair : pairs) pairs_json.push_back({pair.s, pair.t});
  return {{"command", "verify"},
          {"spec_path", spec_path},
          {"spec", spec_json},
          {"orders", orders},
          {"pairs", std::move(pairs_json)},
          {"paths", num_paths},
          {"covariation_paths", covariation_paths},
          {"decomposition_paths", decomposition_paths},
          {"decomposition_grid_cells", decomposition_grid_cells},
          {"covariation_grid_cells", covariation_grid_cells},
          {"covariation_max_total_order", covariation_max_total_order},
          {"horizon", horizon},
          {"seed", seed},
          {"threshold", threshold},
          {"negative_control", negative_control}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig config;
  config.spec_path = j.value("spec_path", std::string());
  config.spec_json = j.at("spec");
  if (j.contains("orders")) config.orders = j.at("orders").get<std::vector<unsigned>>();
  if (j.contains("pairs")) {
    config.pairs.clear();
    for (const auto& pair : j.at("pairs")) {
      config.pairs.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
  }
  config.num_paths = j.value("paths", config.num_paths);
  config.covariation_paths = j.value("covariation_paths", config.covariation_paths);
  config.decomposition_paths = j.value("decomposition_paths", config.decomposition_paths);
  config.decomposition_grid_cells =
      j.value("decomposition_grid_cells", config.decomposition_grid_cells);
  config.covariation_grid_cells = j.value("covariation_grid_cells", config.covariation_grid_cells);
  config.covariation_max_total_order =
      j.value("covariation_max_total_order", config.covariation_max_total_order);
  config.horizon = j.value("horizon", config.horizon);
  config.seed = j.value("seed", config.seed);
  config.threshold = j.value("threshold", config.threshold);
  config.negative_control = j.value("negative_control", config.negative_control);
  return config;
}

namespace {

std::vector<CovariationResult> covariation_stage(const ProcessSpec& spec,
                                                 const RunConfig& config) {
  const std::vector<double> grid = uniform_grid(config.horizon, config.covariation_grid_cells);
  const unsigned max_total = config.covariation_max_total_order;

  struct Cell {
    double worst = 0.0;
    double scale = 0.0;  // max |X^(n+m)| seen
  };
  std::vector<std::vector<Cell>> cells(max_total + 1);
  for (unsigned n = 1; n <= max_total; ++n) cells[n].resize(max_total + 1);

  for (std::size_t p = 0; p < config.covariation_paths; ++p) {
    const PathRecord path = simulate_path(spec, grid, config.seed, p);
    std::vector<TeugelsSet> sets(max_total);
    for (unsigned n = 1; n < max_total; ++n) sets[n] = teugels(path, spec, n);
    for (unsigned n = 1; n < max_total; ++n) {
      for (unsigned m = n; n + m <= max_total; ++m) {
        Cell& cell = cells[n][m];
        cell.worst = std::max(
            cell.worst, optional_covariation_check(sets[n], sets[m], path, spec));
        const TeugelsSet reference = variations(path, spec, n + m);
        for (double v : reference.variation_values) {
          cell.scale = std::max(cell.scale, std::abs(v));
        }
      }
    }
  }

  std::vector<CovariationResult> results;
  for (unsigned n = 1; n < max_total; ++n) {
    for (unsigned m = n; n + m <= max_total; ++m) {
      CovariationResult result;
      result.n = n;
      result.m = m;
      result.max_discrepancy = cells[n][m].worst;
      result.tolerance = 1e-9 * (1.0 + cells[n][m].scale);
      result.pass = result.max_discrepancy <= result.tolerance;
      results.push_back(result);
    }
  }
  return results;
}

std::vector<DecompositionResult> decomposition_stage(const ProcessSpec& spec,
                                                     const RunConfig& config) {
  const unsigned max_order =
      std::min(4u, *std::max_element(config.orders.begin(), config.orders.end()));
  const std::vector<double> fine = uniform_grid(config.horizon, config.decomposition_grid_cells);
  const std::vector<double> coarse =
      uniform_grid(config.horizon, config.decomposition_grid_cells / 2);

  std::vector<DecompositionResult> results;
  for (unsigned n = 1; n <= max_order; ++n) {
    DecompositionResult result;
    result.order = n;
    double sum_coarse = 0.0;
    double sum_fine = 0.0;
    double worst_relative = 0.0;
    for (std::size_t p = 0; p < config.decomposition_paths; ++p) {
      const PathRecord fine_path = simulate_path(spec, fine, config.seed, p);
      const PathRecord coarse_path = regrid(fine_path, spec, coarse);
      const std::vector<double> res_fine = decomposition_residual(spec, fine_path, n);
      const std::vector<double> res_coarse = decomposition_residual(spec, coarse_path, n);
      const double max_fine = *std::max_element(res_fine.begin(), res_fine.end());
      const double max_coarse = *std::max_element(res_coarse.begin(), res_coarse.end());
      sum_fine += max_fine;
      sum_coarse += max_coarse;
      const std::vector<double> m_values = martingale_path(spec, fine_path, n);
      double m_scale = 0.0;
      for (double v : m_values) m_scale = std::max(m_scale, std::abs(v));
      worst_relative = std::max(worst_relative, max_fine / (m_scale > 0.0 ? m_scale : 1.0));
    }
    const double paths = static_cast<double>(config.decomposition_paths);
    result.mean_residual_coarse = sum_coarse / paths;
    result.mean_residual_fine = sum_fine / paths;
    result.ratio =
        result.mean_residual_coarse > 0.0 ? result.mean_residual_fine / result.mean_residual_coarse
                                          : 0.0;
    result.worst_relative = worst_relative;
    if (n == 1) {
      // The order-1 decomposition telescopes; the residual is pure rounding.
      result.pass = result.worst_relative <= 1e-12;
    } else {
      result.pass = result.ratio >= 0.3 && result.ratio <= 0.7 && result.worst_relative <= 1e-2;
    }
    results.push_back(result);
  }
  return results;
}

}  // namespace

VerifyBundle run_verify(const RunConfig& config, unsigned threads) {
  VerifyBundle bundle;
  bundle.config = config;
  if (config.orders.empty()) {
    bundle.exit_code = 2;
    bundle.failing_stage = "config";
    return bundle;
  }

  ProcessSpec spec = ProcessSpec::from_json(config.spec_json);

  const unsigned max_order = *std::max_element(config.orders.begin(), config.orders.end());
  bundle.validation = validate(spec, config.horizon, 1000, max_order);
  if (!bundle.validation.ok) {
    bundle.exit_code = 2;
    bundle.failing_stage = "validate";
    return bundle;
  }

  bundle.covariation = covariation_stage(spec, config);
  bool math_failed = false;
  for (const auto& result : bundle.covariation) {
    if (!result.pass) {
      math_failed = true;
      if (bundle.failing_stage.empty()) bundle.failing_stage = "covariation";
    }
  }

  IncrementTestConfig test_config;
  test_config.pairs = config.pairs;
  test_config.num_paths = config.num_paths;
  test_config.seed = config.seed;
  test_config.threshold = config.threshold;
  test_config.threads = threads;

  for (unsigned n : config.orders) {
    bundle.martingale_reports.push_back(martingale_test(spec, n, test_config));
    if (bundle.martingale_reports.back().any_failed()) {
      math_failed = true;
      if (bundle.failing_stage.empty()) bundle.failing_stage = "martingale";
    }
  }

  for (unsigned n : {1u, 2u}) {
    if (spec.atoms().empty() && n >= 2) {
      // Without jumps Y^(n) and F_{2n} vanish identically for n >= 2; the
      // estimator would be degenerate by construction.
      bundle.skipped.push_back("compensator test order " + std::to_string(n) +
                               ": degenerate for a pure-Gaussian spec");
      continue;
    }
    bundle.compensator_reports.push_back(compensator_test(spec, n, test_config));
    if (bundle.compensator_reports.back().any_failed()) {
      math_failed = true;
      if (bundle.failing_stage.empty()) bundle.failing_stage = "compensator";
    }
  }

  if (spec.pure_jump()) {
    bundle.decomposition = decomposition_stage(spec, config);
    for (const auto& result : bundle.decomposition) {
      if (!result.pass) {
        math_failed = true;
        if (bundle.failing_stage.empty()) bundle.failing_stage = "decomposition";
      }
    }
  } else {
    bundle.skipped.push_back("decomposition residuals: spec has a Gaussian part");
  }

  if (config.negative_control) {
    bundle.negative_control = negative_control_test(spec, test_config);
    bundle.negative_control_rejected = negative_control_rejected(*bundle.negative_control);
    if (!bundle.negative_control_rejected) {
      math_failed = true;
      if (bundle.failing_stage.empty()) bundle.failing_stage = "negative_control";
    }
  }

  bundle.exit_code = math_failed ? 1 : 0;
  return bundle;
}

nlohmann::json VerifyBundle::to_json() const {
  nlohmann::json covariation_json = nlohmann::json::array();
  for (const auto& result : covariation) {
    covariation_json.push_back({{"n", result.n},
                                {"m", result.m},
                                {"max_discrepancy", result.max_discrepancy},
                                {"tolerance", result.tolerance},
                                {"pass", result.pass}});
  }
  nlohmann::json martingale_json = nlohmann::json::array();
  for (const auto& report : martingale_reports) martingale_json.push_back(report.to_json());
  nlohmann::json compensator_json = nlohmann::json::array();
  for (const auto& report : compensator_reports) compensator_json.push_back(report.to_json());
  nlohmann::json decomposition_json = nlohmann::json::array();
  for (const auto& result : decomposition) {
    decomposition_json.push_back({{"order", result.order},
                                  {"mean_residual_coarse", result.mean_residual_coarse},
                                  {"mean_residual_fine", result.mean_residual_fine},
                                  {"ratio", result.ratio},
                                  {"worst_relative", result.worst_relative},
                                  {"pass", result.pass}});
  }
  nlohmann::json out = {{"config", config.to_json()},
                        {"validation", validation.to_json()},
                        {"covariation", std::move(covariation_json)},
                        {"martingale", std::move(martingale_json)},
                        {"compensator", std::move(compensator_json)},
                        {"decomposition", std::move(decomposition_json)},
                        {"skipped", skipped},
                        {"exit_code", exit_code},
                        {"failing_stage", failing_stage}};
  if (negative_control) {
    out["negative_control"] = negative_control->to_json();
    out["negative_control_rejected"] = negative_control_rejected;
  }
  return out;
}

std::string VerifyBundle::to_text() const {
  std::ostringstream os;
  os << "verification run (seed=" << config.seed << ", paths=" << config.num_paths
     << ", horizon=" << format_double(config.horizon) << ")\n";
  os << "spec: " << (config.spec_path.empty() ? "<inline>" : config.spec_path) << "\n\n";

  os << "[validate] " << (validation.ok ? "pass" : "FAIL") << "\n";
  for (const auto& issue : validation.issues) {
    os << "  " << issue.function_name << " at t=" << format_double(issue.at) << ": "
       << issue.message << " (increment " << format_double(issue.increment) << ")\n";
  }
  for (const auto& note : validation.notes) os << "  note: " << note << "\n";
  if (!validation.ok) return os.str();

  os << "\n[covariation] max |[Y(n),Y(m)] - X(n+m)| over " << config.covariation_paths
     << " paths\n";
  for (const auto& result : covariation) {
    os << "  n=" << result.n << " m=" << result.m
       << "  disc=" << format_double(result.max_discrepancy)
       << "  tol=" << format_double(result.tolerance) << "  "
       << (result.pass ? "pass" : "FAIL") << "\n";
  }

  os << "\n[martingale]\n";
  for (const auto& report : martingale_reports) os << report.to_text();
  os << "\n[compensator]\n";
  for (const auto& report : compensator_reports) os << report.to_text();

  if (!decomposition.empty()) {
    os << "\n[decomposition] residuals at " << config.decomposition_grid_cells << " vs "
       << config.decomposition_grid_cells / 2 << " cells, " << config.decomposition_paths
       << " paths\n";
    for (const auto& result : decomposition) {
      os << "  n=" << result.order << "  mean fine=" << format_double(result.mean_residual_fine)
         << "  ratio=" << format_double(result.ratio)
         << "  worst rel=" << format_double(result.worst_relative) << "  "
         << (result.pass ? "pass" : "FAIL") << "\n";
    }
  }
  for (const auto& note : skipped) os << "skipped: " << note << "\n";

  if (negative_control) {
    os << "\n[negative control]\n" << negative_control->to_text();
    os << "planted non-martingale " << (negative_control_rejected ? "rejected" : "NOT rejected")
       << "\n";
  }

  os << "\nexit code: " << exit_code;
  if (!failing_stage.empty()) os << " (failing stage: " << failing_stage << ")";
  os << "\n";
  return os.str();
}

}  // namespace addmart
