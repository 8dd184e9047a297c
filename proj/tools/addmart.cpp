// Command-line front end: symbolic tables, spec validation, simulation
// batches, verification suites, and sequence conversion.
//
// Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
// 2 = configuration/validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "addmart/charlier.hpp"
#include "addmart/kendall.hpp"
#include "addmart/martingale_lab.hpp"
#include "addmart/numeric.hpp"
#include "addmart/process_model.hpp"
#include "addmart/simulator.hpp"
#include "addmart/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path.string());
  os << contents;
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  json j;
  is >> j;
  return j;
}

bool has_format(const std::vector<std::string>& formats, const std::string& wanted) {
  for (const auto& f : formats) {
    if (f == wanted) return true;
  }
  return false;
}

int cmd_gamma(unsigned max_order, const std::string& out_dir,
              const std::vector<std::string>& formats) {
  json table = json::array();
  std::string text;
  for (unsigned n = 0; n <= max_order; ++n) {
    const auto& poly = addmart::gamma(n);
    table.push_back({{"n", n}, {"poly", poly.to_json()}});
    text += "Gamma_" + std::to_string(n) + " = " + poly.str() + "\n";
  }

  // Cross-check against the set-partition oracle wherever it reaches.
  bool oracle_ok = true;
  const unsigned oracle_top = std::min(max_order, addmart::kPartitionOracleCap);
  for (unsigned n = 0; n <= oracle_top; ++n) {
    if (addmart::gamma(n) != addmart::gamma_partition_oracle(n)) {
      oracle_ok = false;
      std::cerr << "oracle mismatch at order " << n << "\n";
    }
  }
  text += "partition-oracle diff up to order " + std::to_string(oracle_top) + ": " +
          (oracle_ok ? "clean" : "MISMATCH") + "\n";

  if (out_dir.empty()) {
    std::cout << text;
  } else {
    if (has_format(formats, "json")) write_file(fs::path(out_dir) / "gamma.json", table.dump(2) + "\n");
    if (has_format(formats, "text")) write_file(fs::path(out_dir) / "gamma.txt", text);
    std::cout << text;
  }
  return oracle_ok ? 0 : 1;
}

int cmd_charlier(unsigned max_order, const std::string& out_dir,
                 const std::vector<std::string>& formats) {
  json out;
  out["lambda_tables"] = json::array();
  out["charlier_polynomials"] = json::array();
  out["expansion_checks"] = json::array();
  std::string text;
  bool raw_all_hold = true;
  for (unsigned n = 1; n <= max_order; ++n) {
    const addmart::LambdaTable table = addmart::lambda_table(n);
    json entries = json::array();
    std::string row;
    for (const auto& entry : table.entries) {
      entries.push_back(entry.str());
      row += (row.empty() ? "" : ", ") + entry.str();
    }
    out["lambda_tables"].push_back({{"order", n}, {"entries", std::move(entries)}});
    out["charlier_polynomials"].push_back(
        {{"order", n}, {"poly", addmart::charlier_poly(n).to_json()}});
    const addmart::ExpansionReport report = addmart::expansion_check(n);
    out["expansion_checks"].push_back(report.to_json());
    raw_all_hold = raw_all_hold && report.raw_argument_weighted_holds;
    text += "lambda(" + std::to_string(n) + ") = [" + row + "]\n";
    text += "C_" + std::to_string(n) + "(y,a) = " +
            addmart::charlier_poly(n).str({"y", "a"}) + "\n";
    text += "expansion order " + std::to_string(n) + ": paper-literal " +
            (report.paper_literal_holds ? "holds" : "fails") + ", raw-argument-weighted " +
            (report.raw_argument_weighted_holds ? "holds" : "fails") + "\n";
  }

  if (out_dir.empty()) {
    std::cout << text;
  } else {
    if (has_format(formats, "json")) write_file(fs::path(out_dir) / "charlier.json", out.dump(2) + "\n");
    if (has_format(formats, "text")) write_file(fs::path(out_dir) / "charlier.txt", text);
    std::cout << text;
  }
  return raw_all_hold ? 0 : 1;
}

void dump_paths(const addmart::ProcessSpec& spec, const std::vector<double>& grid,
                std::uint64_t seed, std::size_t count, const fs::path& out_dir,
                const std::vector<std::string>& formats) {
  for (std::size_t p = 0; p < count; ++p) {
    const addmart::PathRecord path = addmart::simulate_path(spec, grid, seed, p);
    char name[32];
    std::snprintf(name, sizeof(name), "path_%03zu", p);
    if (has_format(formats, "csv") || has_format(formats, "text")) {
      std::ostringstream os;
      addmart::write_csv(path, os);
      write_file(out_dir / (std::string(name) + ".csv"), os.str());
    }
    if (has_format(formats, "json")) {
      write_file(out_dir / (std::string(name) + ".json"), addmart::to_json(path).dump(2) + "\n");
    }
  }
}

int cmd_simulate(const std::string& spec_path, std::size_t paths, std::uint64_t seed,
                 std::size_t grid_cells, double horizon, const std::string& out_dir,
                 std::size_t dump_count, const std::vector<std::string>& formats) {
  const addmart::ProcessSpec spec = addmart::ProcessSpec::from_json(load_json_file(spec_path));
  const addmart::ValidationReport validation = addmart::validate(spec, horizon, 1000);
  if (!validation.ok) {
    std::cerr << "spec failed validation:\n";
    for (const auto& issue : validation.issues) {
      std::cerr << "  " << issue.function_name << ": " << issue.message << "\n";
    }
    return 2;
  }
  const std::vector<double> grid = addmart::uniform_grid(horizon, grid_cells);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t p = 0; p < paths; ++p) {
    const addmart::PathRecord path = addmart::simulate_path(spec, grid, seed, p);
    const double x_T = path.x_values.back();
    sum += x_T;
    sum_sq += x_T * x_T;
  }
  const double n = static_cast<double>(paths);
  const double mean = sum / n;
  const double var = (sum_sq - sum * sum / n) / (n - 1.0);

  json summary = {{"spec", spec.to_json()},
                  {"paths", paths},
                  {"seed", seed},
                  {"horizon", horizon},
                  {"grid_cells", grid_cells},
                  {"mean_X_T", mean},
                  {"var_X_T", var},
                  {"F2_T", addmart::cumulant_fn(spec, 2, horizon)}};
  std::cout << "mean X_T = " << addmart::format_double(mean)
            << "  var X_T = " << addmart::format_double(var)
            << "  F_2(T) = " << addmart::format_double(addmart::cumulant_fn(spec, 2, horizon))
            << "\n";
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    if (dump_count > 0) {
      dump_paths(spec, grid, seed, std::min(dump_count, paths), fs::path(out_dir), formats);
    }
  }
  return 0;
}

int cmd_verify(const std::string& spec_path, std::vector<unsigned> orders, std::size_t paths,
               std::uint64_t seed, std::size_t grid_cells, double horizon,
               const std::string& out_dir, const std::vector<std::string>& formats,
               unsigned threads, bool negative_control, std::size_t dump_count) {
  addmart::RunConfig config;
  config.spec_path = spec_path;
  config.spec_json = load_json_file(spec_path);
  if (!orders.empty()) config.orders = std::move(orders);
  config.num_paths = paths;
  config.seed = seed;
  config.decomposition_grid_cells = grid_cells;
  config.horizon = horizon;
  config.negative_control = negative_control;
  if (horizon != 1.0) {
    config.pairs = {{0.25 * horizon, 0.5 * horizon}, {0.5 * horizon, horizon}};
  }

  const addmart::VerifyBundle bundle = addmart::run_verify(config, threads);
  const std::string text = bundle.to_text();
  std::cout << text;
  if (!out_dir.empty()) {
    if (has_format(formats, "json")) {
      write_file(fs::path(out_dir) / "report.json", bundle.to_json().dump(2) + "\n");
    }
    if (has_format(formats, "text")) write_file(fs::path(out_dir) / "report.txt", text);
    if (dump_count > 0) {
      const addmart::ProcessSpec spec = addmart::ProcessSpec::from_json(config.spec_json);
      dump_paths(spec, addmart::uniform_grid(horizon, config.covariation_grid_cells), seed,
                 dump_count, fs::path(out_dir) / "paths", {"csv", "json"});
    }
  }
  return bundle.exit_code;
}

int cmd_convert(const std::string& input_path, const std::string& direction,
                const std::string& out_path) {
  const json input = load_json_file(input_path);
  if (!input.is_array() || input.empty()) {
    throw std::runtime_error("convert: input must be a non-empty JSON array");
  }
  std::vector<addmart::Rational> values;
  for (const auto& v : input) {
    if (v.is_number_integer()) {
      values.emplace_back(v.get<long long>());
    } else if (v.is_string()) {
      values.push_back(addmart::parse_rational(v.get<std::string>()));
    } else {
      throw std::runtime_error(
          "convert: entries must be integers or exact strings like \"3/4\" or \"0.5\"");
    }
  }
  std::vector<addmart::Rational> converted = direction == "moments"
                                                 ? addmart::moments_from_cumulants(values)
                                                 : addmart::cumulants_from_moments(values);
  json out = json::array();
  for (const auto& v : converted) out.push_back(addmart::rational_to_string(v));
  const std::string dump = out.dump() + "\n";
  if (out_path.empty()) {
    std::cout << dump;
  } else {
    write_file(out_path, dump);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact cumulant polynomials, additive-process simulation, and martingale checks"};
  app.require_subcommand(1);

  // gamma
  unsigned gamma_max_order = 8;
  std::string gamma_out;
  std::vector<std::string> gamma_formats = {"json", "text"};
  auto* gamma_cmd = app.add_subcommand("gamma", "Emit Kendall polynomial tables");
  gamma_cmd->add_option("--max-order", gamma_max_order, "Highest order to emit");
  gamma_cmd->add_option("--out", gamma_out, "Output directory");
  gamma_cmd->add_option("--format", gamma_formats, "Output formats (json, text)")->delimiter(',');

  // charlier
  unsigned charlier_max_order = 6;
  std::string charlier_out;
  std::vector<std::string> charlier_formats = {"json", "text"};
  std::string charlier_mode = "table";
  auto* charlier_cmd =
      app.add_subcommand("charlier", "Emit lambda tables and Charlier expansion verdicts");
  charlier_cmd->add_option("mode", charlier_mode, "Output selection (only: table)")
      ->check(CLI::IsMember({"table"}));
  charlier_cmd->add_option("--max-order", charlier_max_order, "Highest order to emit")
      ->check(CLI::Range(1u, 12u));
  charlier_cmd->add_option("--out", charlier_out, "Output directory");
  charlier_cmd->add_option("--format", charlier_formats, "Output formats (json, text)")
      ->delimiter(',');

  // simulate
  std::string sim_spec;
  std::size_t sim_paths = 1000;
  std::uint64_t sim_seed = 20260801;
  std::size_t sim_grid_cells = 1 << 10;
  double sim_horizon = 1.0;
  std::string sim_out;
  std::size_t sim_dump = 0;
  std::vector<std::string> sim_formats = {"csv", "json"};
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate paths and report batch statistics");
  sim_cmd->add_option("--spec", sim_spec, "Process spec JSON file")->required();
  sim_cmd->add_option("--paths", sim_paths, "Number of paths");
  sim_cmd->add_option("--seed", sim_seed, "Master seed");
  sim_cmd->add_option("--grid-cells", sim_grid_cells, "Uniform grid cells");
  sim_cmd->add_option("--horizon", sim_horizon, "Time horizon");
  sim_cmd->add_option("--out", sim_out, "Output directory");
  sim_cmd->add_option("--dump-paths", sim_dump, "Write the first N paths");
  sim_cmd->add_option("--format", sim_formats, "Dump formats (csv, json)")->delimiter(',');

  // verify
  std::string verify_spec;
  std::vector<unsigned> verify_orders;
  std::size_t verify_paths = 100000;
  std::uint64_t verify_seed = 20260801;
  std::size_t verify_grid_cells = 1 << 14;
  double verify_horizon = 1.0;
  std::string verify_out;
  std::vector<std::string> verify_formats = {"json", "text"};
  unsigned verify_threads = std::max(1u, std::thread::hardware_concurrency());
  bool verify_negative = false;
  std::size_t verify_dump = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the full verification suite");
  verify_cmd->add_option("--spec", verify_spec, "Process spec JSON file")->required();
  verify_cmd->add_option("--orders", verify_orders, "Orders to test (default 1..5)")
      ->delimiter(',');
  verify_cmd->add_option("--paths", verify_paths, "Monte Carlo path count");
  verify_cmd->add_option("--seed", verify_seed, "Master seed");
  verify_cmd->add_option("--grid-cells", verify_grid_cells,
                         "Fine grid cells for the decomposition stage");
  verify_cmd->add_option("--horizon", verify_horizon, "Time horizon");
  verify_cmd->add_option("--out", verify_out, "Output directory for the report bundle");
  verify_cmd->add_option("--format", verify_formats, "Bundle formats (json, text)")
      ->delimiter(',');
  verify_cmd->add_option("--threads", verify_threads, "Worker threads (does not affect output)");
  verify_cmd->add_flag("--negative-control", verify_negative,
                       "Also run the planted non-martingale and require its rejection");
  verify_cmd->add_option("--dump-paths", verify_dump, "Write the first N simulated paths");

  // convert
  std::string convert_input;
  std::string convert_to = "cumulants";
  std::string convert_out;
  auto* convert_cmd =
      app.add_subcommand("convert", "Convert between moment and cumulant sequences");
  convert_cmd->add_option("--input", convert_input, "JSON array of exact values")->required();
  convert_cmd->add_option("--to", convert_to, "Target: cumulants or moments")
      ->check(CLI::IsMember({"cumulants", "moments"}));
  convert_cmd->add_option("--out", convert_out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gamma_cmd->parsed()) return cmd_gamma(gamma_max_order, gamma_out, gamma_formats);
    if (charlier_cmd->parsed()) {
      return cmd_charlier(charlier_max_order, charlier_out, charlier_formats);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_spec, sim_paths, sim_seed, sim_grid_cells, sim_horizon, sim_out,
                          sim_dump, sim_formats);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_spec, verify_orders, verify_paths, verify_seed, verify_grid_cells,
                        verify_horizon, verify_out, verify_formats, verify_threads,
                        verify_negative, verify_dump);
    }
    if (convert_cmd->parsed()) return cmd_convert(convert_input, convert_to, convert_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
