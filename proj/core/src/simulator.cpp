#include "addmart/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "addmart/numeric.hpp"
#include "addmart/rng.hpp"

namespace addmart {

namespace {

void require_valid_grid(std::span<const double> grid) {
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw std::invalid_argument("grid must start at 0 and contain at least two points");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("grid times must be strictly increasing");
    }
  }
}

// X at grid points from the Gaussian part and the exact jump record.
std::vector<double> derive_x_values(const ProcessSpec& spec, std::span<const double> grid,
                                    const std::vector<double>& gaussian,
                                    const std::vector<JumpEvent>& jumps) {
  std::vector<double> x(grid.size(), 0.0);
  std::size_t j = 0;
  double jump_sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    while (j < jumps.size() && jumps[j].time <= grid[k]) {
      jump_sum += jumps[j].size;
      ++j;
    }
    x[k] = gaussian[k] + jump_sum - spec.compensator_drift(grid[k]);
  }
  return x;
}

}  // namespace

std::vector<double> uniform_grid(double horizon, std::size_t cells) {
  if (horizon <= 0.0 || cells == 0) {
    throw std::invalid_argument("uniform_grid: horizon and cell count must be positive");
  }
  std::vector<double> grid(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    grid[k] = horizon * static_cast<double>(k) / static_cast<double>(cells);
  }
  grid.back() = horizon;
  return grid;
}

PathRecord simulate_path(const ProcessSpec& spec, std::span<const double> grid,
                         std::uint64_t seed, std::uint64_t path_index) {
  require_valid_grid(grid);
  const double horizon = grid.back();

  PathRecord path;
  path.grid.assign(grid.begin(), grid.end());
  path.gaussian_values.assign(grid.size(), 0.0);

  if (!spec.gaussian_variance().is_zero()) {
    RandomStream stream(derive_stream_seed(seed, path_index, 0));
    double prev_var = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double var = spec.sigma2(grid[k]);
      const double increment = var - prev_var;
      if (increment < -1e-12 * (1.0 + std::abs(var))) {
        throw std::invalid_argument("sigma2 decreases between grid points at t = " +
                                    std::to_string(grid[k]));
      }
      path.gaussian_values[k] =
          path.gaussian_values[k - 1] + std::sqrt(std::max(increment, 0.0)) * stream.normal();
      prev_var = var;
    }
  }

  for (std::size_t i = 0; i < spec.atoms().size(); ++i) {
    const auto& atom = spec.atoms()[i];
    const double cap = atom.intensity.value(horizon);
    if (cap <= 0.0) continue;
    RandomStream stream(derive_stream_seed(seed, path_index, 1 + i));
    double level = 0.0;
    for (;;) {
      level += stream.exponential();
      if (level > cap) break;
      const double time = std::min(atom.intensity.inverse(level), horizon);
      path.jumps.push_back({time, i, atom.size});
    }
  }
  std::sort(path.jumps.begin(), path.jumps.end(), [](const JumpEvent& a, const JumpEvent& b) {
    return a.time != b.time ? a.time < b.time : a.atom < b.atom;
  });

  path.x_values = derive_x_values(spec, grid, path.gaussian_values, path.jumps);
  return path;
}

PathRecord regrid(const PathRecord& path, const ProcessSpec& spec, std::span<const double> grid) {
  if (!spec.pure_jump()) {
    throw std::invalid_argument("regrid requires a pure-jump spec");
  }
  require_valid_grid(grid);
  PathRecord out;
  out.grid.assign(grid.begin(), grid.end());
  out.gaussian_values.assign(grid.size(), 0.0);
  out.jumps = path.jumps;
  out.x_values = derive_x_values(spec, grid, out.gaussian_values, out.jumps);
  return out;
}

TeugelsSet variations(const PathRecord& path, const ProcessSpec& spec, unsigned n) {
  if (n < 1) throw std::domain_error("variations: order must be >= 1");
  TeugelsSet set;
  set.order = n;
  if (n == 1) {
    set.variation_values = path.x_values;
    return set;
  }
  set.variation_values.assign(path.grid.size(), 0.0);
  std::size_t j = 0;
  double power_sum = 0.0;
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    while (j < path.jumps.size() && path.jumps[j].time <= path.grid[k]) {
      power_sum += std::pow(path.jumps[j].size, static_cast<int>(n));
      ++j;
    }
    set.variation_values[k] = power_sum + (n == 2 ? spec.sigma2(path.grid[k]) : 0.0);
  }
  return set;
}

TeugelsSet teugels(const PathRecord& path, const ProcessSpec& spec, unsigned n) {
  TeugelsSet set = variations(path, spec, n);
  if (n == 1) {
    set.teugels_values = path.x_values;
    return set;
  }
  set.teugels_values.resize(path.grid.size());
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    set.teugels_values[k] = set.variation_values[k] - cumulant_fn(spec, n, path.grid[k]);
  }
  return set;
}

double optional_covariation_check(const TeugelsSet& y_n, const TeugelsSet& y_m,
                                  const PathRecord& path, const ProcessSpec& spec) {
  const unsigned n = y_n.order;
  const unsigned m = y_m.order;
  const TeugelsSet reference = variations(path, spec, n + m);

  double worst = 0.0;
  std::size_t j = 0;
  double bracket_jumps = 0.0;
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    while (j < path.jumps.size() && path.jumps[j].time <= path.grid[k]) {
      // dY^(n) at a jump is (dX)^n; the two factors are computed separately
      // so the comparison below is a genuine cross-check.
      bracket_jumps += std::pow(path.jumps[j].size, static_cast<int>(n)) *
                       std::pow(path.jumps[j].size, static_cast<int>(m));
      ++j;
    }
    double bracket = bracket_jumps;
    if (n == 1 && m == 1) bracket += spec.sigma2(path.grid[k]);
    worst = std::max(worst, std::abs(bracket - reference.variation_values[k]));
  }
  return worst;
}

void write_csv(const PathRecord& path, std::ostream& os) {
  os << "# grid\n";
  os << "index,time,gaussian,x\n";
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    os << k << "," << format_double(path.grid[k]) << "," << format_double(path.gaussian_values[k])
       << "," << format_double(path.x_values[k]) << "\n";
  }
  os << "# jumps\n";
  os << "index,time,atom,size\n";
  for (std::size_t q = 0; q < path.jumps.size(); ++q) {
    os << q << "," << format_double(path.jumps[q].time) << "," << path.jumps[q].atom << ","
       << format_double(path.jumps[q].size) << "\n";
  }
}

nlohmann::json to_json(const PathRecord& path) {
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& jump : path.jumps) {
    jumps.push_back({{"time", jump.time}, {"atom", jump.atom}, {"size", jump.size}});
  }
  return {{"grid", path.grid},
          {"gaussian", path.gaussian_values},
          {"x", path.x_values},
          {"jumps", std::move(jumps)}};
}

}  // namespace addmart
