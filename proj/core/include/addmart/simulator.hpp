#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "addmart/process_model.hpp"

namespace addmart {

struct JumpEvent {
  double time = 0.0;
  std::size_t atom = 0;
  double size = 0.0;
};

/// One simulated trajectory. x_values is derived:
///   X_{t_k} = G_{t_k} + sum_{jumps s <= t_k} size - sum_i size_i Lambda_i(t_k),
/// i.e. the compensated form of the Gaussian-plus-jumps decomposition.
struct PathRecord {
  std::vector<double> grid;             // 0 = t_0 < ... < t_K
  std::vector<double> gaussian_values;  // G_{t_k}
  std::vector<JumpEvent> jumps;         // sorted by (time, atom), times in (0, horizon]
  std::vector<double> x_values;         // X_{t_k}
};

/// Uniform grid 0..horizon with `cells` cells (cells + 1 points).
std::vector<double> uniform_grid(double horizon, std::size_t cells);

/// Simulates one path on the given grid. The Gaussian part is generated as
/// independent increments with variance sigma^2(t_k) - sigma^2(t_{k-1});
/// each atom's jumps come from a unit-rate Poisson stream mapped through
/// the generalized inverse of its cumulative intensity (exact in law, no
/// intensity density needed). Deterministic in (seed, path_index): the
/// same inputs give the identical path regardless of scheduling.
PathRecord simulate_path(const ProcessSpec& spec, std::span<const double> grid,
                         std::uint64_t seed, std::uint64_t path_index);

/// Re-evaluates a pure-jump path on a new grid; the jump record is exact,
/// so X is recomputable at any set of times. Throws for specs with a
/// Gaussian part (those values exist only on the simulated grid).
PathRecord regrid(const PathRecord& path, const ProcessSpec& spec,
                  std::span<const double> grid);

/// Per-path arrays of the power-jump variation X^(n) and its compensated
/// (Teugels) version Y^(n) = X^(n) - F_n(t) on the grid; Y^(1) = X.
struct TeugelsSet {
  unsigned order = 1;
  std::vector<double> variation_values;
  std::vector<double> teugels_values;
};

/// X^(1) = X; X^(2) = sigma^2(t) + sum (dX)^2; X^(n) = sum (dX)^n, n >= 3.
/// Exact finite sums over the jump record. Only variation_values is filled.
TeugelsSet variations(const PathRecord& path, const ProcessSpec& spec, unsigned n);

/// variations() plus teugels_values = X^(n) - F_n(t) (= X itself for n=1).
TeugelsSet teugels(const PathRecord& path, const ProcessSpec& spec, unsigned n);

/// Pathwise bracket check: assembles [Y^(n), Y^(m)]_t from the jump record
/// as sum of dY^(n) dY^(m) (plus sigma^2(t) when n = m = 1) and compares
/// with X^(n+m)_t at every grid point. Returns the max absolute
/// discrepancy, which is zero up to accumulation rounding.
double optional_covariation_check(const TeugelsSet& y_n, const TeugelsSet& y_m,
                                  const PathRecord& path, const ProcessSpec& spec);

/// CSV dump: grid section (index,time,gaussian,x) then jump section
/// (index,time,atom,size).
void write_csv(const PathRecord& path, std::ostream& os);

nlohmann::json to_json(const PathRecord& path);

}  // namespace addmart
