#include "addmart/martingale_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "addmart/kendall.hpp"
#include "addmart/numeric.hpp"

namespace addmart {

namespace {

// Gamma_n evaluated at (x, -F_2(t), ..., -F_n(t)) for one grid time.
double evaluate_martingale(const ExactPolynomial::Compiled& compiled, unsigned n, double x,
                           const ProcessSpec& spec, double t) {
  std::vector<double> point(std::max(n, 1u), 0.0);
  point[0] = x;
  for (unsigned i = 2; i <= n; ++i) point[i - 1] = -cumulant_fn(spec, i, t);
  return compiled(point);
}

}  // namespace

std::vector<double> martingale_path(const ProcessSpec& spec, const PathRecord& path, unsigned n) {
  if (n < 1) throw std::domain_error("martingale_path: order must be >= 1");
  const ExactPolynomial::Compiled compiled = gamma(n).compile();
  std::vector<double> values(path.grid.size());
  std::vector<double> point(n, 0.0);
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    point[0] = path.x_values[k];
    for (unsigned i = 2; i <= n; ++i) point[i - 1] = -cumulant_fn(spec, i, path.grid[k]);
    values[k] = compiled(point);
  }
  return values;
}

std::vector<double> decomposition_residual(const ProcessSpec& spec, const PathRecord& path,
                                           unsigned n) {
  if (!spec.pure_jump()) {
    throw std::invalid_argument("decomposition check requires a pure-jump spec");
  }
  if (n < 1) throw std::domain_error("decomposition_residual: order must be >= 1");

  const std::size_t K = path.grid.size();
  // Compiled Gamma_m for m = 0..n.
  std::vector<ExactPolynomial::Compiled> compiled(n + 1);
  for (unsigned m = 0; m <= n; ++m) compiled[m] = gamma(m).compile();

  // Grid values of M^(m) for m = 0..n-1 plus the target M^(n).
  std::vector<std::vector<double>> m_grid(n + 1, std::vector<double>(K));
  for (unsigned m = 0; m <= n; ++m) {
    if (m == 0) {
      std::fill(m_grid[0].begin(), m_grid[0].end(), 1.0);
      continue;
    }
    std::vector<double> point(m, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      point[0] = path.x_values[k];
      for (unsigned i = 2; i <= m; ++i) point[i - 1] = -cumulant_fn(spec, i, path.grid[k]);
      m_grid[m][k] = compiled[m](point);
    }
  }

  // Compensator integrands: C_1 is the drift removed from X, C_j = F_j for
  // j >= 2. Values on the grid.
  std::vector<std::vector<double>> comp_fn(n + 1, std::vector<double>(K));
  for (std::size_t k = 0; k < K; ++k) {
    comp_fn[1][k] = spec.compensator_drift(path.grid[k]);
    for (unsigned j = 2; j <= n; ++j) comp_fn[j][k] = cumulant_fn(spec, j, path.grid[k]);
  }

  // Left limits M^(m)_{s-} at each recorded jump time, exactly: the
  // pre-jump X value comes from the jump record, never from grid lookup.
  const std::size_t Q = path.jumps.size();
  std::vector<std::vector<double>> m_prejump(n, std::vector<double>(Q));
  {
    double jump_sum = 0.0;
    std::vector<double> point(std::max(n, 1u), 0.0);
    for (std::size_t q = 0; q < Q; ++q) {
      const double s = path.jumps[q].time;
      const double x_left = jump_sum - spec.compensator_drift(s);
      for (unsigned m = 0; m < n; ++m) {
        m_prejump[m][q] = evaluate_martingale(compiled[m], m, x_left, spec, s);
      }
      jump_sum += path.jumps[q].size;
    }
  }

  std::vector<double> binom(n + 1);
  for (unsigned j = 1; j <= n; ++j) binom[j] = to_double(Rational(binomial(n, j)));

  // Running jump sums and left-point compensator sums per j.
  std::vector<double> jump_part(n + 1, 0.0);
  std::vector<double> comp_part(n + 1, 0.0);
  std::vector<double> residual(K, 0.0);
  std::size_t q = 0;
  for (std::size_t k = 0; k < K; ++k) {
    if (k > 0) {
      for (unsigned j = 1; j <= n; ++j) {
        comp_part[j] += m_grid[n - j][k - 1] * (comp_fn[j][k] - comp_fn[j][k - 1]);
      }
    }
    while (q < Q && path.jumps[q].time <= path.grid[k]) {
      double power = 1.0;
      for (unsigned j = 1; j <= n; ++j) {
        power *= path.jumps[q].size;
        jump_part[j] += m_prejump[n - j][q] * power;
      }
      ++q;
    }
    double rhs = 0.0;
    for (unsigned j = 1; j <= n; ++j) rhs += binom[j] * (jump_part[j] - comp_part[j]);
    residual[k] = std::abs(m_grid[n][k] - rhs);
  }
  return residual;
}

const char* test_function_name(TestFunction h) {
  switch (h) {
    case TestFunction::One:
      return "1";
    case TestFunction::X:
      return "x";
    case TestFunction::XSquared:
      return "x^2";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool MartingaleReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const EstimateRow& r) { return r.verdict == Verdict::Pass; });
}

bool MartingaleReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const EstimateRow& r) { return r.verdict == Verdict::Fail; });
}

nlohmann::json MartingaleReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"s", row.pair.s},
                         {"t", row.pair.t},
                         {"h", test_function_name(row.h)},
                         {"estimate", row.estimate},
                         {"std_error", row.std_error},
                         {"verdict", verdict_name(row.verdict)}});
  }
  return {{"statistic", statistic}, {"order", order},     {"paths", num_paths},
          {"seed", seed},           {"threshold", threshold}, {"rows", std::move(rows_json)}};
}

std::string MartingaleReport::to_text() const {
  std::ostringstream os;
  os << statistic << "  (paths=" << num_paths << ", seed=" << seed << ", threshold=" << threshold
     << " SE)\n";
  for (const auto& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "  (%g, %g)  h=%-3s  est=%-24s se=%-24s %s\n", row.pair.s,
                  row.pair.t, test_function_name(row.h), format_double(row.estimate).c_str(),
                  format_double(row.std_error).c_str(), verdict_name(row.verdict));
    os << line;
  }
  return os.str();
}

namespace {

constexpr std::size_t kChunkSize = 4096;

double apply_test_function(TestFunction h, double x) {
  switch (h) {
    case TestFunction::One:
      return 1.0;
    case TestFunction::X:
      return x;
    case TestFunction::XSquared:
      return x * x;
  }
  return 0.0;
}

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double z) {
    sum += z;
    sum_sq += z * z;
  }
  void combine(const Accumulator& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
};

}  // namespace

MartingaleReport statistic_increment_test(const std::string& label, unsigned order,
                                          const ProcessSpec& spec, const StatisticFactory& factory,
                                          const IncrementTestConfig& config) {
  if (config.pairs.empty()) throw std::invalid_argument("increment test needs time pairs");
  for (const auto& pair : config.pairs) {
    if (!(0.0 <= pair.s && pair.s < pair.t)) {
      throw std::invalid_argument("time pairs must satisfy 0 <= s < t");
    }
  }
  if (config.num_paths < 2) throw std::invalid_argument("increment test needs at least 2 paths");

  // Minimal simulation grid: {0} plus every pair endpoint. The law of
  // (X_s, X_t) is exact on any grid containing s and t.
  std::set<double> times{0.0};
  for (const auto& pair : config.pairs) {
    times.insert(pair.s);
    times.insert(pair.t);
  }
  const std::vector<double> grid(times.begin(), times.end());
  auto index_of = [&grid](double t) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
  };

  const GridStatistic statistic = factory(spec, grid);
  if (config.test_functions.empty()) {
    throw std::invalid_argument("increment test needs at least one test function");
  }
  const std::size_t cells = config.pairs.size() * config.test_functions.size();

  const std::size_t num_chunks = (config.num_paths + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<Accumulator>> partials(num_chunks,
                                                 std::vector<Accumulator>(cells));

  auto run_chunk = [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(begin + kChunkSize, config.num_paths);
    auto& acc = partials[chunk];
    for (std::size_t p = begin; p < end; ++p) {
      const PathRecord path = simulate_path(spec, grid, config.seed, p);
      std::size_t cell = 0;
      for (const auto& pair : config.pairs) {
        const std::size_t is = index_of(pair.s);
        const std::size_t it = index_of(pair.t);
        const double increment = statistic(path, it) - statistic(path, is);
        const double x_s = path.x_values[is];
        for (TestFunction h : config.test_functions) {
          acc[cell++].add(increment * apply_test_function(h, x_s));
        }
      }
    }
  };

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1 || num_chunks <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next_chunk{0};
    std::vector<std::future<void>> workers;
    const unsigned worker_count = std::min<std::size_t>(threads, num_chunks);
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (;;) {
          const std::size_t c = next_chunk.fetch_add(1);
          if (c >= num_chunks) return;
          run_chunk(c);
        }
      }));
    }
    for (auto& worker : workers) worker.get();
  }

  // Combine partial sums in chunk order: the totals (and hence the report)
  // are independent of how chunks were scheduled across workers.
  std::vector<Accumulator> totals(cells);
  for (std::size_t c = 0; c < num_chunks; ++c) {
    for (std::size_t i = 0; i < cells; ++i) totals[i].combine(partials[c][i]);
  }

  MartingaleReport report;
  report.statistic = label;
  report.order = order;
  report.num_paths = config.num_paths;
  report.seed = config.seed;
  report.threshold = config.threshold;
  const double N = static_cast<double>(config.num_paths);
  std::size_t cell = 0;
  for (const auto& pair : config.pairs) {
    for (TestFunction h : config.test_functions) {
      const Accumulator& acc = totals[cell++];
      EstimateRow row;
      row.pair = pair;
      row.h = h;
      row.estimate = acc.sum / N;
      const double variance = std::max(0.0, (acc.sum_sq - acc.sum * acc.sum / N) / (N - 1.0));
      row.std_error = std::sqrt(variance / N);
      if (row.std_error == 0.0) {
        row.verdict = row.estimate == 0.0 ? Verdict::Inconclusive : Verdict::Fail;
      } else {
        row.verdict = std::abs(row.estimate) <= config.threshold * row.std_error ? Verdict::Pass
                                                                                 : Verdict::Fail;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

StatisticFactory martingale_statistic(unsigned n) {
  return [n](const ProcessSpec& spec, std::span<const double> grid) -> GridStatistic {
    auto compiled = std::make_shared<ExactPolynomial::Compiled>(gamma(n).compile());
    // -F_i(t_k) precomputed per grid index; workers only read.
    auto f_values = std::make_shared<std::vector<std::vector<double>>>(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto& point = (*f_values)[k];
      point.assign(std::max(n, 1u), 0.0);
      for (unsigned i = 2; i <= n; ++i) point[i - 1] = -cumulant_fn(spec, i, grid[k]);
    }
    return [compiled, f_values](const PathRecord& path, std::size_t k) {
      std::vector<double> point = (*f_values)[k];
      point[0] = path.x_values[k];
      return (*compiled)(point);
    };
  };
}

StatisticFactory uncompensated_variation_statistic(unsigned n) {
  return [n](const ProcessSpec& spec, std::span<const double>) -> GridStatistic {
    const ProcessSpec* spec_ptr = &spec;
    return [n, spec_ptr](const PathRecord& path, std::size_t k) {
      double sum = n == 2 ? spec_ptr->sigma2(path.grid[k]) : 0.0;
      for (const auto& jump : path.jumps) {
        if (jump.time > path.grid[k]) break;
        sum += std::pow(jump.size, static_cast<int>(n));
      }
      return sum;
    };
  };
}

StatisticFactory compensated_square_statistic(unsigned n) {
  return [n](const ProcessSpec& spec, std::span<const double> grid) -> GridStatistic {
    auto f_n = std::make_shared<std::vector<double>>(grid.size(), 0.0);
    auto f_2n = std::make_shared<std::vector<double>>(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (n >= 2) (*f_n)[k] = cumulant_fn(spec, n, grid[k]);
      (*f_2n)[k] = cumulant_fn(spec, 2 * n, grid[k]);
    }
    const ProcessSpec* spec_ptr = &spec;
    return [n, spec_ptr, f_n, f_2n](const PathRecord& path, std::size_t k) {
      double variation = n == 2 ? spec_ptr->sigma2(path.grid[k]) : 0.0;
      if (n == 1) {
        variation = path.x_values[k];
      } else {
        for (const auto& jump : path.jumps) {
          if (jump.time > path.grid[k]) break;
          variation += std::pow(jump.size, static_cast<int>(n));
        }
        variation -= (*f_n)[k];
      }
      return variation * variation - (*f_2n)[k];
    };
  };
}

MartingaleReport martingale_test(const ProcessSpec& spec, unsigned n,
                                 const IncrementTestConfig& config) {
  return statistic_increment_test("M(" + std::to_string(n) + ")", n, spec,
                                  martingale_statistic(n), config);
}

MartingaleReport compensator_test(const ProcessSpec& spec, unsigned n,
                                  const IncrementTestConfig& config) {
  return statistic_increment_test(
      "Y(" + std::to_string(n) + ")^2 - F(" + std::to_string(2 * n) + ")", n, spec,
      compensated_square_statistic(n), config);
}

MartingaleReport negative_control_test(const ProcessSpec& spec,
                                       const IncrementTestConfig& config) {
  return statistic_increment_test("X(2) uncompensated [negative control]", 2, spec,
                                  uncompensated_variation_statistic(2), config);
}

bool negative_control_rejected(const MartingaleReport& report) {
  bool saw_h1 = false;
  for (const auto& row : report.rows) {
    if (row.h != TestFunction::One) continue;
    saw_h1 = true;
    if (row.verdict != Verdict::Fail) return false;
  }
  return saw_h1;
}

}  // namespace addmart
