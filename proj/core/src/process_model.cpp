#include "addmart/process_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "addmart/kendall.hpp"
#include "addmart/numeric.hpp"

namespace addmart {

MonotoneFunction MonotoneFunction::zero() { return MonotoneFunction(); }

MonotoneFunction MonotoneFunction::linear(double slope) {
  MonotoneFunction f;
  f.kind_ = Kind::Linear;
  f.a_ = slope;
  return f;
}

MonotoneFunction MonotoneFunction::power(double scale, double exponent) {
  if (exponent < 1.0) {
    throw std::invalid_argument("power intensity requires exponent p >= 1");
  }
  MonotoneFunction f;
  f.kind_ = Kind::Power;
  f.a_ = scale;
  f.p_ = exponent;
  return f;
}

MonotoneFunction MonotoneFunction::piecewise_linear(std::vector<double> times,
                                                    std::vector<double> values) {
  if (times.size() != values.size() || times.empty()) {
    throw std::invalid_argument("piecewise table needs equal-length, non-empty knot arrays");
  }
  if (times.front() != 0.0) {
    throw std::invalid_argument("piecewise table must start at t = 0");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("piecewise knot times must be nondecreasing");
  }
  MonotoneFunction f;
  f.kind_ = Kind::PiecewiseLinear;
  f.knot_times_ = std::move(times);
  f.knot_values_ = std::move(values);
  return f;
}

bool MonotoneFunction::is_zero() const {
  switch (kind_) {
    case Kind::Zero:
      return true;
    case Kind::Linear:
    case Kind::Power:
      return a_ == 0.0;
    case Kind::PiecewiseLinear:
      return std::all_of(knot_values_.begin(), knot_values_.end(),
                         [](double v) { return v == 0.0; });
  }
  return false;
}

double MonotoneFunction::value(double t) const {
  if (t < 0.0) throw std::domain_error("monotone function queried at negative time");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Linear:
      return a_ * t;
    case Kind::Power:
      return a_ * std::pow(t, p_);
    case Kind::PiecewiseLinear: {
      // Rightmost knot with time <= t keeps the function right-continuous
      // across zero-width (jump) segments.
      auto it = std::upper_bound(knot_times_.begin(), knot_times_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - knot_times_.begin());
      if (hi == 0) return knot_values_.front();
      const std::size_t i = hi - 1;
      if (hi == knot_times_.size()) {
        // Extrapolate with the final segment's slope.
        double slope = 0.0;
        if (knot_times_.size() >= 2) {
          const double dt = knot_times_[i] - knot_times_[i - 1];
          if (dt > 0.0) slope = (knot_values_[i] - knot_values_[i - 1]) / dt;
        }
        return knot_values_[i] + slope * (t - knot_times_[i]);
      }
      const double dt = knot_times_[hi] - knot_times_[i];
      if (dt == 0.0) return knot_values_[i];
      const double w = (t - knot_times_[i]) / dt;
      return knot_values_[i] + w * (knot_values_[hi] - knot_values_[i]);
    }
  }
  return 0.0;
}

double MonotoneFunction::inverse(double v) const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (v <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Zero:
      return kInf;
    case Kind::Linear:
      return a_ > 0.0 ? v / a_ : kInf;
    case Kind::Power:
      return a_ > 0.0 ? std::pow(v / a_, 1.0 / p_) : kInf;
    case Kind::PiecewiseLinear: {
      // First knot whose value reaches v gives the segment containing the
      // generalized inverse; flat segments resolve to their left endpoint.
      auto it = std::lower_bound(knot_values_.begin(), knot_values_.end(), v);
      if (it == knot_values_.end()) {
        const std::size_t i = knot_values_.size() - 1;
        double slope = 0.0;
        if (knot_values_.size() >= 2) {
          const double dt = knot_times_[i] - knot_times_[i - 1];
          if (dt > 0.0) slope = (knot_values_[i] - knot_values_[i - 1]) / dt;
        }
        if (slope <= 0.0) return kInf;
        return knot_times_[i] + (v - knot_values_[i]) / slope;
      }
      const std::size_t hi = static_cast<std::size_t>(it - knot_values_.begin());
      if (hi == 0) return knot_times_.front();
      const std::size_t lo = hi - 1;
      const double dv = knot_values_[hi] - knot_values_[lo];
      if (dv <= 0.0) return knot_times_[hi];
      const double w = (v - knot_values_[lo]) / dv;
      return knot_times_[lo] + w * (knot_times_[hi] - knot_times_[lo]);
    }
  }
  return kInf;
}

std::string MonotoneFunction::description() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Zero:
      os << "zero";
      break;
    case Kind::Linear:
      os << "linear(a=" << a_ << ")";
      break;
    case Kind::Power:
      os << "power(a=" << a_ << ", p=" << p_ << ")";
      break;
    case Kind::PiecewiseLinear:
      os << "piecewise(" << knot_times_.size() << " knots)";
      break;
  }
  return os.str();
}

nlohmann::json MonotoneFunction::to_json() const {
  switch (kind_) {
    case Kind::Zero:
      return {{"kind", "zero"}};
    case Kind::Linear:
      return {{"kind", "linear"}, {"a", a_}};
    case Kind::Power:
      return {{"kind", "power"}, {"a", a_}, {"p", p_}};
    case Kind::PiecewiseLinear:
      return {{"kind", "piecewise"}, {"t", knot_times_}, {"v", knot_values_}};
  }
  return {{"kind", "zero"}};
}

MonotoneFunction MonotoneFunction::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return zero();
  if (kind == "linear") return linear(j.at("a").get<double>());
  if (kind == "power") return power(j.at("a").get<double>(), j.at("p").get<double>());
  if (kind == "piecewise") {
    return piecewise_linear(j.at("t").get<std::vector<double>>(),
                            j.at("v").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown monotone function kind: " + kind);
}

ProcessSpec::ProcessSpec(MonotoneFunction gaussian_variance, std::vector<JumpAtom> atoms)
    : sigma2_(std::move(gaussian_variance)), atoms_(std::move(atoms)) {
  for (const auto& atom : atoms_) {
    if (atom.size == 0.0) throw std::invalid_argument("jump atom size must be nonzero");
  }
  if (sigma2_.is_zero() && atoms_.empty()) {
    throw std::invalid_argument("process spec needs a Gaussian part or at least one jump atom");
  }
}

double ProcessSpec::compensator_drift(double t) const {
  double drift = 0.0;
  for (const auto& atom : atoms_) drift += atom.size * atom.intensity.value(t);
  return drift;
}

nlohmann::json ProcessSpec::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : atoms_) {
    atoms.push_back({{"size", atom.size}, {"intensity", atom.intensity.to_json()}});
  }
  return {{"sigma2", sigma2_.to_json()}, {"atoms", std::move(atoms)}};
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
  MonotoneFunction sigma2 = MonotoneFunction::zero();
  if (j.contains("sigma2") && !j.at("sigma2").is_null()) {
    sigma2 = MonotoneFunction::from_json(j.at("sigma2"));
  }
  std::vector<JumpAtom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      atoms.push_back({a.at("size").get<double>(), MonotoneFunction::from_json(a.at("intensity"))});
    }
  }
  return ProcessSpec(std::move(sigma2), std::move(atoms));
}

double cumulant_fn(const ProcessSpec& spec, unsigned n, double t) {
  if (n < 2) {
    throw std::domain_error("cumulant_fn: order must be >= 2 (the process is centered)");
  }
  double sum = n == 2 ? spec.sigma2(t) : 0.0;
  for (const auto& atom : spec.atoms()) {
    sum += std::pow(atom.size, static_cast<int>(n)) * atom.intensity.value(t);
  }
  return sum;
}

namespace {

void check_monotone_function(const MonotoneFunction& f, const std::string& name, double horizon,
                             std::size_t grid_points, ValidationReport& report) {
  const double at_zero = f.value(0.0);
  if (std::abs(at_zero) > 1e-12) {
    report.ok = false;
    report.issues.push_back({name, 0.0, at_zero, "value at t=0 is not zero"});
  }
  double max_value = 0.0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    max_value = std::max(max_value, std::abs(f.value(t)));
  }
  const double continuity_tol = 10.0 * max_value / static_cast<double>(grid_points);
  double prev = f.value(0.0);
  for (std::size_t k = 1; k < grid_points; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    const double cur = f.value(t);
    const double inc = cur - prev;
    if (inc < -1e-12 * (1.0 + std::abs(cur))) {
      report.ok = false;
      report.issues.push_back({name, t, inc, "monotonicity violation"});
      return;
    }
    if (max_value > 0.0 && inc > continuity_tol) {
      report.ok = false;
      report.issues.push_back({name, t, inc, "continuity violation"});
      return;
    }
    prev = cur;
  }
}

}  // namespace

ValidationReport validate(const ProcessSpec& spec, double horizon, std::size_t grid_points,
                          unsigned max_order) {
  if (horizon <= 0.0) throw std::invalid_argument("validate: horizon must be positive");
  if (grid_points < 2) throw std::invalid_argument("validate: need at least two grid points");

  ValidationReport report;
  if (!spec.gaussian_variance().is_zero()) {
    check_monotone_function(spec.gaussian_variance(),
                            "sigma2 " + spec.gaussian_variance().description(), horizon,
                            grid_points, report);
  }
  for (std::size_t i = 0; i < spec.atoms().size(); ++i) {
    const auto& atom = spec.atoms()[i];
    check_monotone_function(atom.intensity,
                            "atom[" + std::to_string(i) + "] intensity " +
                                atom.intensity.description(),
                            horizon, grid_points, report);
  }
  if (!report.ok) return report;

  // Even-order cumulant functions must be nondecreasing on the grid.
  for (unsigned n = 2; n <= 2 * max_order; n += 2) {
    double prev = cumulant_fn(spec, n, 0.0);
    for (std::size_t k = 1; k < grid_points; ++k) {
      const double t = horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
      const double cur = cumulant_fn(spec, n, t);
      if (cur - prev < -1e-12 * (1.0 + std::abs(cur))) {
        report.ok = false;
        report.issues.push_back(
            {"F_" + std::to_string(n), t, cur - prev, "even-order cumulant function decreases"});
        break;
      }
      prev = cur;
    }
  }

  // Informational: odd orders that vanish identically on the grid.
  for (unsigned n = 3; n <= 2 * max_order; n += 2) {
    bool all_zero = true;
    for (std::size_t k = 0; k < grid_points && all_zero; ++k) {
      const double t = horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
      if (std::abs(cumulant_fn(spec, n, t)) > 0.0) all_zero = false;
    }
    if (all_zero) report.notes.push_back("F_" + std::to_string(n) + " identically 0 on the grid");
  }
  return report;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json issues_json = nlohmann::json::array();
  for (const auto& issue : issues) {
    issues_json.push_back({{"function", issue.function_name},
                           {"at", issue.at},
                           {"increment", issue.increment},
                           {"message", issue.message}});
  }
  return {{"ok", ok}, {"issues", std::move(issues_json)}, {"notes", notes}};
}

std::vector<double> harmonic_coefficients(const ProcessSpec& spec, unsigned n, double t) {
  if (n < 1) throw std::domain_error("harmonic_coefficients: order must be >= 1");
  // Point (0, -F_2(t), ..., -F_n(t)); prefix of length m evaluates Gamma_m.
  std::vector<double> point(n, 0.0);
  for (unsigned i = 2; i <= n; ++i) point[i - 1] = -cumulant_fn(spec, i, t);
  std::vector<double> coefficients(n + 1, 0.0);
  for (unsigned j = 0; j <= n; ++j) {
    const unsigned m = n - j;
    coefficients[j] = to_double(Rational(binomial(n, j))) *
                      gamma(m).evaluate(std::span<const double>(point.data(), m));
  }
  return coefficients;
}

}  // namespace addmart
