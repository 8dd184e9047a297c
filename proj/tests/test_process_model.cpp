#include <doctest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "addmart/process_model.hpp"

using addmart::JumpAtom;
using addmart::MonotoneFunction;
using addmart::ProcessSpec;

namespace {

ProcessSpec cox_spec(MonotoneFunction intensity) {
  return ProcessSpec(MonotoneFunction::zero(), {{1.0, std::move(intensity)}});
}

ProcessSpec symmetric_spec() {
  return ProcessSpec(MonotoneFunction::linear(0.5),
                     {{1.0, MonotoneFunction::linear(0.5)},
                      {-1.0, MonotoneFunction::linear(0.5)}});
}

}  // namespace

TEST_CASE("monotone function catalog values and inverses") {
  const MonotoneFunction lin = MonotoneFunction::linear(2.0);
  CHECK(lin.value(0.0) == 0.0);
  CHECK(lin.value(1.5) == 3.0);
  CHECK(lin.inverse(3.0) == doctest::Approx(1.5));

  const MonotoneFunction pow2 = MonotoneFunction::power(1.0, 2.0);
  CHECK(pow2.value(0.5) == doctest::Approx(0.25));
  CHECK(pow2.inverse(0.25) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)MonotoneFunction::power(1.0, 0.5), std::invalid_argument);

  const MonotoneFunction zero = MonotoneFunction::zero();
  CHECK(zero.is_zero());
  CHECK(zero.value(10.0) == 0.0);
  CHECK(zero.inverse(0.5) == std::numeric_limits<double>::infinity());
  CHECK(zero.inverse(0.0) == 0.0);
}

TEST_CASE("piecewise-linear table with a flat segment") {
  const MonotoneFunction pw =
      MonotoneFunction::piecewise_linear({0.0, 0.25, 0.5, 1.0}, {0.0, 0.5, 0.5, 1.5});
  CHECK(pw.value(0.125) == doctest::Approx(0.25));
  CHECK(pw.value(0.4) == doctest::Approx(0.5));   // inside the flat part
  CHECK(pw.value(0.75) == doctest::Approx(1.0));
  CHECK(pw.value(2.0) == doctest::Approx(3.5));   // extrapolates last slope

  // Generalized inverse: the flat level resolves to its first hitting time.
  CHECK(pw.inverse(0.25) == doctest::Approx(0.125));
  CHECK(pw.inverse(0.5) == doctest::Approx(0.25));
  CHECK(pw.inverse(1.0) == doctest::Approx(0.75));
  CHECK(pw.inverse(3.5) == doctest::Approx(2.0));  // beyond the table

  CHECK_THROWS_AS(
      (void)MonotoneFunction::piecewise_linear({0.5, 1.0}, {0.0, 1.0}),
      std::invalid_argument);
  CHECK_THROWS_AS((void)MonotoneFunction::piecewise_linear({0.0, 1.0}, {0.0}),
                  std::invalid_argument);
}

TEST_CASE("monotone function JSON round trip") {
  for (const MonotoneFunction& f :
       {MonotoneFunction::zero(), MonotoneFunction::linear(0.7),
        MonotoneFunction::power(2.0, 3.0),
        MonotoneFunction::piecewise_linear({0.0, 1.0}, {0.0, 2.0})}) {
    CHECK(MonotoneFunction::from_json(f.to_json()) == f);
  }
  CHECK_THROWS_AS((void)MonotoneFunction::from_json({{"kind", "spline"}}),
                  std::invalid_argument);
}

TEST_CASE("process spec construction invariants") {
  CHECK_THROWS_AS(ProcessSpec(MonotoneFunction::zero(), {}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessSpec(MonotoneFunction::zero(), {{0.0, MonotoneFunction::linear(1.0)}}),
                  std::invalid_argument);
  CHECK(cox_spec(MonotoneFunction::linear(1.0)).pure_jump());
  CHECK_FALSE(symmetric_spec().pure_jump());
}

TEST_CASE("process spec JSON round trip") {
  const ProcessSpec spec = symmetric_spec();
  const ProcessSpec back = ProcessSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(back.atoms().size() == 2);
}

TEST_CASE("cumulant functions in closed form") {
  const ProcessSpec cox = cox_spec(MonotoneFunction::power(1.0, 2.0));
  for (unsigned n = 2; n <= 8; ++n) {
    for (double t : {0.0, 0.3, 1.0}) {
      // Unit jumps: every cumulant function equals the intensity itself.
      CHECK(addmart::cumulant_fn(cox, n, t) == doctest::Approx(t * t).epsilon(1e-15));
    }
  }

  const ProcessSpec gaussian(MonotoneFunction::linear(1.0), {});
  CHECK(addmart::cumulant_fn(gaussian, 2, 0.7) == doctest::Approx(0.7));
  CHECK(addmart::cumulant_fn(gaussian, 3, 0.7) == 0.0);
  CHECK(addmart::cumulant_fn(gaussian, 6, 0.7) == 0.0);

  const ProcessSpec symmetric = symmetric_spec();
  CHECK(addmart::cumulant_fn(symmetric, 2, 1.0) == doctest::Approx(1.5));  // t + sigma2(t)
  CHECK(addmart::cumulant_fn(symmetric, 3, 1.0) == doctest::Approx(0.0));
  CHECK(addmart::cumulant_fn(symmetric, 4, 1.0) == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)addmart::cumulant_fn(cox, 1, 1.0), std::domain_error);
  CHECK(addmart::cumulant_fn(cox, 5, 0.0) == 0.0);
}

TEST_CASE("validation accepts the catalog and flags violations") {
  const auto ok = addmart::validate(cox_spec(MonotoneFunction::power(1.0, 2.0)), 1.0, 1000);
  CHECK(ok.ok);
  CHECK(ok.issues.empty());

  // A step encoded as a zero-width piecewise segment is a continuity break.
  const auto step = addmart::validate(
      cox_spec(MonotoneFunction::piecewise_linear({0.0, 0.5, 0.5, 1.0}, {0.0, 0.0, 1.0, 1.0})),
      1.0, 1000);
  CHECK_FALSE(step.ok);
  REQUIRE_FALSE(step.issues.empty());
  CHECK(step.issues[0].message == "continuity violation");

  const auto decreasing = addmart::validate(
      cox_spec(MonotoneFunction::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 1.0, 0.5})), 1.0, 1000);
  CHECK_FALSE(decreasing.ok);
  REQUIRE_FALSE(decreasing.issues.empty());
  CHECK(decreasing.issues[0].message == "monotonicity violation");

  // Symmetric spec: even orders pass, odd orders are noted as vanishing.
  const auto sym = addmart::validate(symmetric_spec(), 1.0, 1000);
  CHECK(sym.ok);
  bool f3_note = false;
  for (const auto& note : sym.notes) f3_note = f3_note || note.find("F_3") == 0;
  CHECK(f3_note);
}

TEST_CASE("harmonic polynomial coefficients") {
  const ProcessSpec cox = cox_spec(MonotoneFunction::power(1.0, 2.0));
  const double t = 0.8;
  const double lambda = t * t;

  const auto c1 = addmart::harmonic_coefficients(cox, 1, t);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0] == 0.0);
  CHECK(c1[1] == 1.0);

  const auto c2 = addmart::harmonic_coefficients(cox, 2, t);
  REQUIRE(c2.size() == 3);
  CHECK(c2[0] == doctest::Approx(-lambda).epsilon(1e-14));
  CHECK(c2[1] == 0.0);
  CHECK(c2[2] == 1.0);

  // g_3(x, t) = x^3 - 3 F_2 x - F_3.
  const auto c3 = addmart::harmonic_coefficients(cox, 3, t);
  REQUIRE(c3.size() == 4);
  CHECK(c3[0] == doctest::Approx(-lambda).epsilon(1e-14));
  CHECK(c3[1] == doctest::Approx(-3.0 * lambda).epsilon(1e-14));
  CHECK(c3[2] == 0.0);
  CHECK(c3[3] == 1.0);

  // At t = 0 every F vanishes, so g_n(x, 0) = x^n.
  for (unsigned n = 1; n <= 6; ++n) {
    const auto c = addmart::harmonic_coefficients(cox, n, 0.0);
    for (unsigned j = 0; j < n; ++j) CHECK(c[j] == 0.0);
    CHECK(c[n] == 1.0);
  }
}
