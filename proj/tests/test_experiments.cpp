#include "doctest.h"
#include "posfem/experiments.hpp"

#include "posfem/assembly.hpp"

using namespace posfem;

namespace {

ExperimentSpec small_droplet(int scheme) {
  ExperimentSpec s = droplet_spec();
  s.nx = 6;
  s.ny = 24;
  s.dt = 1e-4;
  s.T = 2e-3;
  s.scheme = scheme;
  // the mass multiplier step must stay below 2 / |Omega| for the Uzawa loop to contract
  s.uzawa.rho = s.uzawa.rho_min = 0.25;
  s.snapshot_times = {0.0, 1e-3};
  return s;
}

}  // namespace

TEST_CASE("initial data of the canned cases") {
  const auto tent = tent_initial();
  CHECK(tent(0.5, 0.1) == doctest::Approx(0.05));
  CHECK(tent(0.25, 0.0) == 0.0);
  CHECK(tent(0.8, 0.0) == 0.0);
  CHECK(tent(0.375, 0.0) == doctest::Approx(0.025));
  CHECK(deadcore_initial()(0.5, 0.2) == doctest::Approx(0.001));
  CHECK(deadcore_initial()(0.0, 0.0) == doctest::Approx(0.0625 + 0.001));
  CHECK(droplet_initial(0.1, 2.0, 80.0)(0.0, 0.0) == doctest::Approx(2.1));
}

TEST_CASE("ripening initial data are deterministic and inside (-1, 1)") {
  const Rectangle d{0.0, 1.0, 0.0, 1.0};
  const auto a = ripening_initial(-0.4, 20, 7, d);
  const auto b = ripening_initial(-0.4, 20, 7, d);
  const auto c = ripening_initial(-0.4, 20, 8, d);
  REQUIRE(a.centres.size() == 20u);
  CHECK(a.amplitudes == b.amplitudes);
  CHECK(a.amplitudes != c.amplitudes);
  for (double s : a.amplitudes) CHECK(std::abs(s) <= 0.3);
  const auto big = ripening_initial(0.9, 30, 1, d, 0.9);
  CHECK(big.rescaled);
  const auto m = build_structured(100, 100, d);
  const FeField u = interpolate(m, big.u0);
  CHECK(u.cwiseAbs().maxCoeff() < 1.0);
  CHECK_THROWS_AS(ripening_initial(1.0, 3, 1, d), std::invalid_argument);
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(self_similar_spec(25, 3).validate());
  CHECK_NOTHROW(ripening_spec().validate());
  ExperimentSpec s = droplet_spec();
  s.scheme = 5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = droplet_spec();
  s.dt = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = droplet_spec();
  s.bc = BcKind::dirichlet;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ripening_spec();
  s.scheme = 4;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = self_similar_spec(10, 3);
  s.t0 = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK(self_similar_spec(25, 3).num_steps() == 200);
}

TEST_CASE("reference solutions exist only for closed-form cases") {
  CHECK(reference_solution(self_similar_spec(10, 3)));
  const auto m = reference_solution(manufactured_spec(10, 2, true));
  REQUIRE(m);
  CHECK(static_cast<bool>(m->source));
  CHECK_FALSE(reference_solution(droplet_spec()));
}

TEST_CASE("case and boundary names round trip") {
  for (CaseKind k : {CaseKind::self_similar, CaseKind::manufactured, CaseKind::droplet, CaseKind::tent,
                     CaseKind::deadcore, CaseKind::ripening, CaseKind::constant}) {
    CHECK(parse_case_kind(to_string(k)) == k);
  }
  CHECK(parse_bc_kind("neumann") == BcKind::natural);
  CHECK(parse_bc_kind(to_string(BcKind::dirichlet)) == BcKind::dirichlet);
  CHECK_THROWS(parse_case_kind("blob"));
}

TEST_CASE("short runs keep the film non-negative; schemes 1 and 3 keep the mass") {
  for (int scheme : {1, 2, 3}) {
    CAPTURE(scheme);
    int calls = 0;
    const auto r = run_experiment(small_droplet(scheme), [&](const StepView& v) {
      ++calls;
      CHECK(v.step == calls);
    });
    CHECK(calls == 20);
    CHECK(r.diagnostics.records.size() == 21u);
    CHECK(r.t == doctest::Approx(2e-3));
    CHECK(r.snapshots.size() == 2u);
    CHECK(r.u.minCoeff() >= 0.0);
    if (scheme == 3) {
      for (const auto& rec : r.diagnostics.records) CHECK(rec.rel_mass_error <= 1e-12);
    }
    if (scheme == 1) {
      // mass defect bound of the Uzawa loop
      const auto spec = small_droplet(1);
      const double c2 = uzawa_c2(spec.uzawa, spec.domain.area());
      for (const auto& rec : r.diagnostics.records) CHECK(std::abs(rec.mass - r.initial_mass) <= c2 * spec.eps);
    }
  }
}

TEST_CASE("constant state stays constant") {
  ExperimentSpec s = small_droplet(3);
  s.init.kind = CaseKind::constant;
  s.init.value = 0.4;
  const auto r = run_experiment(s);
  CHECK((r.u.array() - 0.4).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Uzawa diverges when the mass step is too large for the domain") {
  ExperimentSpec s = small_droplet(1);
  s.uzawa.rho = s.uzawa.rho_min = 1.0;
  CHECK_THROWS_AS(run_experiment(s), ExperimentError);
}

TEST_CASE("failures carry the step and the diagnostics so far") {
  ExperimentSpec s = small_droplet(4);
  s.barrett.max_iter = 1;
  try {
    run_experiment(s);
    FAIL("expected a failure");
  } catch (const ExperimentError& e) {
    CHECK(e.step() == 1);
    CHECK(e.diagnostics().records.size() == 1u);
  }
}
