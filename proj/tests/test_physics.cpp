#include "doctest.h"
#include "posfem/physics.hpp"

#include <cmath>

#include "oracles.hpp"

using namespace posfem;

TEST_CASE("mobility values and derivatives") {
  CHECK(Mobility::constant(2.5)(0.3) == 2.5);
  CHECK(Mobility::constant(2.5).derivative(0.3) == 0.0);
  CHECK(Mobility::power(1.0)(-0.4) == doctest::Approx(0.4));
  CHECK(Mobility::power(4.0)(0.5) == doctest::Approx(0.0625));
  CHECK(Mobility::degenerate()(0.5) == doctest::Approx(0.75));
  CHECK(Mobility::degenerate()(1.0) == 0.0);
  for (const Mobility& f : {Mobility::power(0.5), Mobility::power(2.0), Mobility::power(4.0), Mobility::degenerate()}) {
    for (double u : {0.1, 0.3, 0.7}) {
      CHECK(f.derivative(u) == doctest::Approx(oracle::d1([&](double v) { return f(v); }, u, 1e-4)).epsilon(1e-8));
    }
  }
  CHECK(Mobility::power(2.0).derivative(0.0) == 0.0);
  CHECK(std::isinf(Mobility::power(0.5).derivative(0.0)));
}

TEST_CASE("free energy derivatives match finite differences") {
  const FreeEnergy q = FreeEnergy::quartic(0.7, 0.9);
  const FreeEnergy lg = FreeEnergy::logarithmic(0.05, 0.1);
  for (const FreeEnergy& e : {q, lg}) {
    for (double u : {-0.8, -0.2, 0.0, 0.45, 0.9}) {
      const auto d = e.derivatives(u);
      CHECK(d.value == doctest::Approx(e.value(u)));
      CHECK(d.first == doctest::Approx(oracle::d1([&](double v) { return e.value(v); }, u, 1e-4)).epsilon(1e-7));
      CHECK(d.second ==
            doctest::Approx(oracle::d1([&](double v) { return e.derivatives(v).first; }, u, 1e-4)).epsilon(1e-7));
    }
  }
  CHECK(q.value(0.9) == doctest::Approx(0.0));
  CHECK(FreeEnergy::none().derivatives(0.3).first == 0.0);
}

TEST_CASE("logarithmic energy at the pure phases") {
  const FreeEnergy lg = FreeEnergy::logarithmic(0.05, 0.1);
  // 0 log 0 = 0, and (1 + 1) log(2 / 2) = 0
  CHECK(lg.value(1.0) == doctest::Approx(0.0));
  CHECK(lg.value(-1.0) == doctest::Approx(0.0));
  CHECK(lg.value(0.0) == doctest::Approx(0.05 * std::log(0.5) + 0.05));
  CHECK_THROWS_AS(lg.derivatives(1.0), std::domain_error);
  CHECK_THROWS_AS(lg.value(1.5), std::domain_error);
}

TEST_CASE("g equals mobility times the second derivative of the energy") {
  const FreeEnergy lg = FreeEnergy::logarithmic(0.05, 0.1);
  for (double u : {-0.95, -0.3, 0.0, 0.6, 0.99}) {
    CHECK(g_eval(0.05, 0.1, u) == doctest::Approx(Mobility::degenerate()(u) * lg.derivatives(u).second));
  }
  CHECK(g_eval(0.05, 0.1, 1.0) == doctest::Approx(0.05));
}

TEST_CASE("kind names round trip") {
  for (auto k : {Mobility::Kind::constant, Mobility::Kind::power, Mobility::Kind::degenerate}) {
    CHECK(parse_mobility_kind(to_string(k)) == k);
  }
  for (auto k : {FreeEnergy::Kind::null, FreeEnergy::Kind::quartic, FreeEnergy::Kind::logarithmic}) {
    CHECK(parse_energy_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_mobility_kind("linear"), std::invalid_argument);
  CHECK_THROWS_AS(parse_energy_kind("flory"), std::invalid_argument);
}
