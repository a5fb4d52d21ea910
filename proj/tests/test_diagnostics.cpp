#include "doctest.h"
#include "posfem/diagnostics.hpp"

#include <cmath>

#include "oracles.hpp"
#include "posfem/assembly.hpp"

using namespace posfem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("seven-point rule integrates degree-5 monomials exactly") {
  // reference triangle (0,0), (1,0), (0,1): integral x^a y^b = a! b! / (a + b + 2)!
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      double q = 0.0;
      for (const auto& p : triangle_rule7()) {
        const double x = p.barycentric[1], y = p.barycentric[2];
        q += 0.5 * p.weight * std::pow(x, a) * std::pow(y, b);
      }
      CHECK(q == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2)).epsilon(1e-13));
    }
  double w = 0.0;
  for (const auto& p : triangle_rule7()) w += p.weight;
  CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("error norms against smooth references") {
  const auto m = build_structured(8, 8, {0.0, 1.0, 0.0, 1.0});
  auto lin = [](double x, double y) { return 2.0 * x - y; };
  auto glin = [](double, double) { return Eigen::Vector2d(2.0, -1.0); };
  const FeField u = interpolate(m, lin);
  const auto e = error_norms(m, u, lin, glin);
  CHECK(e.l2 < 1e-14);
  CHECK(*e.h1 < 1e-13);
  CHECK_FALSE(error_norms(m, u, lin).h1);

  auto g = [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); };
  const FeField z = FeField::Zero(m.num_nodes());
  const double ref = std::sqrt(oracle::integrate(m, [&](double x, double y) { return g(x, y) * g(x, y); }, 5));
  CHECK(error_norms(m, z, g).l2 == doctest::Approx(ref).epsilon(1e-4));

  const auto ie = interpolant_errors(m, u, lin, glin);
  CHECK(ie.l2 < 1e-14);
  CHECK(*ie.h1 < 1e-13);
  // with a zero field the interpolant error is the norm of the interpolant
  const FeField gi = interpolate(m, g);
  CHECK(interpolant_errors(m, z, g).l2 == doctest::Approx(l2_norm(m, gi)));
}

TEST_CASE("finite element difference norms") {
  const auto m = build_structured(4, 4, {0.0, 1.0, 0.0, 1.0});
  const FeField a = interpolate(m, [](double x, double y) { return x + y; });
  const FeField b = FeField::Zero(m.num_nodes());
  const auto d = fe_difference(m, a, b);
  CHECK(*d.h1 == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.l2 == doctest::Approx(std::sqrt(7.0 / 6.0)));
}

TEST_CASE("energy and mass error") {
  const auto m = build_structured(6, 6, {0.0, 1.0, 0.0, 1.0});
  const FeField x = interpolate(m, [](double x, double) { return x; });
  PhysicsConfig p;
  p.gamma = 3.0;
  CHECK(discrete_energy(m, x, p) == doctest::Approx(1.5));
  p.energy = FreeEnergy::quartic(1.0, 1.0);
  const FeField c = FeField::Constant(m.num_nodes(), 0.5);
  CHECK(discrete_energy(m, c, p) == doctest::Approx(0.5625));

  const auto rel = relative_mass_error(m, c, 0.4);
  CHECK(rel.value == doctest::Approx(0.25));
  CHECK_FALSE(rel.absolute);
  const auto abs = relative_mass_error(m, c, 0.0);
  CHECK(abs.absolute);
  CHECK(abs.value == doctest::Approx(0.5));
}

TEST_CASE("run diagnostics bookkeeping") {
  RunDiagnostics d;
  d.append({0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0});
  d.append({0.1, 1.0, 0.0, 0.0, 0.0, 1.0, 4});
  d.append({0.2, 1.0, 0.0, 0.0, 0.0, 1.0, 2});
  CHECK(d.mean_iterations() == doctest::Approx(3.0));
  CHECK_THROWS_AS(d.append({0.2, 1.0, 0.0, 0.0, 0.0, 1.0, 2}), std::logic_error);
}

TEST_CASE("level set of a linear field is a straight line") {
  const auto m = build_structured(5, 4, {0.0, 1.0, 0.0, 2.0});
  const FeField u = interpolate(m, [](double x, double) { return x; });
  const auto segs = extract_level_set(m, u, 0.33);
  double length = 0.0;
  for (const auto& s : segs) {
    CHECK(s.a.x() == doctest::Approx(0.33));
    CHECK(s.b.x() == doctest::Approx(0.33));
    length += (s.b - s.a).norm();
  }
  CHECK(length == doctest::Approx(2.0));
  CHECK(extract_level_set(m, u, 5.0).empty());
}

TEST_CASE("support and one-ring") {
  const auto m = build_structured(4, 4, {0.0, 1.0, 0.0, 1.0}, Diagonal::uniform);
  FeField u = FeField::Zero(m.num_nodes());
  u[12] = 1.0;  // centre node
  u[0] = 1e-9;
  const auto s = support_nodes(u);
  CHECK(s == std::vector<int>{12});
  const auto ring = with_one_ring(m, s);
  CHECK(ring.size() == 7u);
  CHECK(std::is_sorted(ring.begin(), ring.end()));
  CHECK_THROWS_AS(support_nodes(u, 0.0), std::invalid_argument);
}
