#include "doctest.h"
#include "posfem/schemes.hpp"

#include <random>

#include "oracles.hpp"

using namespace posfem;

namespace {

TriMesh square(int n) { return build_structured(n, n, {-0.5, 0.5, -0.5, 0.5}); }

FeField bump(const TriMesh& m) {
  return interpolate(m, [](double x, double y) { return 0.2 + 0.5 * std::exp(-20.0 * (x * x + y * y)); });
}

SchemeState state(const FeField& prev, const FeField& curr, double dt) {
  return {prev, curr, FeField::Zero(curr.size()), FeField::Zero(curr.size()), dt, 0.0, 1};
}

}  // namespace

TEST_CASE("BDF2 step satisfies its discrete equations") {
  const auto m = square(8);
  Discretization disc(m);
  const FeField u1 = bump(m);
  const FeField u0 = 1.01 * u1;
  PhysicsConfig phys;
  phys.mobility = Mobility::power(1.0);
  phys.gamma = 0.5;
  const double dt = 1e-3;
  const auto sol = bdf2_step(disc, state(u0, u1, dt), phys, BoundaryCondition::natural());

  // f(u) = u is linear, so the extrapolated weight is a P1 field
  const SparseMatrix Kf = assemble_stiffness(m, FeField(2.0 * u1 - u0));
  const SparseMatrix& M = disc.mass();
  const Eigen::VectorXd r1 = M * (3.0 * sol.u_hat - 4.0 * u1 + u0) / (2.0 * dt) + Kf * sol.w;
  const Eigen::VectorXd r2 = M * sol.w - phys.gamma * (disc.stiffness() * sol.u_hat);
  CHECK(r1.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r2.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Euler step satisfies its discrete equations with a quartic energy") {
  const auto m = square(6);
  Discretization disc(m);
  const FeField u = bump(m);
  PhysicsConfig phys;
  phys.mobility = Mobility::constant(2.0);
  phys.energy = FreeEnergy::quartic(1.0, 0.5);
  const double dt = 1e-3;
  const auto sol = euler_start_step(disc, state(u, u, dt), phys, BoundaryCondition::natural());
  const SparseMatrix& M = disc.mass();
  const Eigen::VectorXd r1 = M * (sol.u_hat - u) / dt + 2.0 * (disc.stiffness() * sol.w);
  CHECK(r1.cwiseAbs().maxCoeff() < 1e-8);
  // w = -Laplace u + phi'(u^0) weakly
  const auto [mx, my] = midpoint_coordinates(m);
  const auto uv = midpoint_values(m, u);
  MidpointValues d1 = uv.unaryExpr([&](double v) { return phys.energy.derivatives(v).first; });
  const Eigen::VectorXd r2 = M * sol.w - disc.stiffness() * sol.u_hat - assemble_load(m, d1);
  CHECK(r2.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("steps conserve mass under no-flux conditions") {
  const auto m = square(10);
  Discretization disc(m);
  const FeField u1 = bump(m);
  PhysicsConfig phys;
  phys.mobility = Mobility::power(2.0);
  const double mass = integrate_p1(m, u1);
  const auto e = euler_start_step(disc, state(u1, u1, 1e-3), phys, BoundaryCondition::natural());
  CHECK(integrate_p1(m, e.u_hat) == doctest::Approx(mass).epsilon(1e-12));
  const auto b = bdf2_step(disc, state(u1, e.u_hat, 1e-3), phys, BoundaryCondition::natural());
  CHECK(integrate_p1(m, b.u_hat) == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("constant states are stationary") {
  const auto m = square(5);
  Discretization disc(m);
  const FeField c = FeField::Constant(m.num_nodes(), 0.3);
  PhysicsConfig phys;
  const auto s = bdf2_step(disc, state(c, c, 0.1), phys, BoundaryCondition::natural());
  CHECK((s.u_hat - c).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.w.cwiseAbs().maxCoeff() < 1e-10);

  PhysicsConfig ch;
  ch.mobility = Mobility::degenerate();
  ch.energy = FreeEnergy::logarithmic(0.05, 0.1);
  ch.g_form = true;
  const auto g = ch_gform_step(disc, state(c, c, 0.1), ch, BoundaryCondition::natural());
  CHECK((g.u_hat - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Dirichlet data are imposed") {
  const auto m = square(6);
  Discretization disc(m);
  const FeField u = bump(m);
  BoundaryCondition bc;
  bc.dirichlet = [](double x, double, double t) { return std::pair{x + t, -1.0}; };
  const auto s = bdf2_step(disc, state(u, u, 0.01), PhysicsConfig{}, bc);
  for (int j : m.boundary_nodes()) {
    CHECK(s.u_hat[j] == doctest::Approx(m.node(j).x() + 0.01));
    CHECK(s.w[j] == doctest::Approx(-1.0));
  }
}

TEST_CASE("source load matches quadrature of a linear source") {
  const auto m = square(4);
  Discretization disc(m);
  const Eigen::VectorXd l = disc.source_load([](double x, double y, double t) { return t * (1.0 + x - y); }, 2.0);
  // sum of the load is the integral of the source
  CHECK(l.sum() == doctest::Approx(oracle::integrate(m, [](double x, double y) { return 2.0 * (1.0 + x - y); }, 0)));
}

TEST_CASE("discrete chemical potential") {
  const auto m = square(6);
  Discretization disc(m);
  const FeField u = bump(m);
  PhysicsConfig phys;
  phys.gamma = 2.0;
  const FeField w = discrete_chemical_potential(disc, u, phys);
  CHECK((disc.mass() * w - 2.0 * (disc.stiffness() * u)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Barrett iteration keeps a positive film and conserves mass") {
  const auto m = square(10);
  Discretization disc(m);
  const FeField u1 = interpolate(m, [](double x, double y) {
    return std::max(0.0, 0.1 - x * x - y * y);
  });
  PhysicsConfig phys;
  phys.mobility = Mobility::power(1.0);
  BarrettParams bp;
  bp.varrho = 2000.0;
  bp.eps = 1e-8;
  bp.max_iter = 5000;
  const double mass = integrate_p1(m, u1);
  const auto s = barrett_start_step(disc, state(u1, u1, 1e-5), phys, BoundaryCondition::natural(), bp);
  CHECK(s.iterations >= 1);
  CHECK(integrate_p1(m, s.u) == doctest::Approx(mass).epsilon(1e-7));
  CHECK(s.r.minCoeff() >= 0.0);

  SchemeState st = state(u1, s.u, 1e-5);
  st.w_curr = s.w;
  st.r_curr = s.r;
  const auto s2 = barrett_scheme4_step(disc, st, phys, BoundaryCondition::natural(), bp);
  CHECK(integrate_p1(m, s2.u) == doctest::Approx(mass).epsilon(1e-7));
  CHECK(s2.residual <= bp.eps);

  bp.max_iter = 1;
  CHECK_THROWS_AS(barrett_scheme4_step(disc, st, phys, BoundaryCondition::natural(), bp), NonConvergence);
  PhysicsConfig quartic = phys;
  quartic.energy = FreeEnergy::quartic(1.0, 1.0);
  CHECK_THROWS_AS(barrett_scheme4_step(disc, st, quartic, BoundaryCondition::natural(), bp), std::invalid_argument);
}

TEST_CASE("state size mismatches are rejected") {
  const auto m = square(3);
  Discretization disc(m);
  const FeField u = FeField::Ones(m.num_nodes());
  CHECK_THROWS(bdf2_step(disc, state(FeField::Ones(3), u, 0.1), PhysicsConfig{}, BoundaryCondition::natural()));
}
