#include "posfem/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace posfem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append_block(Triplets& t, const SparseMatrix& m, int row0, int col0, double scale = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
    }
  }
}

// [A B; C D] with square N x N blocks
SparseMatrix block_matrix(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                          const SparseMatrix& d) {
  const int n = static_cast<int>(a.rows());
  Triplets t;
  t.reserve(a.nonZeros() + b.nonZeros() + c.nonZeros() + d.nonZeros());
  append_block(t, a, 0, 0);
  append_block(t, b, 0, n);
  append_block(t, c, n, 0);
  append_block(t, d, n, n);
  SparseMatrix m(2 * n, 2 * n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

template <typename F>
MidpointValues map_midpoints(const MidpointValues& v, F&& f) {
  return v.unaryExpr(std::forward<F>(f));
}

Eigen::VectorXd triangle_means(const MidpointValues& v) { return v.rowwise().mean().matrix(); }

// stiffness weighted by 2 h(u^n) - h(u^{n-1}) at the quadrature points
template <typename H>
SparseMatrix extrapolated_stiffness(const Discretization& disc, const SchemeState& s, H&& h) {
  const MidpointValues now = map_midpoints(midpoint_values(disc.mesh(), s.u_curr), h);
  const MidpointValues before = map_midpoints(midpoint_values(disc.mesh(), s.u_prev), h);
  return assemble_stiffness_elementwise(disc.mesh(), triangle_means(2.0 * now - before));
}

struct Solved {
  FeField u;
  FeField w;
};

Solved solve_block(Discretization& disc, BlockSystem system, const BoundaryCondition& bc, double t_new) {
  if (bc.is_dirichlet()) system = apply_dirichlet(std::move(system), bc.values(disc.mesh(), t_new));
  disc.solver().factorize(system.matrix);
  const Eigen::VectorXd x = disc.solver().solve(system.rhs);
  const int n = disc.mesh().num_nodes();
  return {x.head(n), x.tail(n)};
}

void check_state(const SchemeState& s, int nodes) {
  if (!(s.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (s.u_curr.size() != nodes) throw std::invalid_argument("u^n does not match the mesh");
  if (!s.u_curr.allFinite()) throw std::invalid_argument("u^n is not finite");
}

void check_previous(const SchemeState& s, int nodes) {
  if (s.u_prev.size() != nodes) throw std::invalid_argument("u^{n-1} does not match the mesh");
  if (!s.u_prev.allFinite()) throw std::invalid_argument("u^{n-1} is not finite");
}

}  // namespace

DirichletValues BoundaryCondition::values(const TriMesh& mesh, double t) const {
  DirichletValues out;
  if (!dirichlet) return out;
  for (int j : mesh.boundary_nodes()) {
    const auto x = mesh.node(j);
    out.emplace(j, dirichlet(x[0], x[1], t));
  }
  return out;
}

Discretization::Discretization(const TriMesh& mesh, double solver_tol)
    : mesh_(&mesh),
      mass_(assemble_mass(mesh)),
      stiffness_(assemble_stiffness(mesh)),
      solver_(solver_tol) {
  auto [x, y] = midpoint_coordinates(mesh);
  mid_x_ = std::move(x);
  mid_y_ = std::move(y);
}

Eigen::VectorXd Discretization::source_load(const SourceFn& source, double t) const {
  MidpointValues s(mid_x_.rows(), 3);
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    for (int q = 0; q < 3; ++q) s(k, q) = source(mid_x_(k, q), mid_y_(k, q), t);
  }
  return assemble_load(*mesh_, s);
}

CoupledSolution euler_start_step(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                                 const BoundaryCondition& bc, const SourceFn& source) {
  const TriMesh& mesh = disc.mesh();
  check_state(s, mesh.num_nodes());
  const double dt = s.dt;
  const double t_new = s.t + dt;
  const SparseMatrix& M = disc.mass();
  const SparseMatrix& K = disc.stiffness();
  const MidpointValues u0 = midpoint_values(mesh, s.u_curr);

  const auto f = physics.mobility;
  const SparseMatrix Kf = assemble_stiffness_elementwise(mesh, triangle_means(map_midpoints(u0, f)));

  // first equation scaled by dt
  SparseMatrix top_left = M;
  Eigen::VectorXd rhs_u = M * s.u_curr;
  if (source) rhs_u += dt * disc.source_load(source, t_new);
  Eigen::VectorXd rhs_w;
  if (physics.g_form) {
    const auto& e = physics.energy;
    const MidpointValues g = map_midpoints(u0, [&](double v) { return g_eval(e.theta, e.theta_c, v); });
    top_left += dt * assemble_stiffness_elementwise(mesh, triangle_means(g));
    rhs_w = Eigen::VectorXd::Zero(mesh.num_nodes());
  } else {
    const auto& e = physics.energy;
    rhs_w = assemble_load(mesh, map_midpoints(u0, [&](double v) { return e.derivatives(v).first; }));
  }

  BlockSystem system{block_matrix(top_left, dt * Kf, -physics.gamma * K, M), Eigen::VectorXd(2 * mesh.num_nodes())};
  system.rhs << rhs_u, rhs_w;
  auto [u, w] = solve_block(disc, std::move(system), bc, t_new);
  return {std::move(u), std::move(w)};
}

CoupledSolution bdf2_step(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                          const BoundaryCondition& bc, const SourceFn& source) {
  if (physics.g_form) return ch_gform_step(disc, s, physics, bc);
  const TriMesh& mesh = disc.mesh();
  check_state(s, mesh.num_nodes());
  check_previous(s, mesh.num_nodes());
  const double c = 2.0 * s.dt / 3.0;
  const double t_new = s.t + s.dt;
  const SparseMatrix& M = disc.mass();
  const SparseMatrix& K = disc.stiffness();

  const SparseMatrix Kf = extrapolated_stiffness(disc, s, physics.mobility);

  // first equation multiplied by 2 dt / 3
  Eigen::VectorXd rhs_u = M * ((4.0 * s.u_curr - s.u_prev) / 3.0);
  if (source) rhs_u += c * disc.source_load(source, t_new);

  // phi'(u) ~ phi'(u^n) + phi''(u^n)(u - u^n)
  const auto& e = physics.energy;
  SparseMatrix bottom_left = -physics.gamma * K;
  Eigen::VectorXd rhs_w = Eigen::VectorXd::Zero(mesh.num_nodes());
  if (e.kind != FreeEnergy::Kind::null) {
    const MidpointValues un = midpoint_values(mesh, s.u_curr);
    MidpointValues d1(un.rows(), 3), d2(un.rows(), 3);
    for (Eigen::Index k = 0; k < un.rows(); ++k) {
      for (int q = 0; q < 3; ++q) {
        const auto d = e.derivatives(un(k, q));
        d1(k, q) = d.first;
        d2(k, q) = d.second;
      }
    }
    bottom_left -= assemble_weighted_mass(mesh, d2);
    rhs_w = assemble_load(mesh, d1 - d2 * un);
  }

  BlockSystem system{block_matrix(M, c * Kf, bottom_left, M), Eigen::VectorXd(2 * mesh.num_nodes())};
  system.rhs << rhs_u, rhs_w;
  auto [u, w] = solve_block(disc, std::move(system), bc, t_new);
  return {std::move(u), std::move(w)};
}

CoupledSolution ch_gform_step(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                              const BoundaryCondition& bc) {
  const TriMesh& mesh = disc.mesh();
  check_state(s, mesh.num_nodes());
  check_previous(s, mesh.num_nodes());
  const double c = 2.0 * s.dt / 3.0;
  const double t_new = s.t + s.dt;
  const SparseMatrix& M = disc.mass();
  const SparseMatrix& K = disc.stiffness();
  const auto& e = physics.energy;

  const SparseMatrix Kf = extrapolated_stiffness(disc, s, physics.mobility);
  const SparseMatrix Kg =
      extrapolated_stiffness(disc, s, [&](double v) { return g_eval(e.theta, e.theta_c, v); });

  BlockSystem system{block_matrix(SparseMatrix(M + c * Kg), c * Kf, -physics.gamma * K, M),
                     Eigen::VectorXd(2 * mesh.num_nodes())};
  system.rhs << M * ((4.0 * s.u_curr - s.u_prev) / 3.0), Eigen::VectorXd::Zero(mesh.num_nodes());
  auto [u, w] = solve_block(disc, std::move(system), bc, t_new);
  return {std::move(u), std::move(w)};
}

FeField discrete_chemical_potential(Discretization& disc, const FeField& u, const PhysicsConfig& physics) {
  const TriMesh& mesh = disc.mesh();
  Eigen::VectorXd rhs = physics.gamma * (disc.stiffness() * u);
  if (!physics.g_form && physics.energy.kind != FreeEnergy::Kind::null) {
    const auto& e = physics.energy;
    rhs += assemble_load(mesh,
                         map_midpoints(midpoint_values(mesh, u), [&](double v) { return e.derivatives(v).first; }));
  }
  LinearSolver solver(disc.solver().rel_tol());
  solver.factorize(disc.mass());
  return solver.solve(rhs);
}

namespace {

// Shared inner loop of the Barrett-type schemes. The first equation reads
//   M u^k + c f_max K w^k = rhs0 + c (f_max K - K_f) w^{k-1}
// and the second
//   -gamma K u^k + M w^k = -M r^{k-1}.
BarrettResult barrett_iterate(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                              const BoundaryCondition& bc, const BarrettParams& params, double c, double f_max,
                              const SparseMatrix& Kf, const Eigen::VectorXd& rhs0, double t_new) {
  if (physics.energy.kind != FreeEnergy::Kind::null) {
    throw std::invalid_argument("the Barrett scheme is defined for the null free energy only");
  }
  if (!(params.varrho > 0.0)) throw std::invalid_argument("varrho must be positive");
  const TriMesh& mesh = disc.mesh();
  const int n = mesh.num_nodes();
  const SparseMatrix& M = disc.mass();
  const SparseMatrix& K = disc.stiffness();

  BlockSystem base{block_matrix(M, (c * f_max) * K, -physics.gamma * K, M), Eigen::VectorXd::Zero(2 * n)};
  std::map<int, double> dofs;
  if (bc.is_dirichlet()) {
    for (const auto& [node, v] : bc.values(mesh, t_new)) {
      dofs[node] = v.first;
      dofs[n + node] = v.second;
    }
  }
  // Dirichlet rows of the constant matrix; the right-hand side is redone each sweep
  const BlockSystem constrained = apply_dof_constraints(base, dofs);
  disc.solver().factorize(constrained.matrix);

  const SparseMatrix correction = SparseMatrix(f_max * K - Kf) * c;

  BarrettResult out;
  FeField u = s.u_curr;
  FeField w = s.w_curr.size() == n ? s.w_curr : FeField(FeField::Zero(n));
  FeField r = s.r_curr.size() == n ? s.r_curr : FeField(FeField::Zero(n));

  for (int k = 1; k <= params.max_iter; ++k) {
    Eigen::VectorXd rhs(2 * n);
    rhs << rhs0 + correction * w, -(M * r);
    if (!dofs.empty()) {
      // same elimination as apply_dof_constraints, without rebuilding the matrix
      Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
      for (const auto& [dof, value] : dofs) g[dof] = value;
      rhs -= base.matrix * g;
      for (const auto& [dof, value] : dofs) rhs[dof] = value;
    }
    const Eigen::VectorXd x = disc.solver().solve(rhs);
    const FeField u_new = x.head(n);
    const double change = l2_norm(mesh, u_new - u);
    u = u_new;
    w = x.tail(n);
    r = (r - params.varrho * u).cwiseMax(0.0);
    out.iterations = k;
    out.residual = change;
    if (!std::isfinite(change)) break;
    if (change <= params.eps) {
      out.u = std::move(u);
      out.w = std::move(w);
      out.r = std::move(r);
      return out;
    }
  }
  throw NonConvergence("Barrett inner iteration did not converge", u, out.residual, out.iterations);
}

}  // namespace

BarrettResult barrett_scheme4_step(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                                   const BoundaryCondition& bc, const BarrettParams& params,
                                   const SourceFn& source) {
  const TriMesh& mesh = disc.mesh();
  check_state(s, mesh.num_nodes());
  check_previous(s, mesh.num_nodes());
  const double c = 2.0 * s.dt / 3.0;
  const double t_new = s.t + s.dt;
  const auto& f = physics.mobility;

  double f_max = 0.0;
  for (Eigen::Index j = 0; j < s.u_curr.size(); ++j) {
    f_max = std::max(f_max, std::abs(2.0 * f(s.u_curr[j]) - f(s.u_prev[j])));
  }
  const SparseMatrix Kf = extrapolated_stiffness(disc, s, f);
  Eigen::VectorXd rhs0 = disc.mass() * ((4.0 * s.u_curr - s.u_prev) / 3.0);
  if (source) rhs0 += c * disc.source_load(source, t_new);
  return barrett_iterate(disc, s, physics, bc, params, c, f_max, Kf, rhs0, t_new);
}

BarrettResult barrett_start_step(Discretization& disc, const SchemeState& s, const PhysicsConfig& physics,
                                 const BoundaryCondition& bc, const BarrettParams& params,
                                 const SourceFn& source) {
  const TriMesh& mesh = disc.mesh();
  check_state(s, mesh.num_nodes());
  const double c = s.dt;
  const double t_new = s.t + s.dt;
  const auto& f = physics.mobility;

  double f_max = 0.0;
  for (Eigen::Index j = 0; j < s.u_curr.size(); ++j) f_max = std::max(f_max, std::abs(f(s.u_curr[j])));
  const SparseMatrix Kf =
      assemble_stiffness_elementwise(mesh, triangle_means(map_midpoints(midpoint_values(mesh, s.u_curr), f)));
  Eigen::VectorXd rhs0 = disc.mass() * s.u_curr;
  if (source) rhs0 += c * disc.source_load(source, t_new);
  return barrett_iterate(disc, s, physics, bc, params, c, f_max, Kf, rhs0, t_new);
}

}  // namespace posfem
