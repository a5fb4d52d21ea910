#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

#include "posfem/assembly.hpp"
#include "posfem/mesh.hpp"
#include "posfem/physics.hpp"

namespace posfem {

/// Time-stepper memory.
struct SchemeState {
  FeField u_prev;  ///< u^{n-1}
  FeField u_curr;  ///< u^n
  FeField w_curr;  ///< w^n
  FeField r_curr;  ///< multiplier field of the Barrett iteration
  double dt = 0.0;
  double t = 0.0;  ///< t_n
  int step_index = 0;
};

/// Manufactured right-hand side S(x, y, t) of the first equation.
using SourceFn = std::function<double(double, double, double)>;

/// Boundary data. Without a Dirichlet callback the natural (no-flux)
/// conditions apply.
struct BoundaryCondition {
  std::function<std::pair<double, double>(double, double, double)> dirichlet;

  bool is_dirichlet() const { return static_cast<bool>(dirichlet); }
  DirichletValues values(const TriMesh& mesh, double t) const;

  static BoundaryCondition natural() { return {}; }
};

/// Mesh together with the constant matrices every step needs and the
/// linear-solver cache reused from step to step.
class Discretization {
 public:
  explicit Discretization(const TriMesh& mesh, double solver_tol = 1e-10);

  const TriMesh& mesh() const { return *mesh_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const MidpointValues& mid_x() const { return mid_x_; }
  const MidpointValues& mid_y() const { return mid_y_; }
  LinearSolver& solver() { return solver_; }

  /// Load vector of the source at time t (midpoint rule).
  Eigen::VectorXd source_load(const SourceFn& source, double t) const;

 private:
  const TriMesh* mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  MidpointValues mid_x_;
  MidpointValues mid_y_;
  LinearSolver solver_;
};

/// Unconstrained candidate of a step.
struct CoupledSolution {
  FeField u_hat;
  FeField w;
};

/// Semi-implicit backward Euler starting step: mobility frozen at u^0, phi'(u^0)
/// explicit. With physics.g_form the g-term is treated like in ch_gform_step.
CoupledSolution euler_start_step(Discretization& disc, const SchemeState& state, const PhysicsConfig& physics,
                                 const BoundaryCondition& bc, const SourceFn& source = {});

/// BDF2 step with extrapolated mobility 2f(u^n) - f(u^{n-1}) and the energy
/// linearised about u^n.
CoupledSolution bdf2_step(Discretization& disc, const SchemeState& state, const PhysicsConfig& physics,
                          const BoundaryCondition& bc, const SourceFn& source = {});

/// BDF2 step of the singularity-free Cahn-Hilliard form: extra diffusion with
/// the extrapolated weight 2g(u^n) - g(u^{n-1}) and w = -gamma Delta u.
CoupledSolution ch_gform_step(Discretization& disc, const SchemeState& state, const PhysicsConfig& physics,
                              const BoundaryCondition& bc);

/// Discrete auxiliary variable of a given u: M w = gamma K u + (phi'(u), q).
FeField discrete_chemical_potential(Discretization& disc, const FeField& u, const PhysicsConfig& physics);

struct BarrettParams {
  double varrho = 3500.0;
  double eps = 1e-10;
  int max_iter = 500;
};

struct BarrettResult {
  FeField u;
  FeField w;
  FeField r;
  int iterations = 0;
  double residual = 0.0;  ///< last ||u^k - u^{k-1}||_L2
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, FeField last_iterate, double residual, int iterations)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const FeField& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  FeField last_iterate_;
  double residual_;
  int iterations_;
};

/// Second-order Barrett-type step for the thin-film equation: inner iteration
/// with the constant coefficient f_max^n, a lagged correction of the
/// mobility, and the nodal multiplier update r <- [r - varrho u]_+.
/// Requires the null free energy. Throws NonConvergence after max_iter sweeps.
BarrettResult barrett_scheme4_step(Discretization& disc, const SchemeState& state, const PhysicsConfig& physics,
                                   const BoundaryCondition& bc, const BarrettParams& params,
                                   const SourceFn& source = {});

/// First-order (backward Euler) version of the same inner iteration, used
/// for the starting step.
BarrettResult barrett_start_step(Discretization& disc, const SchemeState& state, const PhysicsConfig& physics,
                                 const BoundaryCondition& bc, const BarrettParams& params,
                                 const SourceFn& source = {});

}  // namespace posfem
