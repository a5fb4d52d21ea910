#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Sparse>

#include "posfem/mesh.hpp"

namespace posfem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Values of some quantity at the three edge midpoints of every triangle.
/// Column k holds the midpoint of the edge opposite local vertex k. The
/// midpoint rule with these points is exact for quadratics.
using MidpointValues = Eigen::Array<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

MidpointValues midpoint_values(const TriMesh& mesh, const FeField& u);

/// Physical coordinates of the edge midpoints: x in first, y in second.
std::pair<MidpointValues, MidpointValues> midpoint_coordinates(const TriMesh& mesh);

/// Consistent P1 mass matrix.
SparseMatrix assemble_mass(const TriMesh& mesh);

/// Mass matrix weighted by c, integrated with the midpoint rule.
SparseMatrix assemble_weighted_mass(const TriMesh& mesh, const MidpointValues& c);

/// Stiffness matrix with a constant weight.
SparseMatrix assemble_stiffness(const TriMesh& mesh, double weight = 1.0);

/// Stiffness matrix weighted by a P1 field (integrated exactly).
SparseMatrix assemble_stiffness(const TriMesh& mesh, const FeField& weight);

/// Stiffness matrix weighted by per-triangle averages of the weight.
/// Gradients of P1 functions are constant per triangle, so the integral of
/// w grad(phi_i).grad(phi_j) only needs the triangle mean of w.
SparseMatrix assemble_stiffness_elementwise(const TriMesh& mesh, const Eigen::VectorXd& triangle_means);

/// Load vector of the integrals of s phi_i, midpoint rule.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const MidpointValues& s);

/// Exact integral of a P1 function.
double integrate_p1(const TriMesh& mesh, const FeField& u);

/// Lumped mass weights m_j: one third of the area of each adjacent triangle.
/// Sum_j m_j u_j equals integrate_p1(u) exactly.
Eigen::VectorXd lumped_mass(const TriMesh& mesh);

/// Exact L2 norm of a P1 function.
double l2_norm(const TriMesh& mesh, const FeField& u);

/// Coupled 2N x 2N system, u-block first then w-block.
struct BlockSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Dirichlet data per node: prescribed (u, w).
using DirichletValues = std::map<int, std::pair<double, double>>;

/// Replace constrained rows by identity rows and eliminate the constrained
/// columns into the right-hand side.
BlockSystem apply_dirichlet(BlockSystem system, const DirichletValues& node_values);

/// Constrain arbitrary degrees of freedom (row = column index into the system).
BlockSystem apply_dof_constraints(BlockSystem system, const std::map<int, double>& dof_values);

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Sparse LU with a cached symbolic analysis. The numeric factorisation is
/// redone by factorize(); solve() may then be called for many right-hand
/// sides. Every solve is checked against the relative residual tolerance.
class LinearSolver {
 public:
  explicit LinearSolver(double rel_tol = 1e-10);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseMatrix& matrix);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  double rel_tol() const { return rel_tol_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double rel_tol_;
};

/// One-shot solve with the residual contract ||Ax - b|| <= rel_tol ||b||.
Eigen::VectorXd solve_sparse(const BlockSystem& system, double rel_tol = 1e-10);

}  // namespace posfem
