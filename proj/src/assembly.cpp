#include "posfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseLU>

namespace posfem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int n, const Triplets& triplets) {
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

MidpointValues midpoint_values(const TriMesh& mesh, const FeField& u) {
  const auto& tri = mesh.triangles();
  MidpointValues out(mesh.num_triangles(), 3);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int q = 0; q < 3; ++q) {
      out(k, q) = 0.5 * (u[tri(k, (q + 1) % 3)] + u[tri(k, (q + 2) % 3)]);
    }
  }
  return out;
}

std::pair<MidpointValues, MidpointValues> midpoint_coordinates(const TriMesh& mesh) {
  return {midpoint_values(mesh, mesh.nodes().col(0)), midpoint_values(mesh, mesh.nodes().col(1))};
}

SparseMatrix assemble_weighted_mass(const TriMesh& mesh, const MidpointValues& c) {
  const auto& tri = mesh.triangles();
  Triplets t;
  t.reserve(9 * mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    // phi_i = 1/2 at both midpoints adjacent to vertex i, 0 at the opposite one
    const double s = mesh.area(k) / 12.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        if (i == j) {
          v = s * (c(k, (i + 1) % 3) + c(k, (i + 2) % 3));
        } else {
          v = s * c(k, 3 - i - j);
        }
        t.emplace_back(tri(k, i), tri(k, j), v);
      }
    }
  }
  return from_triplets(mesh.num_nodes(), t);
}

SparseMatrix assemble_mass(const TriMesh& mesh) {
  return assemble_weighted_mass(mesh, MidpointValues::Ones(mesh.num_triangles(), 3));
}

SparseMatrix assemble_stiffness_elementwise(const TriMesh& mesh, const Eigen::VectorXd& triangle_means) {
  const auto& tri = mesh.triangles();
  Triplets t;
  t.reserve(9 * mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto& g = mesh.basis_gradients(k);
    const Eigen::Matrix3d local = (mesh.area(k) * triangle_means[k]) * (g * g.transpose());
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.emplace_back(tri(k, i), tri(k, j), local(i, j));
    }
  }
  return from_triplets(mesh.num_nodes(), t);
}

SparseMatrix assemble_stiffness(const TriMesh& mesh, double weight) {
  return assemble_stiffness_elementwise(mesh, Eigen::VectorXd::Constant(mesh.num_triangles(), weight));
}

SparseMatrix assemble_stiffness(const TriMesh& mesh, const FeField& weight) {
  return assemble_stiffness_elementwise(mesh, midpoint_values(mesh, weight).rowwise().mean().matrix());
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const MidpointValues& s) {
  const auto& tri = mesh.triangles();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double w = mesh.area(k) / 6.0;
    for (int i = 0; i < 3; ++i) b[tri(k, i)] += w * (s(k, (i + 1) % 3) + s(k, (i + 2) % 3));
  }
  return b;
}

double integrate_p1(const TriMesh& mesh, const FeField& u) {
  const auto& tri = mesh.triangles();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    sum += mesh.area(k) * (u[tri(k, 0)] + u[tri(k, 1)] + u[tri(k, 2)]) / 3.0;
  }
  return sum;
}

Eigen::VectorXd lumped_mass(const TriMesh& mesh) {
  const auto& tri = mesh.triangles();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int i = 0; i < 3; ++i) m[tri(k, i)] += mesh.area(k) / 3.0;
  }
  return m;
}

double l2_norm(const TriMesh& mesh, const FeField& u) {
  const auto& tri = mesh.triangles();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double a = u[tri(k, 0)], b = u[tri(k, 1)], c = u[tri(k, 2)];
    sum += mesh.area(k) / 6.0 * (a * a + b * b + c * c + a * b + b * c + c * a);
  }
  return std::sqrt(std::max(sum, 0.0));
}

BlockSystem apply_dof_constraints(BlockSystem system, const std::map<int, double>& dof_values) {
  if (dof_values.empty()) return system;
  const int n = static_cast<int>(system.matrix.rows());
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, value] : dof_values) {
    fixed[dof] = 1;
    g[dof] = value;
  }
  // move known columns to the right-hand side
  system.rhs -= system.matrix * g;
  system.matrix.prune([&](Eigen::Index row, Eigen::Index col, double) { return !fixed[row] && !fixed[col]; });
  Triplets unit;
  for (const auto& [dof, value] : dof_values) {
    unit.emplace_back(dof, dof, 1.0);
    system.rhs[dof] = value;
  }
  system.matrix += from_triplets(n, unit);
  system.matrix.makeCompressed();
  return system;
}

BlockSystem apply_dirichlet(BlockSystem system, const DirichletValues& node_values) {
  const int nodes = static_cast<int>(system.matrix.rows() / 2);
  std::map<int, double> dofs;
  for (const auto& [node, values] : node_values) {
    dofs[node] = values.first;
    dofs[nodes + node] = values.second;
  }
  return apply_dof_constraints(std::move(system), dofs);
}

struct LinearSolver::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  SparseMatrix matrix;
  std::vector<int> outer;
  std::vector<int> inner;
  bool analysed = false;

  bool same_pattern(const SparseMatrix& m) const {
    if (!analysed || m.rows() != matrix.rows() || m.nonZeros() != static_cast<Eigen::Index>(inner.size())) {
      return false;
    }
    return std::equal(outer.begin(), outer.end(), m.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), m.innerIndexPtr());
  }
};

LinearSolver::LinearSolver(double rel_tol) : impl_(std::make_unique<Impl>()), rel_tol_(rel_tol) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw SolverError("matrix is not square", std::numeric_limits<double>::infinity());
  }
  SparseMatrix m = matrix;
  m.makeCompressed();
  if (!impl_->same_pattern(m)) {
    impl_->lu.analyzePattern(m);
    impl_->outer.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
    impl_->inner.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
    impl_->analysed = true;
  }
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    impl_->analysed = false;
    throw SolverError("sparse LU factorisation failed: " + impl_->lu.lastErrorMessage(),
                      std::numeric_limits<double>::infinity());
  }
  impl_->matrix = std::move(m);
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs) const {
  if (!rhs.allFinite()) {
    throw SolverError("right-hand side is not finite", std::numeric_limits<double>::infinity());
  }
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  Eigen::VectorXd r = rhs - impl_->matrix * x;
  double rel = r.norm() / bnorm;
  // iterative refinement recovers digits lost to poor scaling
  for (int sweep = 0; sweep < 3 && !(rel <= rel_tol_); ++sweep) {
    x += impl_->lu.solve(r);
    r = rhs - impl_->matrix * x;
    rel = r.norm() / bnorm;
  }
  if (!(rel <= rel_tol_)) {
    throw SolverError("linear solve missed the residual tolerance", rel);
  }
  return x;
}

Eigen::VectorXd solve_sparse(const BlockSystem& system, double rel_tol) {
  LinearSolver solver(rel_tol);
  solver.factorize(system.matrix);
  return solver.solve(system.rhs);
}

}  // namespace posfem
