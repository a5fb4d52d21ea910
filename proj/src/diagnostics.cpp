#include "posfem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "posfem/assembly.hpp"

namespace posfem {

void RunDiagnostics::append(const StepRecord& record) {
  if (!records.empty() && !(record.t > records.back().t)) {
    throw std::logic_error("diagnostic records must have increasing time");
  }
  records.push_back(record);
}

double RunDiagnostics::mean_iterations() const {
  if (records.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) sum += records[i].iterations;
  return sum / static_cast<double>(records.size() - 1);
}

MassError relative_mass_error(const TriMesh& mesh, const FeField& u, double initial_mass) {
  const double defect = integrate_p1(mesh, u) - initial_mass;
  if (initial_mass == 0.0) return {std::abs(defect), true};
  return {std::abs(defect / initial_mass), false};
}

double discrete_energy(const TriMesh& mesh, const FeField& u, const PhysicsConfig& physics) {
  const auto& tri = mesh.triangles();
  double grad = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector3d local(u[tri(k, 0)], u[tri(k, 1)], u[tri(k, 2)]);
    const Eigen::Vector2d g = mesh.basis_gradients(k).transpose() * local;
    grad += mesh.area(k) * g.squaredNorm();
  }
  double energy = 0.5 * physics.gamma * grad;
  if (physics.energy.kind != FreeEnergy::Kind::null) {
    const MidpointValues mid = midpoint_values(mesh, u);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      double s = 0.0;
      for (int q = 0; q < 3; ++q) s += physics.energy.value(mid(k, q));
      energy += mesh.area(k) * s / 3.0;
    }
  }
  return energy;
}

const std::array<QuadraturePoint, 7>& triangle_rule7() {
  static const std::array<QuadraturePoint, 7> rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
    const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
    auto orbit = [](double a) {
      const double b = 1.0 - 2.0 * a;
      return std::array<Eigen::Vector3d, 3>{Eigen::Vector3d(b, a, a), Eigen::Vector3d(a, b, a),
                                            Eigen::Vector3d(a, a, b)};
    };
    std::array<QuadraturePoint, 7> r;
    r[0] = {Eigen::Vector3d::Constant(1.0 / 3.0), 9.0 / 40.0};
    const auto o1 = orbit(a1), o2 = orbit(a2);
    for (int i = 0; i < 3; ++i) {
      r[1 + i] = {o1[i], w1};
      r[4 + i] = {o2[i], w2};
    }
    return r;
  }();
  return rule;
}

ErrorNorms error_norms(const TriMesh& mesh, const FeField& u, const ScalarFunction& reference,
                       const VectorFunction& grad_reference) {
  const auto& tri = mesh.triangles();
  const auto& rule = triangle_rule7();
  double l2 = 0.0, h1 = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    Eigen::Matrix<double, 3, 2> corners;
    Eigen::Vector3d local;
    for (int i = 0; i < 3; ++i) {
      corners.row(i) = mesh.nodes().row(tri(k, i));
      local[i] = u[tri(k, i)];
    }
    const Eigen::Vector2d grad_h = mesh.basis_gradients(k).transpose() * local;
    for (const auto& qp : rule) {
      const Eigen::Vector2d x = corners.transpose() * qp.barycentric;
      const double e = local.dot(qp.barycentric) - reference(x[0], x[1]);
      l2 += qp.weight * mesh.area(k) * e * e;
      if (grad_reference) h1 += qp.weight * mesh.area(k) * (grad_h - grad_reference(x[0], x[1])).squaredNorm();
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(l2);
  if (grad_reference) out.h1 = std::sqrt(h1);
  return out;
}

ErrorNorms fe_difference(const TriMesh& mesh, const FeField& u, const FeField& v) {
  const FeField d = u - v;
  const auto& tri = mesh.triangles();
  double h1 = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector3d local(d[tri(k, 0)], d[tri(k, 1)], d[tri(k, 2)]);
    h1 += mesh.area(k) * (mesh.basis_gradients(k).transpose() * local).squaredNorm();
  }
  return {l2_norm(mesh, d), std::sqrt(h1)};
}

ErrorNorms interpolant_errors(const TriMesh& mesh, const FeField& u, const ScalarFunction& reference,
                              const VectorFunction& grad_reference) {
  ErrorNorms out;
  out.l2 = l2_norm(mesh, u - interpolate(mesh, reference));
  if (!grad_reference) return out;
  const int n = mesh.num_nodes();
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(n, 2);
  for (int j = 0; j < n; ++j) g.row(j) = grad_reference(mesh.node(j).x(), mesh.node(j).y()).transpose();
  const auto& tri = mesh.triangles();
  double h1 = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector3d local(u[tri(k, 0)], u[tri(k, 1)], u[tri(k, 2)]);
    const Eigen::RowVector2d gh = (mesh.basis_gradients(k).transpose() * local).transpose();
    // the integrand is quadratic, so the edge-midpoint rule is exact
    for (int a = 0; a < 3; ++a) {
      const Eigen::RowVector2d mid = 0.5 * (g.row(tri(k, (a + 1) % 3)) + g.row(tri(k, (a + 2) % 3)));
      h1 += mesh.area(k) / 3.0 * (gh - mid).squaredNorm();
    }
  }
  out.h1 = std::sqrt(h1);
  return out;
}

std::vector<Segment> extract_level_set(const TriMesh& mesh, const FeField& u, double level) {
  const auto& tri = mesh.triangles();
  std::vector<Segment> out;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    std::array<bool, 3> above;
    for (int i = 0; i < 3; ++i) above[i] = u[tri(k, i)] >= level;
    if (above[0] == above[1] && above[1] == above[2]) continue;
    std::array<Eigen::Vector2d, 2> pts;
    int found = 0;
    for (int i = 0; i < 3 && found < 2; ++i) {
      const int j = (i + 1) % 3;
      if (above[i] == above[j]) continue;
      const double ui = u[tri(k, i)], uj = u[tri(k, j)];
      const double s = std::clamp((level - ui) / (uj - ui), 0.0, 1.0);
      pts[found++] = (1.0 - s) * mesh.node(tri(k, i)) + s * mesh.node(tri(k, j));
    }
    out.push_back({pts[0], pts[1], k});
  }
  return out;
}

std::vector<int> support_nodes(const FeField& u, double floor_tol) {
  if (!(floor_tol > 0.0)) throw std::invalid_argument("floor_tol must be positive");
  std::vector<int> out;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    if (u[j] > floor_tol) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<int> with_one_ring(const TriMesh& mesh, const std::vector<int>& nodes) {
  std::set<int> all(nodes.begin(), nodes.end());
  for (int j : nodes) {
    for (int n : mesh.neighbours(j)) all.insert(n);
  }
  return {all.begin(), all.end()};
}

}  // namespace posfem
