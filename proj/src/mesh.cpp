#include "posfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace posfem {

TriMesh::TriMesh(Nodes nodes, Triangles triangles, Rectangle domain, int nx, int ny)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      domain_(domain),
      nx_(nx),
      ny_(ny) {
  const int nt = num_triangles();
  areas_.resize(nt);
  gradients_.resize(nt);
  for (int k = 0; k < nt; ++k) {
    const Eigen::Vector2d a = node(triangles_(k, 0));
    const Eigen::Vector2d b = node(triangles_(k, 1));
    const Eigen::Vector2d c = node(triangles_(k, 2));
    const double twice_area = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    if (!(twice_area > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(k) + " is not counterclockwise");
    }
    areas_[k] = 0.5 * twice_area;
    // grad(phi_i) = rot90(edge opposite i) / (2 area)
    BasisGradients& g = gradients_[k];
    g.row(0) << b.y() - c.y(), c.x() - b.x();
    g.row(1) << c.y() - a.y(), a.x() - c.x();
    g.row(2) << a.y() - b.y(), b.x() - a.x();
    g /= twice_area;
  }

  on_boundary_.assign(num_nodes(), 0);
  const double tol = 1e-12 * std::max(domain_.width(), domain_.height());
  for (int j = 0; j < num_nodes(); ++j) {
    const double x = nodes_(j, 0);
    const double y = nodes_(j, 1);
    if (std::abs(x - domain_.x_min) <= tol || std::abs(x - domain_.x_max) <= tol ||
        std::abs(y - domain_.y_min) <= tol || std::abs(y - domain_.y_max) <= tol) {
      on_boundary_[j] = 1;
      boundary_nodes_.push_back(j);
    }
  }
}

std::optional<std::pair<int, Eigen::Vector3d>> TriMesh::locate(const Eigen::Vector2d& p) const {
  const double tol = 1e-12;
  const double hx = domain_.width() / nx_;
  const double hy = domain_.height() / ny_;
  if (p.x() < domain_.x_min - tol * hx || p.x() > domain_.x_max + tol * hx ||
      p.y() < domain_.y_min - tol * hy || p.y() > domain_.y_max + tol * hy) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor((p.x() - domain_.x_min) / hx)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y() - domain_.y_min) / hy)), 0, ny_ - 1);
  const int cell = j * nx_ + i;
  std::pair<int, Eigen::Vector3d> best{-1, Eigen::Vector3d::Zero()};
  double best_violation = std::numeric_limits<double>::infinity();
  for (int k : {2 * cell, 2 * cell + 1}) {
    Eigen::Vector3d lambda;
    const Eigen::Vector2d a = node(triangles_(k, 0));
    for (int v = 0; v < 3; ++v) {
      lambda[v] = (v == 0 ? 1.0 : 0.0) + gradients_[k].row(v).dot(p - a);
    }
    const double violation = std::max(0.0, -lambda.minCoeff());
    if (violation < best_violation) {
      best_violation = violation;
      best = {k, lambda};
    }
  }
  return best;
}

std::vector<int> TriMesh::neighbours(int j) const {
  std::set<int> out;
  const int i = j % (nx_ + 1);
  const int r = j / (nx_ + 1);
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int ci = i + std::min(di, 0);
      const int cj = r + std::min(dj, 0);
      if (ci < 0 || cj < 0 || ci >= nx_ || cj >= ny_) continue;
      const int cell = cj * nx_ + ci;
      for (int k : {2 * cell, 2 * cell + 1}) {
        for (int v = 0; v < 3; ++v) {
          if (triangles_(k, v) == j) {
            out.insert(triangles_(k, (v + 1) % 3));
            out.insert(triangles_(k, (v + 2) % 3));
          }
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

std::string to_string(Diagonal d) { return d == Diagonal::uniform ? "uniform" : "alternating"; }

Diagonal parse_diagonal(const std::string& s) {
  if (s == "alternating") return Diagonal::alternating;
  if (s == "uniform") return Diagonal::uniform;
  throw std::invalid_argument("unknown diagonal pattern '" + s + "'");
}

TriMesh build_structured(int nx, int ny, const Rectangle& domain, Diagonal diagonal) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("grid counts must be positive");
  }
  if (!(domain.x_min < domain.x_max) || !(domain.y_min < domain.y_max)) {
    throw std::invalid_argument("rectangle bounds must satisfy min < max");
  }
  TriMesh::Nodes nodes((nx + 1) * (ny + 1), 2);
  for (int j = 0; j <= ny; ++j) {
    // exact end points so boundary nodes sit on the rectangle
    const double y = j == ny ? domain.y_max : domain.y_min + domain.height() * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? domain.x_max : domain.x_min + domain.width() * i / nx;
      nodes.row(j * (nx + 1) + i) << x, y;
    }
  }

  TriMesh::Triangles tris(2 * nx * ny, 3);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = j * (nx + 1) + i;
      const int n10 = n00 + 1;
      const int n01 = n00 + nx + 1;
      const int n11 = n01 + 1;
      const int cell = j * nx + i;
      if (diagonal == Diagonal::uniform || (i + j) % 2 == 0) {
        tris.row(2 * cell) << n00, n10, n11;
        tris.row(2 * cell + 1) << n00, n11, n01;
      } else {
        tris.row(2 * cell) << n00, n10, n01;
        tris.row(2 * cell + 1) << n10, n11, n01;
      }
    }
  }
  return TriMesh(std::move(nodes), std::move(tris), domain, nx, ny);
}

double mesh_size(const TriMesh& mesh) {
  double h = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int v = 0; v < 3; ++v) {
      const auto a = mesh.node(mesh.triangles()(k, v));
      const auto b = mesh.node(mesh.triangles()(k, (v + 1) % 3));
      h = std::max(h, (a - b).norm());
    }
  }
  return h;
}

FeField interpolate(const TriMesh& mesh, const std::function<double(double, double)>& g) {
  FeField u(mesh.num_nodes());
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    u[j] = g(mesh.nodes()(j, 0), mesh.nodes()(j, 1));
    if (!std::isfinite(u[j])) {
      throw std::domain_error("interpolant is not finite at node " + std::to_string(j));
    }
  }
  return u;
}

double evaluate(const TriMesh& mesh, const FeField& u, const Eigen::Vector2d& p) {
  const auto hit = mesh.locate(p);
  if (!hit) {
    throw std::out_of_range("point outside the mesh");
  }
  const auto& [k, lambda] = *hit;
  double value = 0.0;
  for (int v = 0; v < 3; ++v) value += lambda[v] * u[mesh.triangles()(k, v)];
  return value;
}

}  // namespace posfem
