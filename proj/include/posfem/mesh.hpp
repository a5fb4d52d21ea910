#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace posfem {

/// Nodal values of a continuous piecewise-linear function on a TriMesh.
using FeField = Eigen::VectorXd;

struct Rectangle {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool operator==(const Rectangle&) const = default;
};

/// Conforming triangulation of an axis-aligned rectangle.
///
/// Nodes are numbered lexicographically, row by row (index = j * (nx + 1) + i).
/// Each grid cell is split by one diagonal whose orientation alternates in a
/// checkerboard pattern. Triangles are counterclockwise. The mesh is immutable
/// once built; per-triangle geometry is cached at construction.
class TriMesh {
 public:
  using Nodes = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
  using Triangles = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;
  /// Gradients of the three barycentric basis functions, one per row.
  using BasisGradients = Eigen::Matrix<double, 3, 2>;

  TriMesh(Nodes nodes, Triangles triangles, Rectangle domain, int nx, int ny);

  const Nodes& nodes() const { return nodes_; }
  const Triangles& triangles() const { return triangles_; }
  const Rectangle& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  int num_nodes() const { return static_cast<int>(nodes_.rows()); }
  int num_triangles() const { return static_cast<int>(triangles_.rows()); }

  Eigen::Vector2d node(int j) const { return nodes_.row(j).transpose(); }
  double area(int k) const { return areas_[k]; }
  const Eigen::VectorXd& areas() const { return areas_; }
  const BasisGradients& basis_gradients(int k) const { return gradients_[k]; }

  /// Sorted indices of nodes lying on the rectangle boundary.
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary(int j) const { return on_boundary_[j] != 0; }

  /// Triangle containing p together with the barycentric coordinates of p.
  std::optional<std::pair<int, Eigen::Vector3d>> locate(const Eigen::Vector2d& p) const;

  /// Indices of nodes sharing an edge with j.
  std::vector<int> neighbours(int j) const;

 private:
  Nodes nodes_;
  Triangles triangles_;
  Rectangle domain_;
  int nx_;
  int ny_;
  Eigen::VectorXd areas_;
  std::vector<BasisGradients> gradients_;
  std::vector<int> boundary_nodes_;
  std::vector<char> on_boundary_;
};

/// How each grid cell is cut into two triangles.
enum class Diagonal {
  alternating,  ///< orientation flips from cell to cell
  uniform,      ///< every cell cut from its lower-left to its upper-right corner
};

std::string to_string(Diagonal d);
Diagonal parse_diagonal(const std::string& s);

/// Structured nx-by-ny grid of the rectangle, 2 nx ny triangles.
/// Throws std::invalid_argument for empty grids or degenerate bounds.
TriMesh build_structured(int nx, int ny, const Rectangle& domain, Diagonal diagonal = Diagonal::alternating);

/// Largest triangle diameter.
double mesh_size(const TriMesh& mesh);

/// Nodal interpolant of g. Throws std::domain_error if g is not finite at a node.
FeField interpolate(const TriMesh& mesh, const std::function<double(double, double)>& g);

/// Value of the P1 function at an arbitrary point of the domain.
double evaluate(const TriMesh& mesh, const FeField& u, const Eigen::Vector2d& p);

}  // namespace posfem
