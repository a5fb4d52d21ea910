#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posfem/mesh.hpp"
#include "posfem/physics.hpp"

namespace posfem {

struct StepRecord {
  double t = 0.0;
  double mass = 0.0;
  double rel_mass_error = 0.0;
  double energy = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  int iterations = 0;  ///< inner iterations of the constraint stage or of the Barrett loop
};

struct RunDiagnostics {
  std::string scheme;
  int nx = 0;
  int ny = 0;
  double dt = 0.0;
  std::vector<StepRecord> records;

  /// Throws std::logic_error unless t increases strictly.
  void append(const StepRecord& record);
  double mean_iterations() const;  ///< over records after the initial one
};

struct MassError {
  double value = 0.0;
  bool absolute = false;  ///< initial mass was zero, value is the absolute defect
};

MassError relative_mass_error(const TriMesh& mesh, const FeField& u, double initial_mass);

/// Integral of gamma/2 |grad u|^2 + phi(u); the gradient part is exact, phi
/// uses the edge-midpoint rule.
double discrete_energy(const TriMesh& mesh, const FeField& u, const PhysicsConfig& physics);

using ScalarFunction = std::function<double(double, double)>;
using VectorFunction = std::function<Eigen::Vector2d(double, double)>;

struct QuadraturePoint {
  Eigen::Vector3d barycentric;
  double weight;  ///< fraction of the triangle area
};

/// Seven-point rule, exact for polynomials of degree 5.
const std::array<QuadraturePoint, 7>& triangle_rule7();

struct ErrorNorms {
  double l2 = 0.0;
  std::optional<double> h1;  ///< seminorm, present when a gradient was supplied
};

ErrorNorms error_norms(const TriMesh& mesh, const FeField& u, const ScalarFunction& reference,
                       const VectorFunction& grad_reference = {});

/// Errors against nodal interpolants, integrated exactly:
/// ||u - I_h ref||_L2 and ||grad u - I_h grad_ref||_L2 (componentwise P1 interpolant).
ErrorNorms interpolant_errors(const TriMesh& mesh, const FeField& u, const ScalarFunction& reference,
                              const VectorFunction& grad_reference = {});

/// L2 norm of u - v and H1 seminorm of u - v for two fields on the same mesh.
ErrorNorms fe_difference(const TriMesh& mesh, const FeField& u, const FeField& v);

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
  int triangle = -1;
};

/// Marching triangles; a vertex exactly at the level counts as above it.
std::vector<Segment> extract_level_set(const TriMesh& mesh, const FeField& u, double level);

/// Nodes with u > floor_tol, sorted.
std::vector<int> support_nodes(const FeField& u, double floor_tol = 1e-8);

/// Nodes of `nodes` together with all their edge neighbours.
std::vector<int> with_one_ring(const TriMesh& mesh, const std::vector<int>& nodes);

}  // namespace posfem
