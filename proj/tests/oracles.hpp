#pragma once

// Reference computations used by the unit tests. They deliberately avoid the
// library's own quadrature and assembly code.

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "posfem/mesh.hpp"

namespace oracle {

// Degree-2 interior rule on the reference triangle.
inline const std::array<Eigen::Vector3d, 3>& interior3() {
  static const std::array<Eigen::Vector3d, 3> pts{Eigen::Vector3d(2.0 / 3, 1.0 / 6, 1.0 / 6),
                                                  Eigen::Vector3d(1.0 / 6, 2.0 / 3, 1.0 / 6),
                                                  Eigen::Vector3d(1.0 / 6, 1.0 / 6, 2.0 / 3)};
  return pts;
}

// Integral of g over the mesh by recursive 4-way splitting of every triangle
// and the centroid rule on the leaves. Converges like h^2 for smooth g.
inline double integrate(const posfem::TriMesh& mesh, const std::function<double(double, double)>& g, int levels) {
  std::function<double(Eigen::Vector2d, Eigen::Vector2d, Eigen::Vector2d, int)> rec =
      [&](Eigen::Vector2d a, Eigen::Vector2d b, Eigen::Vector2d c, int depth) -> double {
    if (depth == 0) {
      const Eigen::Vector2d m = (a + b + c) / 3.0;
      const double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      return area * g(m.x(), m.y());
    }
    const Eigen::Vector2d ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    return rec(a, ab, ca, depth - 1) + rec(ab, b, bc, depth - 1) + rec(ca, bc, c, depth - 1) +
           rec(ab, bc, ca, depth - 1);
  };
  double sum = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto& t = mesh.triangles();
    sum += rec(mesh.node(t(k, 0)), mesh.node(t(k, 1)), mesh.node(t(k, 2)), levels);
  }
  return sum;
}

// Barycentric coordinates of p in triangle (a, b, c) by Cramer's rule.
inline Eigen::Vector3d barycentric(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                                   const Eigen::Vector2d& p) {
  Eigen::Matrix2d T;
  T << b - a, c - a;
  const Eigen::Vector2d s = T.fullPivLu().solve(p - a);
  return {1.0 - s.x() - s.y(), s.x(), s.y()};
}

inline Eigen::VectorXd random_field(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v[j] = d(rng);
  return v;
}

// Fourth-order central difference of a scalar function of one variable.
inline double d1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace oracle
