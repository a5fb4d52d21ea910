#pragma once

#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "posfem/physics.hpp"

namespace posfem {

/// Compactly supported source-type solution of the thin-film equation with
/// f(u) = u and gamma = 1:
///   u = t^{-1/3} / 192 (L^2 - r^2)^2,  w = t^{-2/3} / 24 (L^2 - 2 r^2)
/// for r = |x| / t^{1/6} < L, zero outside.
struct SelfSimilarSpec {
  double L = 1.0;
};

/// The three evaluators throw std::domain_error for t <= 0.
double self_similar_u(const SelfSimilarSpec& spec, double x, double y, double t);
double self_similar_w(const SelfSimilarSpec& spec, double x, double y, double t);
Eigen::Vector2d self_similar_grad_u(const SelfSimilarSpec& spec, double x, double y, double t);

/// Total mass pi L^6 / 576, independent of t.
double self_similar_mass(const SelfSimilarSpec& spec);

/// Smooth scalar function of time with its derivative.
struct TimeFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static TimeFunction constant(double c);
  /// c0 + c1 t
  static TimeFunction affine(double c0, double c1);
};

/// Smooth bump u = C exp(-sigma(t) / (L^2 - r^2)) with r = |x| / beta(t), and
/// w = -gamma Laplace(u). The source S = u_t - div(f(u) grad w) makes the
/// pair an exact solution of the forced system.
struct ManufacturedSpec {
  double C = 1.0;
  double L = 0.5;
  double gamma = 1.0;
  Mobility mobility = Mobility::constant(1.0);
  TimeFunction sigma = TimeFunction::constant(1.0);
  TimeFunction beta = TimeFunction::affine(1.0, 1.0);
};

std::pair<double, double> manufactured_uw(const ManufacturedSpec& spec, double x, double y, double t);
Eigen::Vector2d manufactured_grad_u(const ManufacturedSpec& spec, double x, double y, double t);
Eigen::Vector2d manufactured_grad_w(const ManufacturedSpec& spec, double x, double y, double t);
double manufactured_source(const ManufacturedSpec& spec, double x, double y, double t);

}  // namespace posfem
