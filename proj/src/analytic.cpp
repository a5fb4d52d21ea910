#include "posfem/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace posfem {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("self-similar solution needs t > 0");
}

}  // namespace

double self_similar_u(const SelfSimilarSpec& spec, double x, double y, double t) {
  require_positive_time(t);
  const double r2 = (x * x + y * y) / std::cbrt(t);
  const double L2 = spec.L * spec.L;
  if (r2 >= L2) return 0.0;
  return (L2 - r2) * (L2 - r2) / (192.0 * std::cbrt(t));
}

double self_similar_w(const SelfSimilarSpec& spec, double x, double y, double t) {
  require_positive_time(t);
  const double c = std::cbrt(t);
  const double r2 = (x * x + y * y) / c;
  const double L2 = spec.L * spec.L;
  if (r2 >= L2) return 0.0;
  return (L2 - 2.0 * r2) / (24.0 * c * c);
}

Eigen::Vector2d self_similar_grad_u(const SelfSimilarSpec& spec, double x, double y, double t) {
  require_positive_time(t);
  const double c = std::cbrt(t);
  const double r2 = (x * x + y * y) / c;
  const double L2 = spec.L * spec.L;
  if (r2 >= L2) return Eigen::Vector2d::Zero();
  return -(L2 - r2) / (48.0 * c * c) * Eigen::Vector2d(x, y);
}

double self_similar_mass(const SelfSimilarSpec& spec) { return std::numbers::pi * std::pow(spec.L, 6) / 576.0; }

TimeFunction TimeFunction::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

TimeFunction TimeFunction::affine(double c0, double c1) {
  return {[c0, c1](double t) { return c0 + c1 * t; }, [c1](double) { return c1; }};
}

namespace {

// Radial profile in the scaled variable r = |x| / beta. Quantities divided by
// r are kept in closed form so nothing is singular at the origin.
struct Radial {
  double r = 0.0;
  double beta = 1.0;
  double u = 0.0;
  double ur = 0.0;
  double ur_over_r = 0.0;
  double urr = 0.0;
  double w = 0.0;  // -gamma Laplace(u) in physical coordinates
  double wr = 0.0;
  double wr_over_r = 0.0;
  double wrr = 0.0;
  double D = 0.0;  // L^2 - r^2
};

Radial radial(const ManufacturedSpec& s, double x, double y, double t) {
  Radial q;
  q.beta = s.beta.value(t);
  if (!(q.beta > 0.0)) throw std::domain_error("manufactured solution needs beta(t) > 0");
  q.r = std::hypot(x, y) / q.beta;
  const double L2 = s.L * s.L;
  if (q.r >= s.L) return q;
  const double r = q.r, r2 = r * r;
  const double D = L2 - r2;
  q.D = D;
  const double sigma = s.sigma.value(t);
  q.u = s.C * std::exp(-sigma / D);
  if (q.u == 0.0) return q;
  const double D2 = D * D, D3 = D2 * D, D4 = D3 * D, D5 = D4 * D, D6 = D5 * D;

  q.ur_over_r = -2.0 * sigma * q.u / D2;
  q.ur = r * q.ur_over_r;
  q.urr = -2.0 * sigma * q.u * (L2 + 3.0 * r2) / D3 + 4.0 * sigma * sigma * r2 * q.u / D4;

  // w in the scaled variable is 2 gamma sigma u B(r)
  const double B = 1.0 / D2 + (L2 + 3.0 * r2) / D3 - 2.0 * sigma * r2 / D4;
  const double Bp_over_r = 4.0 / D3 + 12.0 * (L2 + r2) / D4 - 4.0 * sigma * (L2 + 3.0 * r2) / D5;
  const double Bp = r * Bp_over_r;
  const double Bpp = 4.0 * (L2 + 5.0 * r2) / D4 + 12.0 * (L2 * L2 + 10.0 * L2 * r2 + 5.0 * r2 * r2) / D5 -
                     4.0 * sigma * (L2 * L2 + 18.0 * L2 * r2 + 21.0 * r2 * r2) / D6;

  // the physical Laplacian carries 1 / beta^2
  const double k = 2.0 * s.gamma * sigma / (q.beta * q.beta);
  q.w = k * q.u * B;
  q.wr = k * (q.ur * B + q.u * Bp);
  q.wr_over_r = k * (q.ur_over_r * B + q.u * Bp_over_r);
  q.wrr = k * (q.urr * B + 2.0 * q.ur * Bp + q.u * Bpp);
  return q;
}

}  // namespace

std::pair<double, double> manufactured_uw(const ManufacturedSpec& spec, double x, double y, double t) {
  const Radial q = radial(spec, x, y, t);
  return {q.u, q.w};
}

Eigen::Vector2d manufactured_grad_u(const ManufacturedSpec& spec, double x, double y, double t) {
  const Radial q = radial(spec, x, y, t);
  // d r / d x = x / (r beta^2)
  return q.ur_over_r / (q.beta * q.beta) * Eigen::Vector2d(x, y);
}

Eigen::Vector2d manufactured_grad_w(const ManufacturedSpec& spec, double x, double y, double t) {
  const Radial q = radial(spec, x, y, t);
  return q.wr_over_r / (q.beta * q.beta) * Eigen::Vector2d(x, y);
}

double manufactured_source(const ManufacturedSpec& spec, double x, double y, double t) {
  const Radial q = radial(spec, x, y, t);
  if (q.u == 0.0) return 0.0;
  // u_t at fixed x: sigma' through the exponent, beta' through r
  const double r_t = -q.r * spec.beta.derivative(t) / q.beta;
  const double u_t = -q.u * spec.sigma.derivative(t) / q.D + q.ur * r_t;
  const double f = spec.mobility(q.u);
  const double fp = spec.mobility.derivative(q.u);
  const double div = (q.wr_over_r * (f + q.r * fp * q.ur) + f * q.wrr) / (q.beta * q.beta);
  return u_t - div;
}

}  // namespace posfem
