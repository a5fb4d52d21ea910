#pragma once

#include <string>

namespace posfem {

/// Mobility f(u) of the fourth-order flux.
struct Mobility {
  enum class Kind { constant, power, degenerate };

  Kind kind = Kind::power;
  double M = 1.0;  ///< constant kind
  double p = 1.0;  ///< power kind: f(u) = |u|^p

  static Mobility constant(double m) { return {Kind::constant, m, 1.0}; }
  static Mobility power(double exponent) { return {Kind::power, 1.0, exponent}; }
  /// f(u) = 1 - u^2, vanishing at the pure phases.
  static Mobility degenerate() { return {Kind::degenerate, 1.0, 1.0}; }

  double operator()(double u) const;
  double derivative(double u) const;
};

struct EnergyDerivatives {
  double value;
  double first;
  double second;
};

/// Free energy phi(u).
///
/// quartic:      c (u^2 - root^2)^2
/// logarithmic:  theta/2 ((1+u) log((1+u)/2) + (1-u) log((1-u)/2)) + theta_c/2 (1 - u^2)
struct FreeEnergy {
  enum class Kind { null, quartic, logarithmic };

  Kind kind = Kind::null;
  double c = 1.0;
  double root = 1.0;
  double theta = 0.05;
  double theta_c = 0.1;

  static FreeEnergy none() { return {}; }
  static FreeEnergy quartic(double c, double root) { return {Kind::quartic, c, root, 0.05, 0.1}; }
  static FreeEnergy logarithmic(double theta, double theta_c) {
    return {Kind::logarithmic, 1.0, 1.0, theta, theta_c};
  }

  /// phi, phi', phi''. Throws std::domain_error for the logarithmic kind at |u| >= 1.
  EnergyDerivatives derivatives(double u) const;

  /// phi alone; the logarithmic kind uses its continuous extension at u = +-1.
  double value(double u) const;
};

/// g(u) = f(u) phi''(u) = theta - theta_c (1 - u^2) for the degenerate mobility
/// with logarithmic energy. Finite for every u.
double g_eval(double theta, double theta_c, double u);

struct PhysicsConfig {
  Mobility mobility;
  FreeEnergy energy;
  double gamma = 1.0;
  /// Use the singularity-free formulation (degenerate mobility + logarithmic energy).
  bool g_form = false;
};

std::string to_string(Mobility::Kind kind);
std::string to_string(FreeEnergy::Kind kind);
Mobility::Kind parse_mobility_kind(const std::string& s);
FreeEnergy::Kind parse_energy_kind(const std::string& s);

}  // namespace posfem
