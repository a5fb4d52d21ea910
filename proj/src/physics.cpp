#include "posfem/physics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace posfem {

double Mobility::operator()(double u) const {
  switch (kind) {
    case Kind::constant:
      return M;
    case Kind::power:
      return std::pow(std::abs(u), p);
    case Kind::degenerate:
      return 1.0 - u * u;
  }
  return 0.0;
}

double Mobility::derivative(double u) const {
  switch (kind) {
    case Kind::constant:
      return 0.0;
    case Kind::power: {
      if (u == 0.0) return p == 1.0 ? 0.0 : (p > 1.0 ? 0.0 : std::numeric_limits<double>::infinity());
      const double s = u > 0.0 ? 1.0 : -1.0;
      return s * p * std::pow(std::abs(u), p - 1.0);
    }
    case Kind::degenerate:
      return -2.0 * u;
  }
  return 0.0;
}

EnergyDerivatives FreeEnergy::derivatives(double u) const {
  switch (kind) {
    case Kind::null:
      return {0.0, 0.0, 0.0};
    case Kind::quartic: {
      const double d = u * u - root * root;
      return {c * d * d, 4.0 * c * u * d, 4.0 * c * (3.0 * u * u - root * root)};
    }
    case Kind::logarithmic: {
      if (!(std::abs(u) < 1.0)) {
        throw std::domain_error("logarithmic free energy derivatives need |u| < 1");
      }
      return {value(u), 0.5 * theta * std::log((1.0 + u) / (1.0 - u)) - theta_c * u,
              theta / (1.0 - u * u) - theta_c};
    }
  }
  return {0.0, 0.0, 0.0};
}

double FreeEnergy::value(double u) const {
  switch (kind) {
    case Kind::null:
      return 0.0;
    case Kind::quartic: {
      const double d = u * u - root * root;
      return c * d * d;
    }
    case Kind::logarithmic: {
      if (std::abs(u) > 1.0) {
        throw std::domain_error("logarithmic free energy undefined for |u| > 1");
      }
      // 0 log 0 := 0
      auto xlogx = [](double a) { return a > 0.0 ? a * std::log(a / 2.0) : 0.0; };
      return 0.5 * theta * (xlogx(1.0 + u) + xlogx(1.0 - u)) + 0.5 * theta_c * (1.0 - u * u);
    }
  }
  return 0.0;
}

double g_eval(double theta, double theta_c, double u) { return theta - theta_c * (1.0 - u * u); }

std::string to_string(Mobility::Kind kind) {
  switch (kind) {
    case Mobility::Kind::constant:
      return "constant";
    case Mobility::Kind::power:
      return "power";
    case Mobility::Kind::degenerate:
      return "degenerate";
  }
  return "?";
}

std::string to_string(FreeEnergy::Kind kind) {
  switch (kind) {
    case FreeEnergy::Kind::null:
      return "null";
    case FreeEnergy::Kind::quartic:
      return "quartic";
    case FreeEnergy::Kind::logarithmic:
      return "logarithmic";
  }
  return "?";
}

Mobility::Kind parse_mobility_kind(const std::string& s) {
  if (s == "constant") return Mobility::Kind::constant;
  if (s == "power") return Mobility::Kind::power;
  if (s == "degenerate") return Mobility::Kind::degenerate;
  throw std::invalid_argument("unknown mobility kind '" + s + "'");
}

FreeEnergy::Kind parse_energy_kind(const std::string& s) {
  if (s == "null") return FreeEnergy::Kind::null;
  if (s == "quartic") return FreeEnergy::Kind::quartic;
  if (s == "logarithmic") return FreeEnergy::Kind::logarithmic;
  throw std::invalid_argument("unknown free energy kind '" + s + "'");
}

}  // namespace posfem
