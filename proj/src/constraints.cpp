#include "posfem/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "posfem/assembly.hpp"

namespace posfem {

namespace {

double upper_or_inf(const BoundSpec& b) {
  return b.upper ? *b.upper : std::numeric_limits<double>::infinity();
}

FeField lower_values(const BoundSpec& b, Eigen::Index n) {
  return b.lower_field.size() ? b.lower_field : FeField(FeField::Constant(n, b.lower));
}

// P[u_hat - mu] without allocating the shifted field first
FeField shifted_projection(const FeField& u_hat, const BoundSpec& b, double mu) {
  const double hi = upper_or_inf(b);
  FeField out(u_hat.size());
  for (Eigen::Index j = 0; j < u_hat.size(); ++j) out[j] = std::clamp(u_hat[j] - mu, b.lower_at(j), hi);
  return out;
}

}  // namespace

void BoundSpec::validate() const {
  if (!upper) return;
  const double lo = lower_field.size() ? lower_field.maxCoeff() : lower;
  if (!(lo < *upper)) throw std::invalid_argument("lower bound must be below the upper bound");
}

FeField project_nodal(const FeField& u, const BoundSpec& bounds) { return shifted_projection(u, bounds, 0.0); }

TruncationResult scheme2_truncate(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds) {
  TruncationResult r;
  r.u = project_nodal(u_hat, bounds);
  r.mass_defect = integrate_p1(mesh, r.u - u_hat);
  return r;
}

double theta(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double mu, double target_mass) {
  return integrate_p1(mesh, shifted_projection(u_hat, bounds, mu)) - target_mass;
}

std::pair<double, double> theta_bracket(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds,
                                        double target_mass) {
  const FeField a = lower_values(bounds, u_hat.size());
  const double mu_hi = (u_hat - a).maxCoeff();
  double mu_lo;
  if (bounds.upper) {
    mu_lo = u_hat.minCoeff() - *bounds.upper;
  } else {
    // below min(u_hat - a) nothing is clamped and Theta is affine
    const double area = mesh.domain().area();
    mu_lo = std::min((u_hat - a).minCoeff(), (integrate_p1(mesh, u_hat) - target_mass) / area);
  }
  return {mu_lo, mu_hi};
}

SecantResult secant_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                          double eps, int max_iter) {
  const double area = mesh.domain().area();
  auto [lo, hi] = theta_bracket(mesh, u_hat, bounds, target_mass);
  auto th = [&](double mu) { return theta(mesh, u_hat, bounds, mu, target_mass); };
  auto shrink = [&](double mu, double value) {
    if (value > 0.0) lo = std::max(lo, mu);
    if (value < 0.0) hi = std::min(hi, mu);
  };

  SecantResult out;
  double mu0 = std::clamp(0.0, lo, hi);
  double t0 = th(mu0);
  if (t0 == 0.0) {
    out.mu = mu0;
    return out;
  }
  shrink(mu0, t0);
  const double mu_bar = (u_hat - lower_values(bounds, u_hat.size())).maxCoeff();
  double mu1 = std::clamp(0.1 * mu_bar, lo, hi);
  if (mu1 == mu0) mu1 = 0.5 * (lo + hi);
  double t1 = th(mu1);
  shrink(mu1, t1);

  for (int k = 1; k <= max_iter; ++k) {
    double mu2;
    if (t1 == 0.0) {
      out.mu = mu1;
      out.iterations = k - 1;
      return out;
    }
    if (t1 == t0) {
      mu2 = 0.5 * (lo + hi);
      out.bisection_used = true;
    } else {
      mu2 = mu1 - t1 * (mu1 - mu0) / (t1 - t0);
      if (!(mu2 >= lo && mu2 <= hi)) {
        mu2 = 0.5 * (lo + hi);
        out.bisection_used = true;
      }
    }
    const double t2 = th(mu2);
    shrink(mu2, t2);
    out.iterations = k;
    out.mu = mu2;
    out.theta = t2;
    if ((std::abs(mu2 - mu1) <= eps && std::abs(t2) <= area * eps) || t2 == 0.0) return out;
    mu0 = mu1;
    t0 = t1;
    mu1 = mu2;
    t1 = t2;
  }
  throw ConstraintError("secant iteration for the mass translation did not converge");
}

double bisection_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                       double tol, int max_iter) {
  auto [lo, hi] = theta_bracket(mesh, u_hat, bounds, target_mass);
  for (int k = 0; k < max_iter && hi - lo > tol; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double t = theta(mesh, u_hat, bounds, mid, target_mass);
    if (t == 0.0) return mid;
    (t > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Scheme3Result scheme3_apply(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                            double eps, int max_iter) {
  Scheme3Result r;
  r.secant = secant_solve(mesh, u_hat, bounds, target_mass, eps, max_iter);
  r.u = shifted_projection(u_hat, bounds, r.secant.mu);
  return r;
}

void UzawaParams::validate() const {
  if (!(alpha > 0.0 && beta > 0.0 && rho > 0.0 && rho_min > 0.0 && rho_min <= rho && eps > 0.0 && max_iter > 0)) {
    throw std::invalid_argument("invalid Uzawa parameters");
  }
}

namespace {

UzawaResult uzawa_iterate(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds,
                          std::optional<double> target_mass, const UzawaParams& p,
                          const std::optional<UzawaMultipliers>& start) {
  p.validate();
  bounds.validate();
  const Eigen::Index n = u_hat.size();
  const FeField a = lower_values(bounds, n);

  UzawaResult s;
  s.u = project_nodal(u_hat, bounds);
  s.lambda = FeField::Zero(n);
  s.lambda_hi = FeField::Zero(n);
  if (start) {
    if (start->lambda.size() == n) s.lambda = start->lambda;
    if (start->lambda_hi.size() == n) s.lambda_hi = start->lambda_hi;
    if (target_mass) s.mu = start->mu;
  }
  for (int k = 1; k <= p.max_iter; ++k) {
    FeField lambda = (s.lambda - p.beta * (s.u - a)).cwiseMax(0.0);
    FeField lambda_hi = s.lambda_hi;
    if (bounds.upper) lambda_hi = (s.lambda_hi - p.beta * (FeField::Constant(n, *bounds.upper) - s.u)).cwiseMax(0.0);
    double mu = s.mu;
    if (target_mass) mu += p.rho * (integrate_p1(mesh, s.u) - *target_mass);
    FeField u = s.u - p.alpha * (s.u - u_hat + FeField::Constant(n, mu) - lambda + lambda_hi);

    s.tau = l2_norm(mesh, (lambda - lambda_hi) - (s.lambda - s.lambda_hi));
    s.xi = std::abs(mu - s.mu);
    s.eta = l2_norm(mesh, u - s.u);
    s.u = std::move(u);
    s.lambda = std::move(lambda);
    s.lambda_hi = std::move(lambda_hi);
    s.mu = mu;
    s.iterations = k;
    if (s.tau <= p.eps && s.xi <= p.eps && s.eta <= p.eps) return s;
    if (!s.u.allFinite()) break;
  }
  throw UzawaNonConvergence("Uzawa iteration did not converge", std::move(s));
}

}  // namespace

UzawaResult uzawa_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                        const UzawaParams& params, const std::optional<UzawaMultipliers>& start) {
  return uzawa_iterate(mesh, u_hat, bounds, target_mass, params, start);
}

UzawaResult uzawa_solve_unconstrained_mass(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds,
                                           const UzawaParams& params,
                                           const std::optional<UzawaMultipliers>& start) {
  return uzawa_iterate(mesh, u_hat, bounds, std::nullopt, params, start);
}

double uzawa_c1(const UzawaParams& p, double domain_area) {
  return std::abs(p.alpha - 1.0 / p.beta) + std::abs(1.0 - p.alpha) + p.alpha * std::sqrt(domain_area);
}

double uzawa_c2(const UzawaParams& p, double domain_area) {
  return uzawa_c1(p, domain_area) * std::sqrt(domain_area) + 1.0 / p.rho_min;
}

FeField qp_oracle(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass) {
  const int n = static_cast<int>(u_hat.size());
  if (n > 12) throw std::invalid_argument("qp_oracle enumerates active sets and is limited to 12 nodes");
  bounds.validate();
  const Eigen::VectorXd m = lumped_mass(mesh);
  const FeField a = lower_values(bounds, n);
  const double b = upper_or_inf(bounds);
  const double scale = std::max({1.0, std::abs(target_mass), m.dot(a.cwiseAbs())});
  const double feas_tol = 1e-12 * scale;
  if (target_mass < m.dot(a) - feas_tol || (bounds.upper && target_mass > b * m.sum() + feas_tol)) {
    throw ConstraintError("mass target outside the range allowed by the bounds");
  }

  // node states: 0 free, 1 at the lower bound, 2 at the upper bound
  const int states = bounds.upper ? 3 : 2;
  long total = 1;
  for (int j = 0; j < n; ++j) total *= states;

  FeField best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<int> state(n);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int j = 0; j < n; ++j) {
      state[j] = static_cast<int>(c % states);
      c /= states;
    }
    FeField u(n);
    double free_weight = 0.0, fixed_mass = 0.0, free_mass = 0.0;
    for (int j = 0; j < n; ++j) {
      if (state[j] == 0) {
        free_weight += m[j];
        free_mass += m[j] * u_hat[j];
      } else {
        u[j] = state[j] == 1 ? a[j] : b;
        fixed_mass += m[j] * u[j];
      }
    }
    if (free_weight > 0.0) {
      const double nu = (free_mass + fixed_mass - target_mass) / free_weight;
      for (int j = 0; j < n; ++j) {
        if (state[j] == 0) u[j] = u_hat[j] - nu;
      }
    } else if (std::abs(fixed_mass - target_mass) > feas_tol) {
      continue;
    }
    bool feasible = true;
    for (int j = 0; j < n && feasible; ++j) {
      feasible = u[j] >= a[j] - 1e-13 && u[j] <= b + 1e-13;
    }
    if (!feasible) continue;
    const double value = m.dot((u - u_hat).cwiseAbs2());
    if (value < best_value) {
      best_value = value;
      best = u;
    }
  }
  if (best.size() == 0) throw ConstraintError("no feasible point found");
  return best;
}

}  // namespace posfem
