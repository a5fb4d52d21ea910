#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "posfem/mesh.hpp"

namespace posfem {

/// Nodal bounds a <= u (<= b).
struct BoundSpec {
  double lower = 0.0;
  std::optional<double> upper;
  /// Optional per-node lower bound a(x_j); overrides `lower` when non-empty.
  FeField lower_field;

  static BoundSpec one_sided(double a) { return {a, std::nullopt, {}}; }
  static BoundSpec two_sided(double a, double b) { return {a, b, {}}; }

  double lower_at(Eigen::Index j) const { return lower_field.size() ? lower_field[j] : lower; }
  bool is_two_sided() const { return upper.has_value(); }
  /// Throws std::invalid_argument unless lower < upper.
  void validate() const;
};

/// Clamp every nodal value into the bounds.
FeField project_nodal(const FeField& u, const BoundSpec& bounds);

struct TruncationResult {
  FeField u;
  double mass_defect = 0.0;  ///< integral of u minus integral of the candidate
};

/// Classical truncation: nodal clamp, mass not preserved.
TruncationResult scheme2_truncate(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds);

/// Theta(mu) = integral of P[u_hat - mu] minus target_mass.
double theta(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double mu, double target_mass);

/// Interval [mu_lo, mu_hi] with Theta(mu_lo) >= 0 >= Theta(mu_hi) whenever the
/// target lies between the mass of the lower bound and that of the upper bound
/// (or the candidate mass in the one-sided case).
std::pair<double, double> theta_bracket(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds,
                                        double target_mass);

struct SecantResult {
  double mu = 0.0;
  int iterations = 0;
  bool bisection_used = false;  ///< a flat or out-of-bracket secant step was replaced
  double theta = 0.0;           ///< Theta(mu) at return
};

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Secant iteration for Theta(mu) = 0 safeguarded by the bracket. Stops when
/// |mu^{k+1} - mu^k| <= eps and |Theta| <= |Omega| eps. Throws ConstraintError
/// after max_iter updates.
SecantResult secant_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                          double eps, int max_iter = 200);

/// Plain bisection on the bracket, used as a reference.
double bisection_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                       double tol = 1e-12, int max_iter = 400);

struct Scheme3Result {
  FeField u;
  SecantResult secant;
};

/// Conservative truncation P[u_hat - mu*].
Scheme3Result scheme3_apply(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                            double eps, int max_iter = 200);

struct UzawaParams {
  double alpha = 1.0;
  double beta = 1.0;
  double rho = 1.0;
  double rho_min = 1.0;  ///< lower bound of the rho sequence, enters the mass constant only
  double eps = 1e-10;
  int max_iter = 10000;

  void validate() const;
};

struct UzawaResult {
  FeField u;
  FeField lambda;     ///< multiplier of u >= a
  FeField lambda_hi;  ///< multiplier of u <= b, zero for one-sided bounds
  double mu = 0.0;
  int iterations = 0;
  double tau = 0.0;  ///< ||lambda^k - lambda^{k-1}||_L2 at return
  double xi = 0.0;   ///< |mu^k - mu^{k-1}|
  double eta = 0.0;  ///< ||u^k - u^{k-1}||_L2
};

class UzawaNonConvergence : public std::runtime_error {
 public:
  UzawaNonConvergence(const std::string& what, UzawaResult last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const UzawaResult& last() const { return last_; }

 private:
  UzawaResult last_;
};

/// Multipliers to start the Uzawa iteration from, typically those of the
/// previous time step.
struct UzawaMultipliers {
  FeField lambda;
  FeField lambda_hi;
  double mu = 0.0;
};

/// Uzawa iteration for the bound- and mass-constrained closest-point problem.
/// Starts from P[u_hat] and the given multipliers (zero when absent).
UzawaResult uzawa_solve(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass,
                        const UzawaParams& params, const std::optional<UzawaMultipliers>& start = {});

/// Same iteration with the mass multiplier frozen at zero.
UzawaResult uzawa_solve_unconstrained_mass(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds,
                                           const UzawaParams& params,
                                           const std::optional<UzawaMultipliers>& start = {});

/// Theorem constants for the distance between Uzawa and conservative truncation
/// (c1) and the mass defect (c2).
double uzawa_c1(const UzawaParams& params, double domain_area);
double uzawa_c2(const UzawaParams& params, double domain_area);

/// Exact minimiser of sum_j m_j (u_j - u_hat_j)^2 over a <= u <= b with
/// sum_j m_j u_j = target (m = lumped masses), by enumerating active sets.
/// Test oracle; limited to 12 nodes. Throws ConstraintError when infeasible.
FeField qp_oracle(const TriMesh& mesh, const FeField& u_hat, const BoundSpec& bounds, double target_mass);

}  // namespace posfem
