#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "posfem/analytic.hpp"
#include "posfem/constraints.hpp"
#include "posfem/diagnostics.hpp"
#include "posfem/mesh.hpp"
#include "posfem/physics.hpp"
#include "posfem/schemes.hpp"

namespace posfem {

/// u0 = delta + C exp(-sigma_g (x^2 + y^2))
ScalarFunction droplet_initial(double delta, double C, double sigma_g);

/// Piecewise-linear tent in x with support [0.25, 0.75] and height 0.05.
ScalarFunction tent_initial();

/// u0 = (x - 0.5)^4 + 0.001
ScalarFunction deadcore_initial();

struct RipeningInitial {
  ScalarFunction u0;
  std::vector<Eigen::Vector2d> centres;
  std::vector<double> amplitudes;  ///< after rescaling
  bool rescaled = false;
};

/// b + sum_i s_i exp(-1e4 |x - p_i|^2) with p_i uniform in the domain and s_i
/// uniform in [-amplitude, amplitude]. Amplitudes are scaled down if the sum
/// would leave [-1, 1]. Deterministic for a fixed seed.
RipeningInitial ripening_initial(double b, int Q, std::uint64_t seed, const Rectangle& domain,
                                 double amplitude = 0.3);

enum class CaseKind { self_similar, manufactured, droplet, tent, deadcore, ripening, constant };
enum class BcKind { natural, dirichlet };

std::string to_string(CaseKind kind);
CaseKind parse_case_kind(const std::string& s);
std::string to_string(BcKind kind);
BcKind parse_bc_kind(const std::string& s);

/// Parameters of the initial data and of the reference solutions.
struct CaseParams {
  CaseKind kind = CaseKind::self_similar;
  double L = 1.0;        ///< support parameter (self-similar, manufactured)
  double C = 1.0;        ///< amplitude (manufactured, droplet)
  double sigma = 1.0;    ///< manufactured sigma, droplet decay
  double beta0 = 1.0;    ///< manufactured beta(t) = beta0 + beta1 t
  double beta1 = 1.0;
  double delta = 0.0;    ///< droplet precursor film
  double b = -0.4;       ///< ripening mean
  int Q = 20;            ///< ripening bump count
  double amplitude = 0.3;
  std::uint64_t seed = 1;
  double value = 0.5;    ///< constant state
};

struct ExperimentSpec {
  std::string name = "experiment";
  int nx = 25;
  int ny = 25;
  Rectangle domain{-0.5, 0.5, -0.5, 0.5};
  Diagonal diagonal = Diagonal::alternating;
  double t0 = 0.0;
  double dt = 1e-3;
  double T = 1.0;
  int scheme = 3;
  PhysicsConfig physics;
  BoundSpec bounds = BoundSpec::one_sided(0.0);
  /// Impose the initial mass in schemes 1 and 3; off for forced problems.
  bool conserve_mass = true;
  BcKind bc = BcKind::natural;
  double eps = 1e-10;
  UzawaParams uzawa;
  BarrettParams barrett;
  CaseParams init;
  std::vector<double> snapshot_times;

  int num_steps() const;
  /// Throws std::invalid_argument naming the offending setting.
  void validate() const;
};

/// Closed-form solution of a case, if it has one.
struct ReferenceSolution {
  std::function<double(double, double, double)> u;
  std::function<double(double, double, double)> w;
  std::function<Eigen::Vector2d(double, double, double)> grad_u;
  std::function<Eigen::Vector2d(double, double, double)> grad_w;  ///< may be empty
  SourceFn source;                                                ///< may be empty
};

std::optional<ReferenceSolution> reference_solution(const ExperimentSpec& spec);

struct Snapshot {
  double t = 0.0;
  FeField u;
  FeField w;
};

struct StepView {
  int step = 0;  ///< index of the new time level
  double t = 0.0;
  const FeField& u;
  const FeField& w;
  const FeField& u_hat;  ///< unconstrained candidate (equals u for the Barrett scheme)
  int iterations = 0;
};

using StepCallback = std::function<void(const StepView&)>;

struct ExperimentResult {
  TriMesh mesh;
  RunDiagnostics diagnostics;
  FeField u;
  FeField w;
  double t = 0.0;
  double initial_mass = 0.0;
  std::vector<Snapshot> snapshots;
  double cpu_seconds = 0.0;
};

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& what, int step, RunDiagnostics so_far)
      : std::runtime_error(what), step_(step), diagnostics_(std::move(so_far)) {}
  int step() const { return step_; }
  const RunDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  int step_;
  RunDiagnostics diagnostics_;
};

/// Interpolated initial data of the case at spec.t0.
FeField initial_field(const ExperimentSpec& spec, const TriMesh& mesh);

/// Starting step, then BDF2 steps, each followed by the constraint stage of
/// the selected scheme. Records diagnostics for the initial state and every
/// accepted step. Failures are rethrown as ExperimentError.
ExperimentResult run_experiment(const ExperimentSpec& spec, const StepCallback& on_step = {});

/// Canned specs for the cases of the numerical section, at desk scale.
ExperimentSpec self_similar_spec(int n, int scheme);
ExperimentSpec manufactured_spec(int n, int scheme, bool u_dependent_mobility);
ExperimentSpec droplet_spec();
ExperimentSpec tent_spec();
ExperimentSpec deadcore_spec(double p);
ExperimentSpec ripening_spec();

}  // namespace posfem
