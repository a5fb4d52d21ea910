#include "posfem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <random>
#include <stdexcept>

#include "posfem/assembly.hpp"

namespace posfem {

ScalarFunction droplet_initial(double delta, double C, double sigma_g) {
  return [=](double x, double y) { return delta + C * std::exp(-sigma_g * (x * x + y * y)); };
}

ScalarFunction tent_initial() {
  return [](double x, double) {
    if (x >= 0.25 && x <= 0.5) return 0.2 * (x - 0.25);
    if (x > 0.5 && x <= 0.75) return 0.2 * (0.75 - x);
    return 0.0;
  };
}

ScalarFunction deadcore_initial() {
  return [](double x, double) {
    const double d = x - 0.5;
    return d * d * d * d + 0.001;
  };
}

RipeningInitial ripening_initial(double b, int Q, std::uint64_t seed, const Rectangle& domain, double amplitude) {
  if (Q < 0) throw std::invalid_argument("bump count must be non-negative");
  if (!(std::abs(b) < 1.0)) throw std::invalid_argument("ripening mean must lie in (-1, 1)");
  RipeningInitial out;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(domain.x_min, domain.x_max), uy(domain.y_min, domain.y_max),
      us(-amplitude, amplitude);
  for (int i = 0; i < Q; ++i) {
    const double x = ux(gen), y = uy(gen);
    out.centres.emplace_back(x, y);
    out.amplitudes.push_back(us(gen));
  }
  auto bumps = [centres = out.centres](const std::vector<double>& s, double x, double y) {
    double v = 0.0;
    for (std::size_t i = 0; i < centres.size(); ++i) {
      const double dx = x - centres[i][0], dy = y - centres[i][1];
      v += s[i] * std::exp(-1e4 * (dx * dx + dy * dy));
    }
    return v;
  };

  // sample the bump centres and a fine grid; bumps have width ~0.01
  std::vector<Eigen::Vector2d> probes = out.centres;
  const int m = 400;
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      probes.emplace_back(domain.x_min + domain.width() * i / m, domain.y_min + domain.height() * j / m);
    }
  }
  double worst = 0.0;
  for (const auto& p : probes) worst = std::max(worst, std::abs(b + bumps(out.amplitudes, p[0], p[1])));
  const double limit = 1.0 - 1e-3;
  while (worst > limit) {
    out.rescaled = true;
    for (double& s : out.amplitudes) s *= 0.9;
    worst = 0.0;
    for (const auto& p : probes) worst = std::max(worst, std::abs(b + bumps(out.amplitudes, p[0], p[1])));
  }
  out.u0 = [b, bumps, s = out.amplitudes](double x, double y) { return b + bumps(s, x, y); };
  return out;
}

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::self_similar:
      return "self_similar";
    case CaseKind::manufactured:
      return "manufactured";
    case CaseKind::droplet:
      return "droplet";
    case CaseKind::tent:
      return "tent";
    case CaseKind::deadcore:
      return "deadcore";
    case CaseKind::ripening:
      return "ripening";
    case CaseKind::constant:
      return "constant";
  }
  return "?";
}

CaseKind parse_case_kind(const std::string& s) {
  for (CaseKind k : {CaseKind::self_similar, CaseKind::manufactured, CaseKind::droplet, CaseKind::tent,
                     CaseKind::deadcore, CaseKind::ripening, CaseKind::constant}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown case '" + s + "'");
}

std::string to_string(BcKind kind) { return kind == BcKind::natural ? "natural" : "dirichlet"; }

BcKind parse_bc_kind(const std::string& s) {
  if (s == "natural" || s == "neumann") return BcKind::natural;
  if (s == "dirichlet") return BcKind::dirichlet;
  throw std::invalid_argument("unknown boundary condition '" + s + "'");
}

int ExperimentSpec::num_steps() const { return static_cast<int>(std::llround((T - t0) / dt)); }

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (nx < 1 || ny < 1) fail("mesh.nx and mesh.ny must be positive");
  if (!(domain.x_min < domain.x_max && domain.y_min < domain.y_max)) fail("mesh domain bounds are inverted");
  if (!(dt > 0.0)) fail("time.dt must be positive");
  if (!(T - t0 >= dt * (1.0 - 1e-12))) fail("time.T must exceed time.t0 by at least one step");
  if (scheme < 1 || scheme > 4) fail("scheme.id must be 1, 2, 3 or 4");
  if (scheme == 4 && physics.energy.kind != FreeEnergy::Kind::null) {
    fail("scheme.id = 4 needs physics.energy = null");
  }
  if (physics.g_form && (physics.mobility.kind != Mobility::Kind::degenerate ||
                         physics.energy.kind != FreeEnergy::Kind::logarithmic)) {
    fail("physics.g_form needs the degenerate mobility and the logarithmic energy");
  }
  if (!(physics.gamma > 0.0)) fail("physics.gamma must be positive");
  if (!(eps > 0.0)) fail("constraints.eps must be positive");
  if (bounds.upper && !(bounds.lower < *bounds.upper)) fail("constraints.lower must be below constraints.upper");
  if (!(uzawa.alpha > 0.0 && uzawa.beta > 0.0 && uzawa.rho > 0.0)) fail("Uzawa step sizes must be positive");
  if (!(barrett.varrho > 0.0) || barrett.max_iter < 1) fail("scheme.varrho and scheme.max_iter must be positive");
  if (bc == BcKind::dirichlet && init.kind != CaseKind::self_similar && init.kind != CaseKind::manufactured) {
    fail("Dirichlet data needs a case with a closed-form solution");
  }
  if (init.kind == CaseKind::self_similar && !(t0 > 0.0)) fail("the self-similar case needs time.t0 > 0");
}

std::optional<ReferenceSolution> reference_solution(const ExperimentSpec& spec) {
  if (spec.init.kind == CaseKind::self_similar) {
    const SelfSimilarSpec s{spec.init.L};
    ReferenceSolution r;
    r.u = [s](double x, double y, double t) { return self_similar_u(s, x, y, t); };
    r.w = [s](double x, double y, double t) { return self_similar_w(s, x, y, t); };
    r.grad_u = [s](double x, double y, double t) { return self_similar_grad_u(s, x, y, t); };
    return r;
  }
  if (spec.init.kind == CaseKind::manufactured) {
    ManufacturedSpec m;
    m.C = spec.init.C;
    m.L = spec.init.L;
    m.gamma = spec.physics.gamma;
    m.mobility = spec.physics.mobility;
    m.sigma = TimeFunction::constant(spec.init.sigma);
    m.beta = TimeFunction::affine(spec.init.beta0, spec.init.beta1);
    ReferenceSolution r;
    r.u = [m](double x, double y, double t) { return manufactured_uw(m, x, y, t).first; };
    r.w = [m](double x, double y, double t) { return manufactured_uw(m, x, y, t).second; };
    r.grad_u = [m](double x, double y, double t) { return manufactured_grad_u(m, x, y, t); };
    r.grad_w = [m](double x, double y, double t) { return manufactured_grad_w(m, x, y, t); };
    r.source = [m](double x, double y, double t) { return manufactured_source(m, x, y, t); };
    return r;
  }
  return std::nullopt;
}

FeField initial_field(const ExperimentSpec& spec, const TriMesh& mesh) {
  const CaseParams& c = spec.init;
  switch (c.kind) {
    case CaseKind::self_similar:
    case CaseKind::manufactured: {
      const auto ref = reference_solution(spec);
      return interpolate(mesh, [&](double x, double y) { return ref->u(x, y, spec.t0); });
    }
    case CaseKind::droplet:
      return interpolate(mesh, droplet_initial(c.delta, c.C, c.sigma));
    case CaseKind::tent:
      return interpolate(mesh, tent_initial());
    case CaseKind::deadcore:
      return interpolate(mesh, deadcore_initial());
    case CaseKind::ripening:
      return interpolate(mesh, ripening_initial(c.b, c.Q, c.seed, spec.domain, c.amplitude).u0);
    case CaseKind::constant:
      return FeField::Constant(mesh.num_nodes(), c.value);
  }
  throw std::logic_error("unhandled case");
}

namespace {

struct Constrained {
  FeField u;
  int iterations = 0;
};

Constrained constraint_stage(const ExperimentSpec& spec, const TriMesh& mesh, const FeField& u_hat,
                             double target_mass) {
  switch (spec.scheme) {
    case 1: {
      UzawaParams p = spec.uzawa;
      p.eps = spec.eps;
      UzawaResult r = spec.conserve_mass ? uzawa_solve(mesh, u_hat, spec.bounds, target_mass, p)
                                         : uzawa_solve_unconstrained_mass(mesh, u_hat, spec.bounds, p);
      return {std::move(r.u), r.iterations};
    }
    case 2:
      return {scheme2_truncate(mesh, u_hat, spec.bounds).u, 0};
    case 3: {
      if (!spec.conserve_mass) return {scheme2_truncate(mesh, u_hat, spec.bounds).u, 0};
      Scheme3Result r = scheme3_apply(mesh, u_hat, spec.bounds, target_mass, spec.eps);
      return {std::move(r.u), r.secant.iterations};
    }
    default:
      throw std::logic_error("no constraint stage for this scheme");
  }
}

StepRecord make_record(const TriMesh& mesh, const FeField& u, double t, double initial_mass,
                       const PhysicsConfig& physics, int iterations) {
  StepRecord r;
  r.t = t;
  r.mass = integrate_p1(mesh, u);
  r.rel_mass_error = relative_mass_error(mesh, u, initial_mass).value;
  r.energy = discrete_energy(mesh, u, physics);
  r.u_min = u.minCoeff();
  r.u_max = u.maxCoeff();
  r.iterations = iterations;
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const StepCallback& on_step) {
  spec.validate();
  const std::clock_t start = std::clock();
  ExperimentResult out{build_structured(spec.nx, spec.ny, spec.domain, spec.diagonal), {}, {}, {}, spec.t0, 0.0, {}, 0.0};
  const TriMesh& mesh = out.mesh;
  RunDiagnostics& diag = out.diagnostics;
  diag.scheme = "scheme" + std::to_string(spec.scheme);
  diag.nx = spec.nx;
  diag.ny = spec.ny;
  diag.dt = spec.dt;

  Discretization disc(mesh);
  const auto ref = reference_solution(spec);
  BoundaryCondition bc;
  if (spec.bc == BcKind::dirichlet) {
    bc.dirichlet = [ref](double x, double y, double t) { return std::pair{ref->u(x, y, t), ref->w(x, y, t)}; };
  }
  const SourceFn source = ref ? ref->source : SourceFn{};
  BarrettParams barrett = spec.barrett;
  barrett.eps = spec.eps;

  const FeField u0 = initial_field(spec, mesh);
  const FeField w0 = ref ? interpolate(mesh, [&](double x, double y) { return ref->w(x, y, spec.t0); })
                         : discrete_chemical_potential(disc, u0, spec.physics);
  out.initial_mass = integrate_p1(mesh, u0);

  auto take_snapshots = [&](double t, const FeField& u, const FeField& w) {
    for (double ts : spec.snapshot_times) {
      if (std::abs(t - ts) <= 0.5 * spec.dt) out.snapshots.push_back({t, u, w});
    }
  };

  diag.append(make_record(mesh, u0, spec.t0, out.initial_mass, spec.physics, 0));
  take_snapshots(spec.t0, u0, w0);

  SchemeState s{u0, u0, w0, FeField::Zero(mesh.num_nodes()), spec.dt, spec.t0, 0};
  const int steps = spec.num_steps();
  for (int n = 0; n < steps; ++n) {
    try {
      s.t = spec.t0 + n * spec.dt;
      s.step_index = n;
      const double t_new = spec.t0 + (n + 1) * spec.dt;
      FeField u, w, r = s.r_curr, u_hat;
      int iterations = 0;
      if (spec.scheme == 4) {
        BarrettResult b = n == 0 ? barrett_start_step(disc, s, spec.physics, bc, barrett, source)
                                 : barrett_scheme4_step(disc, s, spec.physics, bc, barrett, source);
        u = std::move(b.u);
        w = std::move(b.w);
        r = std::move(b.r);
        iterations = b.iterations;
        u_hat = u;
      } else {
        CoupledSolution c = n == 0 ? euler_start_step(disc, s, spec.physics, bc, source)
                                   : bdf2_step(disc, s, spec.physics, bc, source);
        Constrained k = constraint_stage(spec, mesh, c.u_hat, out.initial_mass);
        u = std::move(k.u);
        w = std::move(c.w);
        u_hat = std::move(c.u_hat);
        iterations = k.iterations;
      }
      if (bc.is_dirichlet()) {
        for (const auto& [node, value] : bc.values(mesh, t_new)) u[node] = value.first;
      }
      if (!u.allFinite() || !w.allFinite()) throw std::runtime_error("solution is not finite");

      diag.append(make_record(mesh, u, t_new, out.initial_mass, spec.physics, iterations));
      if (on_step) on_step({n + 1, t_new, u, w, u_hat, iterations});
      take_snapshots(t_new, u, w);
      s.u_prev = std::move(s.u_curr);
      s.u_curr = std::move(u);
      s.w_curr = std::move(w);
      s.r_curr = std::move(r);
      s.t = t_new;
      s.step_index = n + 1;
    } catch (const std::exception& e) {
      throw ExperimentError("step " + std::to_string(n + 1) + ": " + e.what(), n + 1, diag);
    }
  }
  out.u = s.u_curr;
  out.w = s.w_curr;
  out.t = s.t;
  out.cpu_seconds = static_cast<double>(std::clock() - start) / CLOCKS_PER_SEC;
  return out;
}

ExperimentSpec self_similar_spec(int n, int scheme) {
  ExperimentSpec s;
  s.name = "self_similar";
  s.nx = s.ny = n;
  s.domain = {-0.5, 0.5, -0.5, 0.5};
  s.diagonal = Diagonal::uniform;
  s.t0 = 0.001;
  s.T = 0.0012;
  s.dt = 1e-6;
  s.scheme = scheme;
  s.physics.mobility = Mobility::power(1.0);
  s.bc = BcKind::dirichlet;
  s.eps = 1e-10;
  s.barrett.varrho = 3500.0;
  s.barrett.max_iter = 2000;
  s.init.kind = CaseKind::self_similar;
  s.init.L = 1.0;
  s.snapshot_times = {0.001, 0.0012};
  return s;
}

ExperimentSpec manufactured_spec(int n, int scheme, bool u_dependent_mobility) {
  ExperimentSpec s;
  s.name = u_dependent_mobility ? "manufactured_udep" : "manufactured";
  s.nx = s.ny = n;
  s.domain = {-0.5, 0.5, -0.5, 0.5};
  s.diagonal = Diagonal::uniform;
  s.t0 = 0.0;
  if (u_dependent_mobility) {
    s.physics.mobility = Mobility::power(1.0);
    s.dt = 1e-5;
    s.T = 0.005;
  } else {
    s.physics.mobility = Mobility::constant(1.0);
    s.dt = 1e-3;
    s.T = 0.5;
  }
  s.scheme = scheme;
  s.bc = BcKind::dirichlet;
  s.conserve_mass = false;
  s.eps = 1e-8;
  s.barrett.varrho = 900.0;
  s.init.kind = CaseKind::manufactured;
  s.init.C = 1.0;
  s.init.L = 0.5;
  s.init.sigma = 1.0;
  s.init.beta0 = 1.0;
  s.init.beta1 = 1.0;
  s.snapshot_times = {s.T};
  return s;
}

ExperimentSpec droplet_spec() {
  ExperimentSpec s;
  s.name = "droplet";
  s.nx = 35;
  s.ny = 140;
  s.domain = {-0.5, 0.5, -2.0, 2.0};
  s.dt = 1e-5;
  s.T = 0.01;
  s.scheme = 3;
  s.physics.mobility = Mobility::power(1.0);
  s.init.kind = CaseKind::droplet;
  s.init.delta = 0.0;
  s.init.C = 2.0;
  s.init.sigma = 80.0;
  s.snapshot_times = {0.0, 1e-4, 0.0012, 0.01};
  return s;
}

ExperimentSpec tent_spec() {
  ExperimentSpec s;
  s.name = "tent";
  s.nx = 100;
  s.ny = 33;
  s.domain = {0.0, 1.0, 0.0, 0.3};
  s.dt = 0.01;
  s.T = 5.0;
  s.scheme = 3;
  s.physics.mobility = Mobility::power(4.0);
  s.init.kind = CaseKind::tent;
  s.snapshot_times = {0.0, 2.0, 5.0};
  return s;
}

ExperimentSpec deadcore_spec(double p) {
  ExperimentSpec s;
  s.name = "deadcore";
  s.nx = 150;
  s.ny = 50;
  s.domain = {0.0, 1.0, 0.0, 0.3};
  s.scheme = 3;
  s.physics.mobility = Mobility::power(p);
  s.init.kind = CaseKind::deadcore;
  if (p < 1.5) {
    s.dt = 1e-5;
    s.T = 0.005;
    s.snapshot_times = {0.0, 0.0005, 0.0019, 0.005};
  } else {
    s.dt = 0.01;
    s.T = 5.0;
    s.snapshot_times = {0.0, 0.6, 1.7, 5.0};
  }
  return s;
}

ExperimentSpec ripening_spec() {
  ExperimentSpec s;
  s.name = "ripening";
  s.nx = s.ny = 100;
  s.domain = {0.0, 1.0, 0.0, 1.0};
  s.dt = 1e-3;
  s.T = 1.0;
  s.scheme = 3;
  s.physics.mobility = Mobility::degenerate();
  s.physics.energy = FreeEnergy::logarithmic(0.05, 0.1);
  s.physics.gamma = 1e-5;
  s.physics.g_form = true;
  s.bounds = BoundSpec::two_sided(-1.0, 1.0);
  s.init.kind = CaseKind::ripening;
  s.init.b = -0.4;
  s.init.Q = 20;
  s.init.amplitude = 0.3;
  s.init.seed = 1;
  s.snapshot_times = {0.0, 0.025, 0.125, 0.25, 1.0};
  return s;
}

}  // namespace posfem
