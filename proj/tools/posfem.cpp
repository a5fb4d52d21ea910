// posfem: run experiments, convergence studies and scheme comparisons.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "posfem/config.hpp"
#include "posfem/output.hpp"
#include "posfem/studies.hpp"

namespace fs = std::filesystem;
using namespace posfem;

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_config = 2;

int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("POSFEM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = cap;
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring POSFEM_THREADS='" << env << "'\n";
    }
  }
  return n;
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%.10g.vtk", t);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_convergence(const fs::path& path, const std::vector<ConvergenceRow>& rows) {
  std::vector<std::vector<std::string>> table;
  for (const ConvergenceRow& r : rows) {
    table.push_back({format_double(r.step), format_double(r.l2_u), format_double(r.l2_w), format_double(r.h1_u),
                     opt(r.order_u), opt(r.order_w), format_double(r.cpu_seconds)});
  }
  write_csv(path.string(), {"mesh_or_dt", "L2_u", "L2_w", "H1_u", "order_u", "order_w", "cpu_seconds"}, table);
}

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<int> scheme;
  std::string mode = "space";
  std::vector<int> meshes{25, 50, 100};
  std::vector<double> dts{4e-4, 2e-4, 1e-4, 5e-5};
  double ref_dt = 1e-6;
};

ExperimentSpec load(const Options& o) {
  ExperimentSpec spec = load_config(o.config);
  if (o.scheme) {
    spec.scheme = *o.scheme;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scheme.id", e.what());
    }
  }
  return spec;
}

int cmd_run(const Options& o) {
  const ExperimentSpec spec = load(o);
  fs::create_directories(o.out);
  const ExperimentResult r = run_experiment(spec);
  write_diagnostics_csv((fs::path(o.out) / "diagnostics.csv").string(), r.diagnostics);
  for (const Snapshot& s : r.snapshots) write_vtk((fs::path(o.out) / snapshot_name(s.t)).string(), r.mesh, s.u, s.w);
  std::cout << spec.name << ": " << spec.num_steps() << " steps, final t = " << r.t
            << ", mean iterations = " << r.diagnostics.mean_iterations() << ", cpu = " << r.cpu_seconds << " s\n";
  return 0;
}

int cmd_convergence(const Options& o) {
  const ExperimentSpec spec = load(o);
  std::vector<ConvergenceRow> rows;
  try {
    rows = o.mode == "space" ? space_convergence(spec, o.meshes, thread_cap())
                             : time_convergence(spec, o.dts, o.ref_dt, thread_cap());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(o.mode == "space" ? "--meshes" : "--dts", e.what());
  }
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / ("convergence_" + o.mode + ".csv");
  write_convergence(path, rows);
  for (const ConvergenceRow& r : rows) {
    std::cout << r.step << "  L2_u " << r.l2_u << "  L2_w " << r.l2_w << "  H1_u " << r.h1_u << "  order_u "
              << opt(r.order_u) << "  order_w " << opt(r.order_w) << '\n';
  }
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_compare(const Options& o) {
  const ExperimentSpec spec = load(o);
  const std::vector<CompareRow> rows = compare_schemes(spec, thread_cap());
  std::vector<std::vector<std::string>> table;
  for (const CompareRow& r : rows) {
    if (!r.ran) {
      std::cout << "scheme " << r.scheme << ": skipped (" << r.failure << ")\n";
      table.push_back({std::to_string(r.scheme), "false", "", "", "", "", "", ""});
      continue;
    }
    table.push_back({std::to_string(r.scheme), "true", format_double(r.l2_diff_to_first), opt(r.l2_exact),
                     format_double(r.mean_iterations), format_double(r.max_rel_mass_error), format_double(r.u_min),
                     format_double(r.cpu_seconds)});
    std::cout << "scheme " << r.scheme << ": L2 diff " << r.l2_diff_to_first << ", iterations "
              << r.mean_iterations << ", max mass error " << r.max_rel_mass_error << ", min u " << r.u_min << '\n';
  }
  fs::create_directories(o.out);
  write_csv((fs::path(o.out) / "compare.csv").string(),
            {"scheme", "ran", "L2_diff", "L2_exact", "mean_iters", "max_rel_mass_err", "u_min", "cpu_seconds"},
            table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity- and bound-preserving finite elements for fourth-order parabolic problems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--scheme", o.scheme, "override scheme.id")->check(CLI::Range(1, 4));
  };
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  common(run);
  CLI::App* conv = app.add_subcommand("convergence", "mesh or time-step ladder against a reference");
  common(conv);
  conv->add_option("--mode", o.mode, "space or time")->check(CLI::IsMember({"space", "time"}));
  conv->add_option("--meshes", o.meshes, "mesh ladder, e.g. 25,50,100")->delimiter(',');
  conv->add_option("--dts", o.dts, "time-step ladder")->delimiter(',');
  conv->add_option("--ref-dt", o.ref_dt, "time step of the reference run");
  CLI::App* cmp = app.add_subcommand("compare", "run Schemes 1-4 on one config");
  common(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run) return cmd_run(o);
    if (*conv) return cmd_convergence(o);
    return cmd_compare(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const ExperimentError& e) {
    std::cerr << "run failed at step " << e.step() << ": " << e.what() << '\n';
    return exit_runtime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}
