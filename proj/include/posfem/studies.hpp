#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posfem/experiments.hpp"

namespace posfem {

/// In space studies the errors are taken against nodal interpolants of the
/// exact solution and of its gradient (see interpolant_errors). In time
/// studies all three are differences to the reference run.
struct ConvergenceRow {
  double step = 0.0;  ///< mesh count n (space) or dt (time)
  double l2_u = 0.0;
  double l2_w = 0.0;
  double h1_u = 0.0;
  double l2_u_exact = 0.0;  ///< ||u_h - u||_L2 against the exact function (space only)
  std::optional<double> order_u;  ///< empty on the first row
  std::optional<double> order_w;
  double cpu_seconds = 0.0;
  double mean_iterations = 0.0;
};

/// Errors of a finished run against the closed-form solution at the final
/// time, measured as described above. Throws std::invalid_argument when the case has none.
ConvergenceRow exact_errors(const ExperimentSpec& spec, const ExperimentResult& result);

/// Fill order_u / order_w from consecutive rows, log(e_{i-1}/e_i) / log(h_{i-1}/h_i)
/// with h = 1/n in space and h = dt in time.
void fill_orders(std::vector<ConvergenceRow>& rows, bool space);

/// nx = n on every rung, ny scaled with the aspect of the base spec. Runs
/// are distributed over at most `threads` workers.
std::vector<ConvergenceRow> space_convergence(const ExperimentSpec& base, const std::vector<int>& meshes,
                                              int threads = 1);

/// Errors on the base mesh against a run with ref_dt, all from t0 to T.
std::vector<ConvergenceRow> time_convergence(const ExperimentSpec& base, const std::vector<double>& dts,
                                             double ref_dt, int threads = 1);

struct CompareRow {
  int scheme = 0;
  bool ran = false;
  std::string failure;           ///< why the scheme was skipped or failed
  double l2_diff_to_first = 0.0;  ///< final-time L2 distance to the first scheme that ran
  std::optional<double> l2_exact;
  double mean_iterations = 0.0;
  double max_rel_mass_error = 0.0;
  double u_min = 0.0;
  double cpu_seconds = 0.0;
};

/// Run Schemes 1 to 4 on the same spec.
std::vector<CompareRow> compare_schemes(const ExperimentSpec& base, int threads = 1);

/// Parallel map over [0, count) with at most `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace posfem
