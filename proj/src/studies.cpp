#include "posfem/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace posfem {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int k = 0; k < workers; ++k) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ConvergenceRow exact_errors(const ExperimentSpec& spec, const ExperimentResult& result) {
  const auto ref = reference_solution(spec);
  if (!ref) throw std::invalid_argument("case.kind has no closed-form solution to measure errors against");
  const double t = result.t;
  const TriMesh& mesh = result.mesh;
  auto u = [&](double x, double y) { return ref->u(x, y, t); };
  auto grad_u = [&](double x, double y) { return ref->grad_u(x, y, t); };
  const ErrorNorms eu = interpolant_errors(mesh, result.u, u, grad_u);
  ConvergenceRow row;
  row.l2_u = eu.l2;
  row.h1_u = *eu.h1;
  row.l2_w = interpolant_errors(mesh, result.w, [&](double x, double y) { return ref->w(x, y, t); }).l2;
  row.l2_u_exact = error_norms(mesh, result.u, u).l2;
  row.cpu_seconds = result.cpu_seconds;
  row.mean_iterations = result.diagnostics.mean_iterations();
  return row;
}

void fill_orders(std::vector<ConvergenceRow>& rows, bool space) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double h_prev = space ? 1.0 / rows[i - 1].step : rows[i - 1].step;
    const double h = space ? 1.0 / rows[i].step : rows[i].step;
    const double lr = std::log(h_prev / h);
    rows[i].order_u = std::log(rows[i - 1].l2_u / rows[i].l2_u) / lr;
    rows[i].order_w = std::log(rows[i - 1].l2_w / rows[i].l2_w) / lr;
  }
}

std::vector<ConvergenceRow> space_convergence(const ExperimentSpec& base, const std::vector<int>& meshes,
                                              int threads) {
  if (meshes.size() < 2) throw std::invalid_argument("--meshes needs at least two entries");
  if (!reference_solution(base)) throw std::invalid_argument("case.kind has no closed-form solution");
  std::vector<ConvergenceRow> rows(meshes.size());
  parallel_for(static_cast<int>(meshes.size()), threads, [&](int i) {
    ExperimentSpec s = base;
    s.nx = meshes[i];
    s.ny = std::max(1, static_cast<int>(std::lround(static_cast<double>(meshes[i]) * base.ny / base.nx)));
    s.snapshot_times.clear();
    rows[i] = exact_errors(s, run_experiment(s));
    rows[i].step = meshes[i];
  });
  fill_orders(rows, true);
  return rows;
}

std::vector<ConvergenceRow> time_convergence(const ExperimentSpec& base, const std::vector<double>& dts,
                                             double ref_dt, int threads) {
  if (dts.size() < 3) throw std::invalid_argument("--dts needs at least three entries");
  if (!(ref_dt > 0.0)) throw std::invalid_argument("--ref-dt must be positive");
  const int count = static_cast<int>(dts.size());
  std::vector<std::optional<ExperimentResult>> results(count + 1);
  parallel_for(count + 1, threads, [&](int i) {
    ExperimentSpec s = base;
    s.dt = i == count ? ref_dt : dts[i];
    s.snapshot_times.clear();
    results[i] = run_experiment(s);
  });
  const ExperimentResult& ref = *results[count];
  std::vector<ConvergenceRow> rows(count);
  for (int i = 0; i < count; ++i) {
    const ExperimentResult& r = *results[i];
    if (std::abs(r.t - ref.t) > 1e-9 * std::max(1.0, std::abs(ref.t))) {
      throw std::invalid_argument("time.T is not a multiple of every dt in the ladder");
    }
    const ErrorNorms du = fe_difference(ref.mesh, r.u, ref.u);
    const ErrorNorms dw = fe_difference(ref.mesh, r.w, ref.w);
    rows[i].step = dts[i];
    rows[i].l2_u = du.l2;
    rows[i].h1_u = *du.h1;
    rows[i].l2_w = dw.l2;
    rows[i].cpu_seconds = r.cpu_seconds;
    rows[i].mean_iterations = r.diagnostics.mean_iterations();
  }
  fill_orders(rows, false);
  return rows;
}

std::vector<CompareRow> compare_schemes(const ExperimentSpec& base, int threads) {
  std::vector<CompareRow> rows(4);
  std::vector<std::optional<ExperimentResult>> results(4);
  parallel_for(4, threads, [&](int i) {
    ExperimentSpec s = base;
    s.scheme = i + 1;
    s.snapshot_times.clear();
    CompareRow& row = rows[i];
    row.scheme = i + 1;
    try {
      s.validate();
      results[i] = run_experiment(s);
    } catch (const std::exception& e) {
      row.failure = e.what();
      return;
    }
    row.ran = true;
    const ExperimentResult& r = *results[i];
    row.cpu_seconds = r.cpu_seconds;
    row.mean_iterations = r.diagnostics.mean_iterations();
    row.u_min = r.u.minCoeff();
    for (const StepRecord& rec : r.diagnostics.records) {
      row.max_rel_mass_error = std::max(row.max_rel_mass_error, rec.rel_mass_error);
    }
    if (reference_solution(s)) row.l2_exact = exact_errors(s, r).l2_u;
  });
  const auto first = std::find_if(rows.begin(), rows.end(), [](const CompareRow& r) { return r.ran; });
  if (first != rows.end()) {
    const ExperimentResult& a = *results[first - rows.begin()];
    for (int i = 0; i < 4; ++i) {
      if (rows[i].ran) rows[i].l2_diff_to_first = fe_difference(a.mesh, results[i]->u, a.u).l2;
    }
  }
  return rows;
}

}  // namespace posfem
