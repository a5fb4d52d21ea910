#include "doctest.h"
#include "posfem/studies.hpp"

#include <atomic>
#include <cmath>

using namespace posfem;

TEST_CASE("orders from synthetic errors") {
  std::vector<ConvergenceRow> rows(3);
  const double n[] = {10, 20, 40};
  for (int i = 0; i < 3; ++i) {
    rows[i].step = n[i];
    rows[i].l2_u = std::pow(n[i], -2.0);
    rows[i].l2_w = std::pow(n[i], -1.0);
  }
  fill_orders(rows, true);
  CHECK_FALSE(rows[0].order_u);
  CHECK(*rows[1].order_u == doctest::Approx(2.0));
  CHECK(*rows[2].order_w == doctest::Approx(1.0));

  std::vector<ConvergenceRow> t(2);
  t[0].step = 1e-3;
  t[0].l2_u = 4e-6;
  t[1].step = 5e-4;
  t[1].l2_u = 1e-6;
  t[0].l2_w = t[1].l2_w = 1.0;
  fill_orders(t, false);
  CHECK(*t[1].order_u == doctest::Approx(2.0));
  CHECK(*t[1].order_w == doctest::Approx(0.0));
}

TEST_CASE("parallel_for covers the range and rethrows") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](int i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("small space study on the manufactured case") {
  ExperimentSpec s = manufactured_spec(4, 2, false);
  s.dt = 1e-2;
  s.T = 0.05;
  const auto rows = space_convergence(s, {8, 16}, 2);
  REQUIRE(rows.size() == 2u);
  CHECK(rows[1].l2_u < rows[0].l2_u);
  CHECK(rows[1].order_u);
  CHECK_THROWS_AS(space_convergence(s, {8}), std::invalid_argument);
  ExperimentSpec none = droplet_spec();
  CHECK_THROWS_AS(space_convergence(none, {4, 8}), std::invalid_argument);
}

TEST_CASE("small time study and comparison") {
  ExperimentSpec s = manufactured_spec(8, 2, true);
  s.T = 0.002;
  const auto rows = time_convergence(s, {1e-3, 5e-4, 2.5e-4}, 1.25e-4, 2);
  REQUIRE(rows.size() == 3u);
  CHECK(rows[2].l2_u < rows[0].l2_u);
  CHECK_THROWS_AS(time_convergence(s, {1e-3, 5e-4}, 1e-4), std::invalid_argument);

  ExperimentSpec d = self_similar_spec(10, 1);
  d.T = d.t0 + 2e-5;
  const auto cmp = compare_schemes(d, 2);
  REQUIRE(cmp.size() == 4u);
  for (const auto& c : cmp) {
    CAPTURE(c.scheme);
    CHECK(c.ran);
    CHECK(c.l2_exact);
  }
  CHECK(cmp[0].l2_diff_to_first == 0.0);
  CHECK(cmp[2].l2_diff_to_first < 1e-9);
  CHECK(cmp[1].max_rel_mass_error > 1e-4);
  CHECK(cmp[2].max_rel_mass_error <= 1e-12);
  CHECK(cmp[0].u_min >= 0.0);

  // the Barrett iteration stalls on a film that is almost zero over most of the domain
  ExperimentSpec drop = droplet_spec();
  drop.nx = 6;
  drop.ny = 24;
  drop.dt = 1e-4;
  drop.T = 3e-4;
  drop.uzawa.rho = drop.uzawa.rho_min = 0.25;
  const auto dc = compare_schemes(drop, 2);
  CHECK(dc[2].ran);
  CHECK_FALSE(dc[3].ran);
  CHECK(dc[3].failure.find("Barrett") != std::string::npos);
}
