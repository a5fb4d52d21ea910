#include "doctest.h"
#include "posfem/mesh.hpp"

#include <random>
#include <set>

#include "oracles.hpp"

using namespace posfem;

TEST_CASE("structured mesh counts and numbering") {
  for (Diagonal d : {Diagonal::alternating, Diagonal::uniform}) {
    const auto m = build_structured(4, 3, {0.0, 2.0, -1.0, 0.5}, d);
    CHECK(m.num_nodes() == 20);
    CHECK(m.num_triangles() == 24);
    CHECK(m.node(0).isApprox(Eigen::Vector2d(0.0, -1.0)));
    CHECK(m.node(6).isApprox(Eigen::Vector2d(0.5, -0.5)));
    CHECK(m.node(19).isApprox(Eigen::Vector2d(2.0, 0.5)));
    CHECK(m.areas().sum() == doctest::Approx(3.0));
    CHECK(m.boundary_nodes().size() == 14u);
    CHECK(m.is_boundary(0));
    CHECK_FALSE(m.is_boundary(6));
  }
}

TEST_CASE("triangles are counterclockwise with matching areas") {
  const auto m = build_structured(5, 4, {-1.0, 1.0, 0.0, 1.0});
  for (int k = 0; k < m.num_triangles(); ++k) {
    const auto& t = m.triangles();
    const Eigen::Vector2d a = m.node(t(k, 0)), b = m.node(t(k, 1)), c = m.node(t(k, 2));
    const double cross = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    CHECK(cross > 0.0);
    CHECK(m.area(k) == doctest::Approx(0.5 * cross));
  }
}

TEST_CASE("basis gradients reproduce the barycentric coordinates") {
  const auto m = build_structured(3, 3, {0.0, 1.0, 0.0, 1.0});
  for (int k = 0; k < m.num_triangles(); ++k) {
    const auto& t = m.triangles();
    const Eigen::Vector2d a = m.node(t(k, 0)), b = m.node(t(k, 1)), c = m.node(t(k, 2));
    const Eigen::Vector2d p = 0.2 * a + 0.3 * b + 0.5 * c;
    const Eigen::Vector3d l = oracle::barycentric(a, b, c, p);
    const Eigen::Vector3d l2 = oracle::barycentric(a, b, c, p + Eigen::Vector2d(1e-3, 0.0));
    const Eigen::Vector3d l3 = oracle::barycentric(a, b, c, p + Eigen::Vector2d(0.0, 1e-3));
    for (int v = 0; v < 3; ++v) {
      CHECK(m.basis_gradients(k)(v, 0) == doctest::Approx((l2[v] - l[v]) / 1e-3));
      CHECK(m.basis_gradients(k)(v, 1) == doctest::Approx((l3[v] - l[v]) / 1e-3));
    }
  }
}

TEST_CASE("diagonal patterns") {
  const auto uni = build_structured(2, 2, {0.0, 1.0, 0.0, 1.0}, Diagonal::uniform);
  const auto alt = build_structured(2, 2, {0.0, 1.0, 0.0, 1.0}, Diagonal::alternating);
  // the centre node touches 6 triangles with uniform cuts and 4 or 8 otherwise
  auto touching = [](const TriMesh& m, int j) {
    int c = 0;
    for (int k = 0; k < m.num_triangles(); ++k)
      for (int v = 0; v < 3; ++v) c += m.triangles()(k, v) == j;
    return c;
  };
  CHECK(touching(uni, 4) == 6);
  CHECK((touching(alt, 4) == 4 || touching(alt, 4) == 8));
  CHECK(parse_diagonal("uniform") == Diagonal::uniform);
  CHECK(parse_diagonal(to_string(Diagonal::alternating)) == Diagonal::alternating);
  CHECK_THROWS(parse_diagonal("diagonal"));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_structured(0, 3, {0.0, 1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_structured(3, 3, {1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("mesh size is the cell diagonal") {
  const auto m = build_structured(10, 5, {0.0, 1.0, 0.0, 1.0});
  CHECK(mesh_size(m) == doctest::Approx(std::hypot(0.1, 0.2)));
}

TEST_CASE("interpolation and evaluation are exact for linear functions") {
  const auto m = build_structured(7, 5, {-1.0, 2.0, 0.0, 1.0});
  auto g = [](double x, double y) { return 3.0 - 2.0 * x + 0.5 * y; };
  const FeField u = interpolate(m, g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> X(-1.0, 2.0), Y(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = X(rng), y = Y(rng);
    CHECK(evaluate(m, u, {x, y}) == doctest::Approx(g(x, y)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(evaluate(m, u, {5.0, 0.5}), std::out_of_range);
  CHECK_THROWS_AS(interpolate(m, [](double, double) { return std::nan(""); }), std::domain_error);
}

TEST_CASE("locate returns barycentric coordinates of the point") {
  const auto m = build_structured(6, 6, {0.0, 1.0, 0.0, 1.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d p(U(rng), U(rng));
    const auto hit = m.locate(p);
    REQUIRE(hit);
    const auto& [k, l] = *hit;
    CHECK(l.minCoeff() >= -1e-12);
    CHECK(l.sum() == doctest::Approx(1.0));
    Eigen::Vector2d q = Eigen::Vector2d::Zero();
    for (int v = 0; v < 3; ++v) q += l[v] * m.node(m.triangles()(k, v));
    CHECK((q - p).norm() < 1e-12);
  }
  CHECK_FALSE(m.locate({1.5, 0.5}));
}

TEST_CASE("neighbours are the edge-connected nodes") {
  const auto m = build_structured(4, 4, {0.0, 1.0, 0.0, 1.0}, Diagonal::uniform);
  for (int j = 0; j < m.num_nodes(); ++j) {
    std::set<int> expected;
    for (int k = 0; k < m.num_triangles(); ++k)
      for (int v = 0; v < 3; ++v)
        if (m.triangles()(k, v) == j) {
          expected.insert(m.triangles()(k, (v + 1) % 3));
          expected.insert(m.triangles()(k, (v + 2) % 3));
        }
    const auto got = m.neighbours(j);
    CHECK(std::set<int>(got.begin(), got.end()) == expected);
  }
}
