#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kdv/quadrature.hpp"
#include "kdv/spline.hpp"

using namespace kdv;

TEST_CASE("rules are exact for polynomials up to degree 2*order-1") {
  for (int order : {1, 2, 3, 6, 10, 20}) {
    const QuadratureRule rule(order);
    CHECK(rule.weights().sum() == doctest::Approx(1.0).epsilon(1e-13));
    for (int k = 0; k < 2 * order; ++k) {
      double s = 0.0;
      for (int q = 0; q < order; ++q)
        s += rule.weights()(q) * std::pow(rule.points()(q), k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("weights positive, points interior") {
  const QuadratureRule rule(6);
  for (int q = 0; q < 6; ++q) {
    CHECK(rule.weights()(q) > 0.0);
    CHECK(rule.points()(q) > 0.0);
    CHECK(rule.points()(q) < 1.0);
  }
}

TEST_CASE("integrate_cells: constant over [-10,10]") {
  const SplineSpace space(-10.0, 10.0, 16);
  const QuadratureRule rule(6);
  const double v = integrate_cells(space, [](int, double) { return 1.0; }, rule);
  CHECK(v == doctest::Approx(20.0).epsilon(1e-13));
}

TEST_CASE("reference-shape masses: int f^2 = 26/35, int g^2 = 2/105") {
  // unit-width cells; the value shape at node j spans cells j-1 and j
  const SplineSpace space(0.0, 8.0, 8);
  const QuadratureRule rule(6);
  const int dof_value = 2 * 4;   // node 4
  const int dof_slope = 2 * 4 + 1;
  auto sq = [&](int dof) {
    return integrate_cells(
        space,
        [&](int cell, double y) {
          const double v = space.basis_eval(dof, space.node(cell) + y, 0);
          return v * v;
        },
        rule);
  };
  CHECK(sq(dof_value) == doctest::Approx(26.0 / 35.0).epsilon(1e-12));
  CHECK(sq(dof_slope) == doctest::Approx(2.0 / 105.0).epsilon(1e-12));
}

TEST_CASE("integrate_interval respects orientation and width") {
  const QuadratureRule rule(6);
  const double v =
      integrate_interval(1.0, 3.0, [](double x) { return x * x; }, rule);
  CHECK(v == doctest::Approx(26.0 / 3.0).epsilon(1e-13));
  CHECK(integrate_interval(3.0, 3.0, [](double) { return 1.0; }, rule) == 0.0);
}
