#include "kdv/diagnostics.hpp"

#include "kdv/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kdv {

double l2_norm(const SplineFunction &u) {
  const QuadratureRule rule(6);
  const SplineSpace &space = u.space();
  const double dx = space.dx();
  const double v = integrate_cells(
      space,
      [&](int cell, double y) {
        const double val = u.eval(space.node(cell) + y * dx);
        return val * val;
      },
      rule);
  return std::sqrt(std::max(0.0, v));
}

double weighted_norm(const SplineFunction &u, const WeightFunction &weight) {
  const QuadratureRule rule(weight.is_affine() ? 6 : 10);
  const SplineSpace &space = u.space();
  const double dx = space.dx();
  const double v = integrate_cells(
      space,
      [&](int cell, double y) {
        const double x = space.node(cell) + y * dx;
        const double val = u.eval(x);
        return val * val * weight.eval(x);
      },
      rule);
  return std::sqrt(std::max(0.0, v));
}

double error_percent(const std::function<double(double)> &u_exact,
                     const SplineFunction &u_h) {
  const QuadratureRule rule(10);
  const SplineSpace &space = u_h.space();
  const double dx = space.dx();
  double diff2 = 0.0, exact2 = 0.0;
  for (int c = 0; c < space.num_nodes(); ++c) {
    for (int q = 0; q < rule.order(); ++q) {
      const double x = space.node(c) + rule.points()(q) * dx;
      const double ue = u_exact(x);
      const double d = ue - u_h.eval(x);
      const double w = rule.weights()(q) * dx;
      diff2 += w * d * d;
      exact2 += w * ue * ue;
    }
  }
  if (exact2 <= 0.0)
    throw std::domain_error("error_percent: exact solution has zero norm");
  return 100.0 * std::sqrt(diff2 / exact2);
}

double convergence_rate(double e_coarse, double e_fine,
                        double refinement_factor) {
  if (e_coarse <= 0.0 || e_fine <= 0.0)
    throw std::domain_error("convergence_rate needs positive errors");
  return std::log(e_coarse / e_fine) / std::log(refinement_factor);
}

double h1_local_seminorm_sq(const SplineFunction &u, double R_window) {
  const SplineSpace &space = u.space();
  if (R_window <= 0.0)
    throw std::out_of_range("H1 window half-width must be positive");
  if (-R_window < space.x_left() || R_window > space.x_right())
    throw std::out_of_range("H1 window outside the computational domain");
  const QuadratureRule rule(6);
  auto ux2 = [&](double x) {
    const double d = u.eval(x, 1);
    return d * d;
  };
  double total = 0.0;
  for (int c = 0; c < space.num_nodes(); ++c) {
    const double a = std::max(space.node(c), -R_window);
    const double b = std::min(space.node(c) + space.dx(), R_window);
    if (b > a) total += integrate_interval(a, b, ux2, rule);
  }
  return total;
}

}  // namespace kdv
