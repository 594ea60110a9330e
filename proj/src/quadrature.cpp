#include "kdv/quadrature.hpp"

#include "kdv/spline.hpp"

namespace kdv {

QuadratureRule::QuadratureRule(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  points_.resize(order);
  weights_.resize(order);

  // Nodes of the Legendre polynomial P_n on [-1,1] by Newton iteration,
  // then mapped to [0,1].
  const int n = order;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // recompute derivative at the converged node
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    points_(i) = 0.5 * (x + 1.0);
    weights_(i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }

  // Exactness self-check against monomials on [0,1].
  for (int k = 0; k < 2 * order; ++k) {
    double s = 0.0;
    for (int q = 0; q < order; ++q) s += weights_(q) * std::pow(points_(q), k);
    const double exact = 1.0 / (k + 1);
    if (std::abs(s - exact) > 1e-13)
      throw std::runtime_error("Gauss-Legendre rule failed exactness check");
  }
}

double integrate_cells(const SplineSpace &space,
                       const std::function<double(int, double)> &integrand,
                       const QuadratureRule &rule) {
  const int ncells = space.num_nodes();
  const double dx = space.dx();
  double total = 0.0;
  for (int c = 0; c < ncells; ++c) {
    double cell_sum = 0.0;
    for (int q = 0; q < rule.order(); ++q)
      cell_sum += rule.weights()(q) * integrand(c, rule.points()(q));
    total += dx * cell_sum;
  }
  return total;
}

double integrate_interval(double a, double b,
                          const std::function<double(double)> &integrand,
                          const QuadratureRule &rule) {
  const double h = b - a;
  if (h <= 0.0) return 0.0;
  double s = 0.0;
  for (int q = 0; q < rule.order(); ++q)
    s += rule.weights()(q) * integrand(a + h * rule.points()(q));
  return h * s;
}

}  // namespace kdv
