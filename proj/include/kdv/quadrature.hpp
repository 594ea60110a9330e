#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kdv {

// Gauss-Legendre rule on the reference cell [0,1].  Weights sum to one,
// exact for polynomials of degree <= 2*order-1.
class QuadratureRule {
public:
  explicit QuadratureRule(int order);

  int order() const { return order_; }
  const Eigen::VectorXd &points() const { return points_; }
  const Eigen::VectorXd &weights() const { return weights_; }

private:
  int order_;
  Eigen::VectorXd points_;   // abscissae in (0,1)
  Eigen::VectorXd weights_;  // positive, sum to 1
};

class SplineSpace;

// Integrates sum_cells dx * sum_q w_q * g(cell, s_q) where s_q is the
// local coordinate in [0,1].
double integrate_cells(const SplineSpace &space,
                       const std::function<double(int, double)> &integrand,
                       const QuadratureRule &rule);

// One-dimensional integral of g over [a,b] by a single application of the
// rule (used for sub-cell windows in the local H1 seminorm).
double integrate_interval(double a, double b,
                          const std::function<double(double)> &integrand,
                          const QuadratureRule &rule);

}  // namespace kdv
