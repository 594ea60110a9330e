#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace kdv {

class QuadratureRule;

// Uniform periodic mesh carrying the C^1 piecewise-cubic Hermite space.
// Each mesh node owns a value DOF and a slope DOF, interleaved as
// (node 0 value, node 0 slope, node 1 value, ...), 2*M DOFs in total.
class SplineSpace {
public:
  SplineSpace(double x_left, double x_right, int num_nodes);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  int num_nodes() const { return num_nodes_; }
  double dx() const { return dx_; }
  int dof_count() const { return 2 * num_nodes_; }

  double node(int j) const { return x_left_ + j * dx_; }

  // Cell index and local coordinate in [0,1] for a point of the domain.
  // Points outside the interval are wrapped periodically.
  void locate(double x, int &cell, double &local) const;

  // Value or derivative (deriv in 0..2) of basis function dof_index at x,
  // with periodic wrap of the two-cell support.
  double basis_eval(int dof_index, double x, int deriv) const;

private:
  double x_left_;
  double x_right_;
  int num_nodes_;
  double dx_;
};

// Coefficient vector over a SplineSpace.
class SplineFunction {
public:
  SplineFunction(const SplineSpace &space, Eigen::VectorXd coeffs);

  // Zero function.
  explicit SplineFunction(const SplineSpace &space);

  const SplineSpace &space() const { return space_; }
  const Eigen::VectorXd &coeffs() const { return coeffs_; }

  double eval(double x, int deriv = 0) const;

private:
  SplineSpace space_;  // small value type; owning a copy avoids lifetime ties
  Eigen::VectorXd coeffs_;
};

// Reference-cell Hermite shapes on [-1,1]: f is the value shape
// (f(0)=1, f'(0)=0), g the slope shape (g(0)=0, g'(0)=1).  Both vanish
// with their first derivatives at |y|=1 and are zero outside.
double hermite_f(double y, int deriv);
double hermite_g(double y, int deriv);

// Hermite interpolant of a function with known derivative: coefficients
// (u(x_j), dx*u'(x_j)).
SplineFunction hermite_interpolate(const SplineSpace &space,
                                   const std::function<double(double)> &u,
                                   const std::function<double(double)> &du);

// L^2 orthogonal projection onto the space: solves the unweighted mass
// system with an adaptive right-hand-side quadrature (cells are bisected
// near points where |u0| exceeds 1e6, up to depth 12).
SplineFunction project_l2(const SplineSpace &space,
                          const std::function<double(double)> &u0);

}  // namespace kdv
