#include "kdv/spline.hpp"

#include "kdv/assembly.hpp"
#include "kdv/quadrature.hpp"
#include "kdv/solver.hpp"

#include <cmath>

namespace kdv {

double hermite_f(double y, int deriv) {
  const double a = std::abs(y);
  if (a >= 1.0) return 0.0;
  const double s = (y < 0.0) ? -1.0 : 1.0;
  switch (deriv) {
    case 0: return 1.0 + y * y * (2.0 * a - 3.0);
    case 1: return 6.0 * y * (a - 1.0);
    case 2: return 12.0 * a - 6.0;
    default: throw std::invalid_argument("hermite_f: deriv must be 0..2");
  }
  (void)s;
}

double hermite_g(double y, int deriv) {
  const double a = std::abs(y);
  if (a >= 1.0) return 0.0;
  // y*(1-|y|)^2, the C^1 slope shape
  switch (deriv) {
    case 0: return y * (1.0 - a) * (1.0 - a);
    case 1: return (1.0 - a) * (1.0 - 3.0 * a);
    case 2: return (y < 0.0) ? (6.0 * y + 4.0) : (6.0 * y - 4.0);
    default: throw std::invalid_argument("hermite_g: deriv must be 0..2");
  }
}

SplineSpace::SplineSpace(double x_left, double x_right, int num_nodes)
    : x_left_(x_left), x_right_(x_right), num_nodes_(num_nodes) {
  if (!(x_right > x_left)) throw std::invalid_argument("empty domain");
  if (num_nodes < 4) throw std::invalid_argument("need at least 4 mesh nodes");
  dx_ = (x_right - x_left) / num_nodes;
}

void SplineSpace::locate(double x, int &cell, double &local) const {
  const double len = x_right_ - x_left_;
  double t = (x - x_left_) / len;
  t -= std::floor(t);
  double s = t * num_nodes_;
  cell = static_cast<int>(s);
  if (cell >= num_nodes_) cell = num_nodes_ - 1;
  local = s - cell;
}

double SplineSpace::basis_eval(int dof_index, double x, int deriv) const {
  if (dof_index < 0 || dof_index >= dof_count())
    throw std::out_of_range("basis dof index out of range");
  if (deriv < 0 || deriv > 2)
    throw std::invalid_argument("basis derivative order must be 0..2");
  const int j = dof_index / 2;
  const double len = x_right_ - x_left_;
  // wrapped distance to the owning node, |d| <= len/2
  const double d = std::remainder(x - node(j), len);
  const double y = d / dx_;
  const double v = (dof_index % 2 == 0) ? hermite_f(y, deriv) : hermite_g(y, deriv);
  return v / std::pow(dx_, deriv);
}

SplineFunction::SplineFunction(const SplineSpace &space, Eigen::VectorXd coeffs)
    : space_(space), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space.dof_count())
    throw std::invalid_argument("coefficient length does not match DOF count");
}

SplineFunction::SplineFunction(const SplineSpace &space)
    : space_(space), coeffs_(Eigen::VectorXd::Zero(space.dof_count())) {}

double SplineFunction::eval(double x, int deriv) const {
  int cell;
  double y;
  space_.locate(x, cell, y);
  const int n = space_.dof_count();
  const int i0 = 2 * cell;
  const double scale = 1.0 / std::pow(space_.dx(), deriv);
  return scale * (coeffs_(i0) * hermite_f(y, deriv) +
                  coeffs_(i0 + 1) * hermite_g(y, deriv) +
                  coeffs_((i0 + 2) % n) * hermite_f(y - 1.0, deriv) +
                  coeffs_((i0 + 3) % n) * hermite_g(y - 1.0, deriv));
}

SplineFunction hermite_interpolate(const SplineSpace &space,
                                   const std::function<double(double)> &u,
                                   const std::function<double(double)> &du) {
  Eigen::VectorXd c(space.dof_count());
  for (int j = 0; j < space.num_nodes(); ++j) {
    const double xj = space.node(j);
    c(2 * j) = u(xj);
    c(2 * j + 1) = space.dx() * du(xj);
  }
  return {space, std::move(c)};
}

namespace {

// Right-hand side contribution of one (sub)cell [a,b], bisecting near
// quadrature points where |u0| is huge (integrable singularities).
void accumulate_rhs(const SplineSpace &space,
                    const std::function<double(double)> &u0, double a, double b,
                    int depth, const QuadratureRule &rule, Eigen::VectorXd &rhs,
                    const std::array<int, 4> &dof) {
  std::array<double, 20> vals;
  bool spike = false;
  for (int q = 0; q < rule.order(); ++q) {
    vals[q] = u0(a + (b - a) * rule.points()(q));
    if (std::abs(vals[q]) > 1e6) spike = true;
  }
  if (spike && depth < 12) {
    const double mid = 0.5 * (a + b);
    accumulate_rhs(space, u0, a, mid, depth + 1, rule, rhs, dof);
    accumulate_rhs(space, u0, mid, b, depth + 1, rule, rhs, dof);
    return;
  }
  for (int q = 0; q < rule.order(); ++q) {
    const double x = a + (b - a) * rule.points()(q);
    const double wq = rule.weights()(q) * (b - a) * vals[q];
    for (int d : dof) rhs(d) += wq * space.basis_eval(d, x, 0);
  }
}

}  // namespace

SplineFunction project_l2(const SplineSpace &space,
                          const std::function<double(double)> &u0) {
  const WeightFunction one =
      WeightFunction::affine(1.0, 0.0, space.x_left(), space.x_right());
  BandedPeriodicMatrix mass = assemble_weighted_mass(space, one);

  const int n = space.dof_count();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const QuadratureRule rule(20);
  for (int k = 0; k < space.num_nodes(); ++k) {
    const std::array<int, 4> dof = {2 * k, 2 * k + 1, (2 * k + 2) % n,
                                    (2 * k + 3) % n};
    accumulate_rhs(space, u0, space.node(k), space.node(k) + space.dx(), 0,
                   rule, rhs, dof);
  }
  return {space, solve_banded(mass, rhs)};
}

}  // namespace kdv
