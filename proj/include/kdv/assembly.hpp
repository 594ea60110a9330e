#pragma once

#include <Eigen/Dense>

#include "kdv/spline.hpp"
#include "kdv/weight.hpp"

namespace kdv {

// Banded matrix with periodic wrap corners.  Scalar half-bandwidth 3
// (each node couples to itself and to its two neighbour nodes, two DOFs
// each); the wrap contributes two dense corner blocks.
class BandedPeriodicMatrix {
public:
  BandedPeriodicMatrix(int n, int half_bandwidth);

  int size() const { return n_; }
  int half_bandwidth() const { return hb_; }

  double coeff(int i, int j) const;
  void add(int i, int j, double v);
  void set(int i, int j, double v);

  Eigen::VectorXd multiply(const Eigen::VectorXd &x) const;
  Eigen::MatrixXd to_dense() const;

  // Infinity norm (max absolute row sum).
  double inf_norm() const;

  BandedPeriodicMatrix &axpy(double alpha, const BandedPeriodicMatrix &other);

private:
  // band distance accounting for periodic wrap; |result| <= hb_ iff stored
  int wrap_offset(int i, int j) const;

  int n_;
  int hb_;
  Eigen::MatrixXd bands_;  // (2*hb+1) x n, row hb + off holds entry (i, i+off)
};

struct SchemeOperators {
  const SplineSpace *space;
  const WeightFunction *weight;
  BandedPeriodicMatrix mass;        // A_ij = int v_j phi v_i
  BandedPeriodicMatrix dispersion;  // D_ij = int (v_j)_x (phi v_i)_xx
};

BandedPeriodicMatrix assemble_weighted_mass(const SplineSpace &space,
                                            const WeightFunction &weight);

BandedPeriodicMatrix assemble_dispersion(const SplineSpace &space,
                                         const WeightFunction &weight);

SchemeOperators assemble_operators(const SplineSpace &space,
                                   const WeightFunction &weight);

// N_i(w) = int w w_x phi v_i dx.
Eigen::VectorXd assemble_nonlinear(const SchemeOperators &ops,
                                   const SplineFunction &w);

// Both sides of int w_x (phi w)_xx = 3/2 int w_x^2 phi_x - 1/2 int w^2 phi_xxx,
// computed by independent quadratures.
struct IdentitySides {
  double lhs;
  double rhs;
};
IdentitySides identity_check(const SplineSpace &space,
                             const WeightFunction &weight,
                             const SplineFunction &w);

}  // namespace kdv
