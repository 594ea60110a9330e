#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kdv/assembly.hpp"
#include "kdv/spline.hpp"
#include "kdv/weight.hpp"

namespace kdv {

struct StepConfig {
  double dt = 0.0;
  int max_iterations = 50;
  double contraction_target = 0.5;  // L in (0,1)
  bool strict_cfl = false;
  bool skip_nonlinear = false;  // test hook: drop N(w), step is linear
  // keep coefficient vectors for every history record (needed by
  // time_interpolant); disable for long runs to bound memory
  bool store_history_coeffs = true;

  double growth_K() const {
    return (7.0 - contraction_target) / (1.0 - contraction_target);
  }
};

struct TimeStepRecord {
  double t = 0.0;
  Eigen::VectorXd coeffs;
  int iterations_used = 0;
  double last_contraction = 0.0;
  double cfl_margin = 0.0;
  double weighted_norm = 0.0;
  double l2_norm = 0.0;
  double h1_local = 0.0;  // ||u_x||^2_{L2[-R,R]}
};

struct StepFailure {
  std::string message;
  int iterations = 0;
  double last_contraction = 0.0;
};

// Factorization of a BandedPeriodicMatrix: banded LU with partial
// pivoting of the strictly banded part plus a Woodbury correction for the
// wrap corners; falls back to a dense LU for small or ill-behaved systems.
class BandedFactorization {
public:
  explicit BandedFactorization(const BandedPeriodicMatrix &m);
  Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const;
  bool dense_fallback() const { return dense_ != nullptr; }

private:
  bool factor_banded(const BandedPeriodicMatrix &m);
  Eigen::VectorXd solve_strict_band(const Eigen::VectorXd &rhs) const;

  int n_ = 0;
  int hb_ = 0;
  BandedPeriodicMatrix matrix_;  // kept for residual verification
  // band LU with partial pivoting (compact storage) of the strictly
  // banded part B; wrap corners enter through A = B + U V^T
  Eigen::MatrixXd upper_;  // n x (2*hb+1)
  Eigen::MatrixXd lower_;  // n x hb
  std::vector<int> pivots_;
  std::vector<int> corr_rows_;  // rows carrying wrap entries
  Eigen::MatrixXd corr_v_;      // n x r, V of the rank-r correction
  Eigen::MatrixXd binv_u_;      // n x r, B^-1 U
  Eigen::PartialPivLU<Eigen::MatrixXd> cap_;  // I + V^T B^-1 U
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> dense_;
};

// One-shot solve with residual check; throws on (numerically) singular
// systems.
Eigen::VectorXd solve_banded(const BandedPeriodicMatrix &lhs,
                             const Eigen::VectorXd &rhs);

// CFL margin of Lemma-1 type: bound/lambda with lambda = dt/dx^{3/2} and
// bound = L / (sqrt(C_R) 2 sqrt(2) K ||u||_{2,phi}); +inf for u = 0.
double cfl_margin(const SplineFunction &u, const StepConfig &cfg,
                  const WeightFunction &weight, double C_R);

struct StepResult {
  SplineFunction u_next;
  TimeStepRecord record;
};

// One implicit Euler step by fixed-point iteration:
//   (A + dt D) w^{l+1} = A u^n - dt N(w^l),  w^0 = u^n,
// stopping once ||w^{l+1} - w^l||_{L2} <= dx^2.  Throws StepFailure on
// non-convergence.
StepResult fixed_point_step(const SchemeOperators &ops,
                            const BandedFactorization &lhs_factor,
                            const SplineFunction &u_n, const StepConfig &cfg,
                            double t_n, double C_R, double R_window);

struct AdvanceResult {
  std::vector<TimeStepRecord> history;
  std::optional<StepFailure> failure;
  int cfl_warnings = 0;
  bool ok() const { return !failure.has_value(); }
};

AdvanceResult advance(const SchemeOperators &ops, const SplineFunction &u0,
                      const StepConfig &cfg, double t_final, double R_window);

// Linear-in-time blend of the two records bracketing t.
SplineFunction time_interpolant(const SplineSpace &space,
                                const std::vector<TimeStepRecord> &history,
                                double t);

}  // namespace kdv
