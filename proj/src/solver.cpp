#include "kdv/solver.hpp"

#include "kdv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace kdv {

BandedFactorization::BandedFactorization(const BandedPeriodicMatrix &m)
    : n_(m.size()), hb_(m.half_bandwidth()), matrix_(m) {
  bool ok = n_ > 2 * (2 * hb_ + 1) && factor_banded(m);
  if (ok) {
    // verify against a synthetic solve; fall back to dense LU if the
    // banded path lost too much accuracy
    Eigen::VectorXd x0(n_);
    for (int i = 0; i < n_; ++i) x0(i) = 1.0 + 0.5 * ((i % 3) - 1);
    const Eigen::VectorXd b = matrix_.multiply(x0);
    const Eigen::VectorXd xs = solve(b);
    ok = (xs - x0).norm() <= 1e-8 * (1.0 + x0.norm());
  }
  if (!ok) {
    dense_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(m.to_dense());
  }
}

bool BandedFactorization::factor_banded(const BandedPeriodicMatrix &m) {
  const int mm = 2 * hb_ + 1;
  upper_ = Eigen::MatrixXd::Zero(n_, mm);
  lower_ = Eigen::MatrixXd::Zero(n_, hb_);
  pivots_.assign(n_, 0);

  // split into strictly banded part and wrap-corner correction A = B + U V^T
  std::set<int> rows;
  for (int i = 0; i < n_; ++i) {
    for (int d = -hb_; d <= hb_; ++d) {
      const int j = i + d;
      const double v = m.coeff(i, (j + n_) % n_);
      if (v == 0.0) continue;
      if (j >= 0 && j < n_) {
        upper_(i, hb_ + d) = v;
      } else {
        rows.insert(i);
      }
    }
  }
  corr_rows_.assign(rows.begin(), rows.end());
  const int r = static_cast<int>(corr_rows_.size());
  corr_v_ = Eigen::MatrixXd::Zero(n_, r);
  for (int k = 0; k < r; ++k) {
    const int i = corr_rows_[k];
    for (int d = -hb_; d <= hb_; ++d) {
      const int j = i + d;
      if (j >= 0 && j < n_) continue;
      const int jw = (j + n_) % n_;
      const double v = m.coeff(i, jw);
      if (v != 0.0) corr_v_(jw, k) = v;
    }
  }

  // band LU with partial pivoting on B (compact storage)
  for (int i = 0; i < hb_; ++i) {
    const int l = hb_ - i;
    for (int j = l; j < mm; ++j) upper_(i, j - l) = upper_(i, j);
    for (int j = mm - l; j < mm; ++j) upper_(i, j) = 0.0;
  }
  int l = hb_;
  for (int k = 0; k < n_; ++k) {
    double dum = upper_(k, 0);
    int ipiv = k;
    if (l < n_) ++l;
    for (int j = k + 1; j < l; ++j) {
      if (std::abs(upper_(j, 0)) > std::abs(dum)) {
        dum = upper_(j, 0);
        ipiv = j;
      }
    }
    pivots_[k] = ipiv;
    if (std::abs(dum) < 1e-300) return false;
    if (ipiv != k) upper_.row(k).swap(upper_.row(ipiv));
    for (int i = k + 1; i < l; ++i) {
      const double f = upper_(i, 0) / upper_(k, 0);
      lower_(k, i - k - 1) = f;
      for (int j = 1; j < mm; ++j) upper_(i, j - 1) = upper_(i, j) - f * upper_(k, j);
      upper_(i, mm - 1) = 0.0;
    }
  }

  if (r > 0) {
    binv_u_ = Eigen::MatrixXd::Zero(n_, r);
    for (int k = 0; k < r; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
      e(corr_rows_[k]) = 1.0;
      binv_u_.col(k) = solve_strict_band(e);
    }
    const Eigen::MatrixXd cap =
        Eigen::MatrixXd::Identity(r, r) + corr_v_.transpose() * binv_u_;
    cap_.compute(cap);
  }
  return true;
}

Eigen::VectorXd BandedFactorization::solve_strict_band(
    const Eigen::VectorXd &rhs) const {
  const int mm = 2 * hb_ + 1;
  Eigen::VectorXd b = rhs;
  int l = hb_;
  for (int k = 0; k < n_; ++k) {
    const int ipiv = pivots_[k];
    if (ipiv != k) std::swap(b(k), b(ipiv));
    if (l < n_) ++l;
    for (int i = k + 1; i < l; ++i) b(i) -= lower_(k, i - k - 1) * b(k);
  }
  l = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    double dum = b(i);
    for (int k = 1; k < l; ++k) dum -= upper_(i, k) * b(i + k);
    b(i) = dum / upper_(i, 0);
    if (l < mm) ++l;
  }
  return b;
}

Eigen::VectorXd BandedFactorization::solve(const Eigen::VectorXd &rhs) const {
  if (dense_) return dense_->solve(rhs);
  Eigen::VectorXd y = solve_strict_band(rhs);
  if (!corr_rows_.empty()) {
    const Eigen::VectorXd z = cap_.solve(corr_v_.transpose() * y);
    y -= binv_u_ * z;
  }
  return y;
}

Eigen::VectorXd solve_banded(const BandedPeriodicMatrix &lhs,
                             const Eigen::VectorXd &rhs) {
  if (lhs.size() != rhs.size())
    throw std::invalid_argument("solve_banded: dimension mismatch");
  const BandedFactorization factor(lhs);
  Eigen::VectorXd x = factor.solve(rhs);
  const double resid = (lhs.multiply(x) - rhs).norm();
  if (!(resid <= 1e-10 * (1.0 + rhs.norm())))
    throw std::runtime_error("solve_banded: singular or ill-conditioned system");
  return x;
}

double cfl_margin(const SplineFunction &u, const StepConfig &cfg,
                  const WeightFunction &weight, double C_R) {
  const double norm = weighted_norm(u, weight);
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  const double L = cfg.contraction_target;
  const double K = cfg.growth_K();
  const double bound = L / (std::sqrt(C_R) * 2.0 * std::sqrt(2.0) * K * norm);
  const double lambda = cfg.dt / std::pow(u.space().dx(), 1.5);
  return bound / lambda;
}

StepResult fixed_point_step(const SchemeOperators &ops,
                            const BandedFactorization &lhs_factor,
                            const SplineFunction &u_n, const StepConfig &cfg,
                            double t_n, double C_R, double R_window) {
  const SplineSpace &space = *ops.space;
  const double dx = space.dx();
  const double tol = dx * dx;

  const double margin = cfl_margin(u_n, cfg, *ops.weight, C_R);
  if (cfg.strict_cfl && margin < 1.0)
    throw StepFailure{"CFL condition violated in strict mode", 0, 0.0};

  const Eigen::VectorXd rhs0 = ops.mass.multiply(u_n.coeffs());
  Eigen::VectorXd w_prev = u_n.coeffs();
  Eigen::VectorXd w_next;
  double prev_diff = -1.0, contraction = 0.0, diff = 0.0;
  int iterations = 0;
  bool converged = false;

  for (int l = 1; l <= cfg.max_iterations; ++l) {
    Eigen::VectorXd rhs = rhs0;
    if (!cfg.skip_nonlinear)
      rhs -= cfg.dt * assemble_nonlinear(ops, SplineFunction(space, w_prev));
    w_next = lhs_factor.solve(rhs);
    if (!w_next.allFinite())
      throw StepFailure{"fixed-point iteration diverged", l, contraction};
    diff = l2_norm(SplineFunction(space, Eigen::VectorXd(w_next - w_prev)));
    if (prev_diff > 0.0) contraction = diff / prev_diff;
    iterations = l;
    if (diff <= tol) {
      converged = true;
      break;
    }
    prev_diff = diff;
    w_prev = w_next;
  }
  if (!converged)
    throw StepFailure{"fixed-point iteration did not converge", iterations,
                      contraction};

  SplineFunction u_next(space, w_next);
  TimeStepRecord rec;
  rec.t = t_n + cfg.dt;
  rec.coeffs = w_next;
  rec.iterations_used = iterations;
  rec.last_contraction = contraction;
  rec.cfl_margin = margin;
  rec.weighted_norm = weighted_norm(u_next, *ops.weight);
  rec.l2_norm = l2_norm(u_next);
  rec.h1_local = (R_window > 0.0) ? h1_local_seminorm_sq(u_next, R_window) : 0.0;

  if (margin >= 1.0) {
    const double prev_norm = weighted_norm(u_n, *ops.weight);
    if (rec.weighted_norm > cfg.growth_K() * prev_norm * (1.0 + 1e-9))
      throw StepFailure{"weighted-norm growth bound violated under CFL",
                        iterations, contraction};
  }
  return {std::move(u_next), std::move(rec)};
}

AdvanceResult advance(const SchemeOperators &ops, const SplineFunction &u0,
                      const StepConfig &cfg, double t_final, double R_window) {
  AdvanceResult result;
  const SplineSpace &space = *ops.space;
  const double C_R = compute_cr(*ops.weight).C_R;

  TimeStepRecord init;
  init.t = 0.0;
  init.coeffs = u0.coeffs();
  init.cfl_margin = cfl_margin(u0, cfg, *ops.weight, C_R);
  init.weighted_norm = weighted_norm(u0, *ops.weight);
  init.l2_norm = l2_norm(u0);
  init.h1_local = (R_window > 0.0) ? h1_local_seminorm_sq(u0, R_window) : 0.0;
  result.history.push_back(std::move(init));

  auto make_lhs = [&](double dt) {
    BandedPeriodicMatrix lhs = ops.mass;
    lhs.axpy(dt, ops.dispersion);
    return BandedFactorization(lhs);
  };

  double factored_dt = cfg.dt;
  auto factor = std::make_unique<BandedFactorization>(make_lhs(factored_dt));

  SplineFunction u = u0;
  double t = 0.0;
  const double eps = 1e-12 * t_final;
  while (t < t_final - eps) {
    StepConfig step_cfg = cfg;
    step_cfg.dt = std::min(cfg.dt, t_final - t);
    if (std::abs(step_cfg.dt - factored_dt) > 1e-15 * cfg.dt) {
      factored_dt = step_cfg.dt;
      factor = std::make_unique<BandedFactorization>(make_lhs(factored_dt));
    }
    try {
      StepResult step =
          fixed_point_step(ops, *factor, u, step_cfg, t, C_R, R_window);
      if (step.record.cfl_margin < 1.0) ++result.cfl_warnings;
      t = step.record.t;
      u = std::move(step.u_next);
      if (!cfg.store_history_coeffs) result.history.back().coeffs.resize(0);
      result.history.push_back(std::move(step.record));
    } catch (const StepFailure &f) {
      result.failure = f;
      break;
    }
  }
  return result;
}

SplineFunction time_interpolant(const SplineSpace &space,
                                const std::vector<TimeStepRecord> &history,
                                double t) {
  if (history.empty()) throw std::out_of_range("empty time-step history");
  if (t < history.front().t - 1e-12 || t > history.back().t + 1e-12)
    throw std::out_of_range("time outside the computed history");
  if (t <= history.front().t) return {space, history.front().coeffs};
  for (size_t i = 1; i < history.size(); ++i) {
    if (t <= history[i].t + 1e-12) {
      const double t0 = history[i - 1].t, t1 = history[i].t;
      const double alpha = (t - t0) / (t1 - t0);
      Eigen::VectorXd c =
          (1.0 - alpha) * history[i - 1].coeffs + alpha * history[i].coeffs;
      return {space, std::move(c)};
    }
  }
  return {space, history.back().coeffs};
}

}  // namespace kdv
