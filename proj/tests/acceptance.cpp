// End-to-end acceptance suite.  Each criterion prints a single
// [PASS]/[FAIL] line; the process exits nonzero if any criterion fails.
#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kdv/analytic.hpp"
#include "kdv/assembly.hpp"
#include "kdv/diagnostics.hpp"
#include "kdv/experiments.hpp"
#include "kdv/solver.hpp"

using namespace kdv;

namespace {

int g_failures = 0;

void report(int idx, const std::string &name, bool ok, const std::string &detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void criterion_one_soliton() {
  ExperimentConfig cfg;
  cfg.name = "one_soliton";
  cfg.m_list = {16, 32, 64, 128, 256, 512};
  cfg.t_start_shift = -1.0;
  cfg.t_final = 2.0;
  const RunArtifacts art = run_experiment(cfg);

  bool ok = !art.any_failure && art.table.size() == 6;
  std::string detail;
  if (ok) {
    // eventually monotone decreasing: from 2M = 128 (index 3) on
    for (std::size_t i = 4; i < art.table.size(); ++i)
      if (!(art.table[i].e_percent < art.table[i - 1].e_percent)) ok = false;
    const double e512 = art.table.back().e_percent;
    const double rate = art.table.back().rate.value_or(-1.0);
    if (!(e512 <= 5.0)) ok = false;
    if (!(rate >= 0.6 && rate <= 1.3)) ok = false;
    detail = "E(512)=" + fmt(e512) + "%, final rate=" + fmt(rate);
    for (const auto &row : art.table)
      detail += " | E(" + std::to_string(row.m_nodes) + ")=" + fmt(row.e_percent);
  } else {
    detail = "run failed";
  }
  report(1, "one-soliton convergence", ok, detail);
}

void criterion_two_soliton() {
  ExperimentConfig cfg;
  cfg.name = "two_soliton";
  // domain keeps both solitons clear of the periodic seam at t_final
  // (fast wave ends at x = 20, slow at x = 10)
  cfg.x_left = -50.0;
  cfg.x_right = 30.0;
  cfg.m_list = {512};
  cfg.t_start_shift = -10.0;
  cfg.t_final = 20.0;
  cfg.weight.a = 51.0;  // keep the affine weight >= 1 on [-50, 30]
  cfg.dt_c = 0.05;
  const RunArtifacts art = run_experiment(cfg);

  bool ok = !art.any_failure && !art.profiles.empty();
  std::string detail = "run failed";
  if (ok) {
    const auto &samples = art.profiles.front().second;
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
      const double v = samples[i].u_numeric;
      if (v > 0.1 && v > samples[i - 1].u_numeric && v > samples[i + 1].u_numeric)
        peaks.push_back(v);
    }
    const double e = art.table.front().e_percent;
    double big = 0.0, small = 0.0;
    if (peaks.size() == 2) {
      big = std::max(peaks[0], peaks[1]);
      small = std::min(peaks[0], peaks[1]);
    }
    ok = peaks.size() == 2 && big >= 1.5 * small && e <= 80.0;
    detail = "peaks=" + std::to_string(peaks.size()) + ", ratio=" +
             fmt(small > 0 ? big / small : 0.0) + ", E=" + fmt(e) + "%";
  }
  report(2, "two-soliton qualitative reproduction", ok, detail);
}

// criteria 3 and 8 share one rough-data run
void criteria_rough(const RunArtifacts &art, const ExperimentConfig &cfg) {
  // 3: completion, L2 stability, decreasing pairwise differences
  bool ok3 = !art.any_failure && art.step_logs.size() == 4;
  std::string d3 = "run failed";
  if (ok3) {
    double worst = 0.0;
    for (const auto &log : art.step_logs) {
      const double l0 = log.front().l2;
      for (const auto &s : log)
        worst = std::max(worst, s.l2 / l0);
    }
    const double d_mid = art.table[1].e_percent;   // ||u_128 - u_256||
    const double d_top = art.table[2].e_percent;   // ||u_256 - u_512||
    ok3 = worst <= 2.0 && d_top < d_mid;
    d3 = "max norm growth=" + fmt(worst) + ", diffs " + fmt(d_mid) + "% -> " +
         fmt(d_top) + "%";
  }
  report(3, "rough-data stability and self-convergence", ok3, d3);

  // 8: discrete Kato functional F = sum dt * ||u_x||^2_{L2(-R,R)}
  bool ok8 = !art.any_failure;
  std::string d8 = "run failed";
  if (ok8) {
    std::vector<double> f_values;
    for (std::size_t i = 1; i < art.step_logs.size(); ++i) {  // M = 128,256,512
      double f = 0.0;
      const auto &log = art.step_logs[i];
      for (std::size_t k = 1; k < log.size(); ++k)
        f += (log[k].t - log[k - 1].t) * log[k].h1_local;
      f_values.push_back(f);
    }
    double fmin = f_values[0], fmax = f_values[0];
    for (double f : f_values) {
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }
    ok8 = std::isfinite(fmax) && fmin > 0.0 && fmax / fmin < 1.5;
    d8 = "F = {" + fmt(f_values[0]) + ", " + fmt(f_values[1]) + ", " +
         fmt(f_values[2]) + "}, spread=" + fmt(fmax / fmin);
  }
  report(8, "smoothing functional", ok8, d8);
}

void criterion_identity() {
  const SplineSpace space(-10.0, 10.0, 32);
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(1.0, 6.0);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const WeightFunction w =
        WeightFunction::smoothed_ramp(radius(rng), 1.0, -10.0, 10.0);
    Eigen::VectorXd c(space.dof_count());
    for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
    // the identity is a whole-line statement: make the spline vanish near
    // the periodic seam where the weight's endpoint values differ
    const int m = space.num_nodes();
    for (int j : {0, 1, 2, m - 2, m - 1}) c(2 * j) = c(2 * j + 1) = 0.0;
    const SplineFunction u(space, c);
    const IdentitySides sides = identity_check(space, w, u);
    const double rel =
        std::abs(sides.lhs - sides.rhs) / (1.0 + std::abs(sides.lhs));
    worst = std::max(worst, rel);
    if (rel > 1e-8) ++bad;
  }
  report(4, "integration-by-parts identity suite", bad == 0,
         "worst relative gap=" + fmt(worst));
}

void criterion_operators() {
  bool ok = true;
  std::string detail;

  for (int m : {8, 16, 32}) {
    const SplineSpace space(-10.0, 10.0, m);
    const auto w = WeightFunction::affine(50.0, 1.0, -10.0, 10.0);
    const auto A = assemble_weighted_mass(space, w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.to_dense());
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
      ok = false;
      detail = "mass not SPD at M=" + std::to_string(m);
    }
  }

  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  {
    const SplineSpace space(-10.0, 10.0, 16);
    const auto one = WeightFunction::affine(1.0, 0.0, -10.0, 10.0);
    const auto D = assemble_dispersion(space, one);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd c(space.dof_count());
      for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
      if (!(std::abs(c.dot(D.multiply(c))) <= 1e-10 * c.squaredNorm())) {
        ok = false;
        detail = "dispersion form not skew for phi == 1";
      }
    }
  }
  {
    const SplineSpace space(-10.0, 10.0, 32);  // n = 64
    const auto w = WeightFunction::affine(50.0, 1.0, -10.0, 10.0);
    BandedPeriodicMatrix lhs = assemble_weighted_mass(space, w);
    lhs.axpy(1e-3, assemble_dispersion(space, w));
    Eigen::VectorXd b(space.dof_count());
    for (int i = 0; i < b.size(); ++i) b(i) = gauss(rng);
    const Eigen::VectorXd x = solve_banded(lhs, b);
    const Eigen::VectorXd x_ref = lhs.to_dense().partialPivLu().solve(b);
    if (!((x - x_ref).norm() <= 1e-10 * (1.0 + x_ref.norm()))) {
      ok = false;
      detail = "banded solve disagrees with the dense oracle";
    }
  }
  report(5, "operator suite", ok, detail);
}

void criterion_lemma1() {
  const SplineSpace space(-10.0, 10.0, 256);
  const auto weight = WeightFunction::affine(50.0, 1.0, -10.0, 10.0);
  const SplineFunction u0 =
      project_l2(space, [](double x) { return eval_one_soliton(x, -1.0); });

  StepConfig cfg;
  cfg.contraction_target = 0.5;
  cfg.dt = 1.0;
  cfg.dt = 0.9 * cfl_margin(u0, cfg, weight, compute_cr(weight).C_R);
  cfg.store_history_coeffs = false;

  const auto ops = assemble_operators(space, weight);
  const AdvanceResult res = advance(ops, u0, cfg, 200.0 * cfg.dt, 0.0);

  bool ok = res.ok();
  std::string detail = "run failed";
  if (ok) {
    int contractive = 0, steps = 0;
    const double K = cfg.growth_K();
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      const auto &r = res.history[i];
      if (!(r.cfl_margin >= 1.0)) ok = false;
      if (!(r.weighted_norm <=
            K * res.history[i - 1].weighted_norm * (1.0 + 1e-9)))
        ok = false;
      ++steps;
      if (r.last_contraction <= cfg.contraction_target + 1e-12) ++contractive;
    }
    const double frac = steps > 0 ? double(contractive) / steps : 0.0;
    if (!(frac >= 0.95)) ok = false;
    detail = std::to_string(steps) + " steps, contraction <= L in " +
             fmt(100.0 * frac) + "%";
  }
  report(6, "growth and contraction contract under CFL", ok, detail);
}

void criterion_residuals() {
  std::mt19937 rng(11);
  bool ok = true;
  double worst1 = 0.0, worst2 = 0.0;

  std::uniform_real_distribution<double> xs1(-8.0, 8.0), ts1(-2.0, 2.0);
  auto u1 = [](double x, double t) { return eval_one_soliton(x, t); };
  for (int trial = 0; trial < 100; ++trial)
    worst1 = std::max(worst1, std::abs(kdv_fd_residual(u1, xs1(rng), ts1(rng))));
  if (!(worst1 <= 1e-4)) ok = false;

  std::uniform_real_distribution<double> xs2(-30.0, 15.0), ts2(-10.0, 10.0);
  auto u2 = [](double x, double t) { return eval_two_soliton(x, t, 0.5, 1.0); };
  int checked = 0;
  for (int trial = 0; trial < 1000 && checked < 100; ++trial) {
    const double x = xs2(rng), t = ts2(rng);
    if (std::abs(std::sqrt(0.5) * (x - 2.0 * t)) < 0.1) continue;
    ++checked;
    worst2 = std::max(worst2, std::abs(kdv_fd_residual(u2, x, t)));
  }
  if (!(checked == 100 && worst2 <= 1e-3)) ok = false;
  report(7, "exact-solution residual checks", ok,
         "one-soliton max=" + fmt(worst1) + ", two-soliton max=" + fmt(worst2));
}

}  // namespace

int main() {
  criterion_one_soliton();
  criterion_two_soliton();

  ExperimentConfig rough;
  rough.name = "rough_l2";
  rough.x_left = -5.0;
  rough.x_right = 5.0;
  rough.m_list = {64, 128, 256, 512};
  rough.t_final = 0.5;
  rough.r_window = 4.0;
  rough.m_reference = -1;  // pairwise differences, no reference run
  criteria_rough(run_experiment(rough), rough);

  criterion_identity();
  criterion_operators();
  criterion_lemma1();
  criterion_residuals();

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
