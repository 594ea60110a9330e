#include <CLI11.hpp>

#include <Eigen/Dense>
#include <fstream>
#include <iostream>
#include <random>

#include "kdv/analytic.hpp"
#include "kdv/assembly.hpp"
#include "kdv/diagnostics.hpp"
#include "kdv/experiments.hpp"
#include "kdv/solver.hpp"

namespace {

int do_run(const std::string &config_path, bool strict_cfl) {
  kdv::ExperimentConfig cfg;
  try {
    cfg = kdv::parse_config_file(config_path);
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (strict_cfl) cfg.strict_cfl = true;
  const kdv::RunArtifacts art = kdv::run_experiment(cfg);
  kdv::emit_outputs(art, cfg);
  for (const auto &row : art.table) {
    std::cout << "M=" << row.m_nodes;
    if (row.error)
      std::cout << "  FAILED: " << *row.error;
    else {
      std::cout << "  E=" << row.e_percent << "%";
      if (row.rate) std::cout << "  rate=" << *row.rate;
    }
    std::cout << "\n";
  }
  return art.any_failure ? 1 : 0;
}

int do_table(const std::string &dir) {
  std::ifstream f(dir + "/table.csv");
  if (!f) {
    std::cerr << "no table.csv under " << dir << "\n";
    return 2;
  }
  std::string line;
  while (std::getline(f, line)) {
    for (auto &c : line)
      if (c == ',') c = '\t';
    std::cout << line << "\n";
  }
  return 0;
}

bool report(const std::string &name, bool ok) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
  return ok;
}

int do_verify(unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.5, 6.0);
  bool all = true;

  // identity suite: smoothed-ramp weight, random splines
  {
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      const int m = 16 << (trial % 3);
      const kdv::SplineSpace space(-10.0, 10.0, m);
      const kdv::WeightFunction w =
          kdv::WeightFunction::smoothed_ramp(uni(rng), 1.0, -10.0, 10.0);
      Eigen::VectorXd c(space.dof_count());
      for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
      // seam-vanishing: the identity is a whole-line statement
      for (int j : {0, 1, 2, m - 2, m - 1}) c(2 * j) = c(2 * j + 1) = 0.0;
      const auto sides =
          kdv::identity_check(space, w, kdv::SplineFunction(space, c));
      ok = std::abs(sides.lhs - sides.rhs) <= 1e-8 * (1.0 + std::abs(sides.lhs));
    }
    all &= report("integration-by-parts identity (100 random pairs)", ok);
  }

  // operator suite: SPD mass, skew dispersion form, banded vs dense
  {
    bool ok = true;
    for (int m : {8, 16, 32}) {
      const kdv::SplineSpace space(-10.0, 10.0, m);
      const kdv::WeightFunction w =
          kdv::WeightFunction::affine(50.0, 1.0, -10.0, 10.0);
      const auto A = kdv::assemble_weighted_mass(space, w);
      Eigen::LLT<Eigen::MatrixXd> llt(A.to_dense());
      ok = ok && llt.info() == Eigen::Success;
    }
    const kdv::SplineSpace space(-10.0, 10.0, 16);
    const kdv::WeightFunction one =
        kdv::WeightFunction::affine(1.0, 0.0, -10.0, 10.0);
    const auto D = kdv::assemble_dispersion(space, one);
    for (int trial = 0; trial < 50 && ok; ++trial) {
      Eigen::VectorXd c(space.dof_count());
      for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
      ok = std::abs(c.dot(D.multiply(c))) <= 1e-10 * c.squaredNorm();
    }
    all &= report("operator suite (SPD mass, dispersion form, phi == 1)", ok);
  }

  // inverse inequalities: empirical constants stable across meshes
  {
    bool ok = true;
    double cmin1 = 1e300, cmax1 = 0.0, cmin2 = 1e300, cmax2 = 0.0;
    for (int m : {16, 32, 64, 128}) {
      const kdv::SplineSpace space(-10.0, 10.0, m);
      std::uniform_int_distribution<int> node(0, m - 1);
      double c1 = 0.0, c2 = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        // localized draws so the sup probes the extremal profiles on
        // every mesh
        Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dof_count());
        const int j0 = node(rng);
        for (int k = 0; k < 4; ++k) {
          const int j = (j0 + k) % m;
          c(2 * j) = gauss(rng);
          c(2 * j + 1) = gauss(rng);
        }
        const kdv::SplineFunction z(space, c);
        double zx_inf = 0.0;
        for (int cell = 0; cell < m; ++cell)
          for (int s = 0; s <= 10; ++s)
            zx_inf = std::max(zx_inf,
                              std::abs(z.eval(space.node(cell) +
                                              space.dx() * s / 10.0, 1)));
        const double zx_l2 = std::sqrt(kdv::h1_local_seminorm_sq(z, 10.0));
        const double z_l2 = kdv::l2_norm(z);
        c1 = std::max(c1, std::sqrt(space.dx()) * zx_inf / zx_l2);
        c2 = std::max(c2, std::pow(space.dx(), 1.5) * zx_inf / z_l2);
      }
      cmin1 = std::min(cmin1, c1); cmax1 = std::max(cmax1, c1);
      cmin2 = std::min(cmin2, c2); cmax2 = std::max(cmax2, c2);
    }
    ok = (cmax1 / cmin1 < 2.0) && (cmax2 / cmin2 < 2.0);
    all &= report("inverse inequalities (constants stable across meshes)", ok);
  }

  // exact-solution residuals by finite differences
  {
    std::uniform_real_distribution<double> ux_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> ut_dist(-1.0, 1.0);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      const double x = ux_dist(rng), t = ut_dist(rng);
      ok = std::abs(kdv::kdv_fd_residual(
               [](double x, double t) { return kdv::eval_one_soliton(x, t); },
               x + 3 * t, t)) < 1e-4;
    }
    all &= report("one-soliton KdV residual", ok);
  }

  return all ? 0 : 1;
}

int do_sweep(const std::string &experiment, const std::vector<int> &m_list,
             const std::string &output_dir, bool strict_cfl) {
  kdv::ExperimentConfig cfg;
  cfg.name = experiment;
  cfg.m_list = m_list;
  cfg.output_dir = output_dir;
  cfg.strict_cfl = strict_cfl;
  if (experiment == "one_soliton") {
    cfg.x_left = -10.0; cfg.x_right = 10.0;
    cfg.t_start_shift = -1.0; cfg.t_final = 2.0;
  } else if (experiment == "two_soliton") {
    // domain keeps both solitons clear of the periodic seam at t_final
    cfg.x_left = -50.0; cfg.x_right = 30.0;
    cfg.t_start_shift = -10.0; cfg.t_final = 20.0;
    cfg.weight.a = 51.0;  // keep the affine weight >= 1 on [-50, 30]
    cfg.dt_c = 0.05;
  } else if (experiment == "rough_l2") {
    cfg.x_left = -5.0; cfg.x_right = 5.0;
    cfg.t_start_shift = 0.0; cfg.t_final = 0.5;
    cfg.r_window = 4.0;
  } else {
    std::cerr << "unknown experiment: " << experiment << "\n";
    return 2;
  }
  const kdv::RunArtifacts art = kdv::run_experiment(cfg);
  kdv::emit_outputs(art, cfg);
  std::cout << "wrote " << output_dir << "/table.csv\n";
  return art.any_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Weighted-Galerkin cubic-spline solver for the KdV equation"};
  app.require_subcommand(1);
  bool strict_cfl = false;
  app.add_flag("--strict-cfl", strict_cfl, "treat CFL violations as errors");

  std::string config_path;
  auto *run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "config file")->required();

  std::string table_dir;
  auto *table = app.add_subcommand("table", "print a previously computed table");
  table->add_option("dir", table_dir, "output directory")->required();

  unsigned seed = 1234;
  auto *verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", seed, "random seed");

  std::string experiment, output_dir = "out";
  std::vector<int> m_list;
  auto *sweep = app.add_subcommand("sweep", "run a named experiment sweep");
  sweep->add_option("--experiment", experiment, "experiment name")->required();
  sweep->add_option("--m", m_list, "mesh node counts")->required();
  sweep->add_option("--output", output_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config_path, strict_cfl);
    if (table->parsed()) return do_table(table_dir);
    if (verify->parsed()) return do_verify(seed);
    if (sweep->parsed()) return do_sweep(experiment, m_list, output_dir, strict_cfl);
  } catch (const kdv::StepFailure &f) {
    std::cerr << "solver failure: " << f.message << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
