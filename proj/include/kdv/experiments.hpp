#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdv/solver.hpp"
#include "kdv/spline.hpp"
#include "kdv/weight.hpp"

namespace kdv {

enum class DtMode { CflThreeHalves, DxSquared };

struct WeightSpec {
  std::string kind = "affine";  // "affine" | "ramp"
  double a = 50.0, b = 1.0;     // affine: a + b x
  double R = 5.0, width = 1.0;  // smoothed ramp

  WeightFunction build(double x_left, double x_right) const;
};

struct ExperimentConfig {
  std::string name = "one_soliton";  // one_soliton | two_soliton | rough_l2 | custom
  double x_left = -10.0;
  double x_right = 10.0;
  std::vector<int> m_list;      // mesh cell counts, one run per entry
  double t_start_shift = 0.0;   // initial data evaluated at this exact time
  double t_final = 1.0;
  WeightSpec weight;
  DtMode dt_mode = DtMode::DxSquared;
  double dt_c = 0.1;            // dt = c dx^2 (or CFL safety factor)
  double contraction_L = 0.5;
  double r_window = 0.0;        // H1 window half-width; 0 disables
  int m_reference = 0;  // rough_l2 oracle nodes; 0 = 4*max(M), < 0 = pairwise only
  std::string output_dir = "out";
  unsigned seed = 1234;
  bool strict_cfl = false;
  std::vector<double> profile_times;  // defaults to {t_final}
};

ExperimentConfig parse_config_file(const std::string &path);
ExperimentConfig parse_config_text(const std::string &text);

struct ErrorReport {
  int m_nodes = 0;
  double e_percent = 0.0;
  std::optional<double> rate;
  double l2_exact = 0.0;
  double l2_numeric = 0.0;
  std::optional<std::string> error;  // per-resolution solver failure
};

struct StepSummary {
  double t;
  int iterations;
  double contraction;
  double cfl_margin;
  double l2;
  double weighted;
  double h1_local;
};

struct ProfileSample {
  double x;
  double u_numeric;
  std::optional<double> u_exact;
};

struct RunArtifacts {
  std::vector<ErrorReport> table;
  // per resolution: step log of the run
  std::vector<std::vector<StepSummary>> step_logs;
  // profiles of the finest resolution, one block per requested time
  std::vector<std::pair<double, std::vector<ProfileSample>>> profiles;
  // resolved constants echoed into run.json
  double C_R = 0.0;
  double K = 0.0;
  std::vector<double> dt_per_m;
  bool any_failure = false;
};

double choose_dt(const ExperimentConfig &cfg, const SplineSpace &space,
                 const WeightFunction &weight, const SplineFunction &u0);

RunArtifacts run_one_soliton(const ExperimentConfig &cfg);
RunArtifacts run_two_soliton(const ExperimentConfig &cfg);
RunArtifacts run_rough_l2(const ExperimentConfig &cfg);
RunArtifacts run_experiment(const ExperimentConfig &cfg);

// Fine-grid reference for the rough-data case; throws StepFailure when
// the reference run itself aborts.
SplineFunction self_convergence_oracle(const ExperimentConfig &cfg,
                                       const SplineSpace &reference_space);

void emit_outputs(const RunArtifacts &artifacts, const ExperimentConfig &cfg);

}  // namespace kdv
