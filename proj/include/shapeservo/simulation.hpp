#pragma once

#include <string>
#include <vector>

#include "shapeservo/config.hpp"
#include "shapeservo/monitor.hpp"
#include "shapeservo/saturation.hpp"
#include "shapeservo/types.hpp"

namespace shapeservo::sim {

struct TrajectoryRecord {
  double t = 0.0;
  VectorX s, s_d, e1, sigma1, sigma2;
  Vector6 v = Vector6::Zero();
  Vector6 u = Vector6::Zero();
  Vector6 u_tilde = Vector6::Zero();
  double e1_norm = 0.0;
  double eta1_hat = 0.0;
  double eta2_hat = 0.0;
  double jhat_fro = 0.0;
  double jtilde_fro = 0.0;
  double d_norm = 0.0;
  double jdot_u_norm = 0.0;
  double v_total = 0.0, v1 = 0.0, v2 = 0.0;
};

struct RunSummary {
  long steps = 0;
  double convergence_time = -1.0;  // first t with |e1| < threshold
  double final_e1_norm = 0.0;
  double sup_eta1_hat = 0.0;
  double sup_eta2_hat = 0.0;
  double sup_jhat_fro = 0.0;
  double true_j_fro = 0.0;  // at t = 0
  double eta1_ref = 0.0;    // sup |d| measured
  double eta2_ref = 0.0;    // sup |Jhat_dot u_tilde| measured
  double uub_a = 0.0, uub_b = 0.0, uub_ball = 0.0;
  double decrease_violation_fraction = 0.0;
  double decrease_worst_margin = 0.0;
  double max_sat_slew = 0.0;  // sup |d u_tilde / dt|, Assumption-4 diagnostic
  bool saturation_ok = true;  // u within [u_min, u_max] at every step
  bool all_finite = true;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  RunSummary summary;
};

RunResult run_scenario(const config::ScenarioConfig& cfg);

std::string trajectory_csv(const RunResult& result);
std::string summary_report(const RunSummary& summary);

struct SaturationDemo {
  std::vector<double> t, v, hard, gauss;
};

SaturationDemo saturation_demo(const saturation::SaturationLimits& limits,
                               double amplitude, double omega, double duration,
                               double dt);

std::string demo_csv(const SaturationDemo& demo);

// Writes result.csv / report.txt (closed loop) or fig1.csv (demo) into
// out_dir. Returns the summary for closed-loop runs.
RunSummary run_to_files(const config::ScenarioConfig& cfg,
                        const std::string& out_dir);

}  // namespace shapeservo::sim
