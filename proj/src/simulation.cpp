#include "shapeservo/simulation.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "shapeservo/controller.hpp"
#include "shapeservo/estimator.hpp"
#include "shapeservo/plant.hpp"

namespace shapeservo::sim {

namespace {

using config::PlantKind;
using config::ScenarioConfig;
using config::TargetKind;

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

plant::Plant build_plant(const ScenarioConfig& cfg, std::mt19937& rng,
                         MatrixX* j0_out) {
  if (cfg.plant == PlantKind::kLinear) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    MatrixX j0(cfg.p, kJointDim);
    for (int i = 0; i < cfg.p; ++i) {
      for (int j = 0; j < kJointDim; ++j) {
        j0(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * uni(rng);
      }
    }
    if (j0_out) *j0_out = j0;
    plant::LinearPlantParams params;
    params.j0 = j0;
    params.tv_amplitude = cfg.linear_tv_amplitude;
    params.tv_frequency = cfg.linear_tv_frequency;
    return plant::Plant::make_linear(std::move(params), VectorX::Zero(cfg.p));
  }
  plant::ChainPlantParams params;
  params.nodes = cfg.chain_nodes;
  params.gravity = cfg.chain_gravity;
  params.stretch_stiffness = cfg.chain_stiffness;
  params.bend_stiffness = cfg.chain_bending;
  params.node_mass = cfg.chain_mass;
  params.rest_length = cfg.chain_rest_length;
  params.fd_step = cfg.chain_fd_step;
  return plant::Plant::make_chain(params);
}

MatrixX initial_j_hat(const ScenarioConfig& cfg, const plant::Plant& p,
                      const plant::FeatureMapSpec& map, std::mt19937& rng) {
  if (cfg.plant == PlantKind::kLinear) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    MatrixX j = p.true_jacobian(map);
    for (int i = 0; i < j.rows(); ++i) {
      for (int k = 0; k < j.cols(); ++k) {
        j(i, k) *= 1.0 + cfg.j0_perturbation * uni(rng);
      }
    }
    return j;
  }
  // Deliberately coarse finite-difference identification at t = 0.
  const double h = cfg.chain_id_step;
  MatrixX j(map.p, kJointDim);
  for (int col = 0; col < kJointDim; ++col) {
    Vector6 dq = Vector6::Zero();
    dq[col] = h;
    const plant::Plant plus = p.step(dq / 1.0, 1.0);
    const plant::Plant minus = p.step(-dq / 1.0, 1.0);
    j.col(col) = (plus.features(map) - minus.features(map)) / (2.0 * h);
  }
  return j;
}

void target_at(const ScenarioConfig& cfg, const VectorX& s0, double t,
               VectorX* s_d, VectorX* s_d_dot) {
  const VectorX ones = VectorX::Ones(s0.size());
  if (cfg.target == TargetKind::kConstant) {
    *s_d = s0 + cfg.target_offset * ones;
    *s_d_dot = VectorX::Zero(s0.size());
    return;
  }
  const double w = 2.0 * std::numbers::pi * cfg.target_frequency;
  *s_d = s0 + cfg.target_amplitude * std::sin(w * t) * ones;
  *s_d_dot = cfg.target_amplitude * w * std::cos(w * t) * ones;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  config::validate(cfg);
  std::mt19937 rng(cfg.seed);

  plant::FeatureMapSpec map{cfg.feature_map, cfg.p};
  MatrixX j0_true;
  plant::Plant pl = build_plant(cfg, rng, &j0_true);
  const int p = pl.feature_dim(map);
  map.p = p;

  const saturation::SaturationLimits limits(cfg.u_min, cfg.u_max);

  controller::ControllerGains cgains;
  cgains.eps1 = cfg.eps1;
  cgains.gamma1 = cfg.gamma1;
  cgains.sigma_guard = cfg.effective_sigma_guard(cfg.eps1);
  cgains.pinv_damping = cfg.lambda;

  estimator::EstimatorGains egains;
  egains.eps2 = cfg.eps2;
  egains.gamma2 = cfg.gamma2;
  egains.pinv_damping = cfg.lambda;
  egains.v_guard = cfg.v_guard;
  egains.filter_cutoff = cfg.filter_cutoff;
  egains.jdot_max = cfg.jdot_max;
  egains.sigma_guard = cfg.effective_sigma_guard(cfg.eps2);

  auto ctrl = controller::ControllerState::initial(p);
  auto est = estimator::EstimatorState::initial(initial_j_hat(cfg, pl, map, rng));
  auto filt = estimator::RateFilterState::initial(p);

  const double dt = cfg.dt;
  const long n = static_cast<long>(std::floor(cfg.duration / dt + 1e-9));
  const VectorX s0 = pl.features(map);

  RunResult result;
  result.records.reserve(n + 1);
  RunSummary& sum = result.summary;
  sum.steps = n;
  sum.true_j_fro = pl.true_jacobian(map).norm();

  Vector6 u_prev = Vector6::Zero();
  Vector6 u_tilde_prev = Vector6::Zero();
  // v̇ goes through the same one-pole low-pass as the feature rates so the
  // s̈ − Ĵv̇ difference in the Jacobian update sees matched lag on both
  // terms; an unfiltered backward difference there is dominated by
  // differentiation noise that the filtered s̈ no longer carries.
  auto vdot_filt = estimator::RateFilterState::initial(kJointDim);
  MatrixX j_true = j0_true;  // refreshed lazily for the chain

  for (long k = 0; k <= n; ++k) {
    const double t = k * dt;
    const VectorX s = pl.features(map);
    const auto rates = estimator::feature_rates(s, filt, dt, cfg.filter_cutoff);
    VectorX s_d, s_d_dot;
    target_at(cfg, s0, t, &s_d, &s_d_dot);
    const VectorX e1 = controller::deformation_error(s, s_d);
    ctrl = controller::update_surface1(ctrl, e1, dt);
    const VectorX e2 = rates.s_dot - est.j_hat * u_prev;
    est = estimator::update_surface2(est, e2, dt);

    const Vector6 v = controller::control_law(ctrl.sigma1, s_d_dot, e1,
                                              est.j_hat, ctrl.eta1_hat, cgains);
    const auto sat = saturation::gauss_sat(v, limits);

    TrajectoryRecord rec;
    rec.t = t;
    rec.s = s;
    rec.s_d = s_d;
    rec.e1 = e1;
    rec.e1_norm = e1.norm();
    rec.sigma1 = ctrl.sigma1;
    rec.sigma2 = est.sigma2;
    rec.v = v;
    rec.u = sat.u;
    rec.u_tilde = sat.u_tilde;
    rec.eta1_hat = ctrl.eta1_hat;
    rec.eta2_hat = est.eta2_hat;
    rec.jhat_fro = est.j_hat.norm();
    if (cfg.plant == PlantKind::kLinear || k % 100 == 0) {
      j_true = pl.true_jacobian(map);
    }
    rec.jtilde_fro = (j_true - est.j_hat).norm();

    sum.sup_eta1_hat = std::max(sum.sup_eta1_hat, ctrl.eta1_hat);
    sum.sup_eta2_hat = std::max(sum.sup_eta2_hat, est.eta2_hat);
    sum.sup_jhat_fro = std::max(sum.sup_jhat_fro, rec.jhat_fro);
    for (int i = 0; i < kJointDim; ++i) {
      if (sat.u[i] < cfg.u_min[i] || sat.u[i] > cfg.u_max[i]) {
        sum.saturation_ok = false;
      }
    }
    if (sum.convergence_time < 0.0 && rec.e1_norm < cfg.convergence_threshold) {
      sum.convergence_time = t;
    }

    if (k < n) {
      const plant::Plant next = pl.step(sat.u, dt);
      const VectorX s_next = next.features(map);
      rec.d_norm = ((s_next - s) / dt - est.j_hat * v).norm();
      const auto v_rates = estimator::feature_rates(v, vdot_filt, dt, cfg.filter_cutoff);
      const Vector6 v_dot = v_rates.s_dot;
      const MatrixX j_before = est.j_hat;
      est = estimator::djm_update(est, rates.s_ddot, v, v_dot, egains, dt);
      rec.jdot_u_norm = (((est.j_hat - j_before) / dt) * sat.u_tilde).norm();
      ctrl.eta1_hat = controller::adapt_eta1(ctrl.eta1_hat, ctrl.sigma1, cgains, dt);
      est.eta2_hat = estimator::adapt_eta2(est.eta2_hat, est.sigma2, egains, dt);
      sum.max_sat_slew = std::max(
          sum.max_sat_slew, ((sat.u_tilde - u_tilde_prev) / dt).norm());
      sum.eta1_ref = std::max(sum.eta1_ref, rec.d_norm);
      sum.eta2_ref = std::max(sum.eta2_ref, rec.jdot_u_norm);
      u_prev = sat.u;
      u_tilde_prev = sat.u_tilde;
      pl = next;
    }

    if (!rec.s.allFinite() || !rec.v.allFinite() || !est.j_hat.allFinite() ||
        !std::isfinite(rec.eta1_hat) || !std::isfinite(rec.eta2_hat)) {
      sum.all_finite = false;
    }
    result.records.push_back(std::move(rec));
  }

  sum.final_e1_norm = result.records.back().e1_norm;

  // Lyapunov bookkeeping, post hoc: the unknown disturbance bounds are
  // replaced by the tightest observed suprema.
  const double eta1 = std::max(sum.eta1_ref, 1e-12);
  const double eta2 = std::max(sum.eta2_ref, 1e-12);
  const auto bounds =
      monitor::uub_bounds(cfg.gamma1, cfg.gamma2, cfg.eps1, cfg.eps2, eta1, eta2);
  sum.uub_a = bounds.a;
  sum.uub_b = bounds.b;
  sum.uub_ball = bounds.ball;

  std::vector<monitor::LyapunovSample> samples;
  samples.reserve(result.records.size());
  for (auto& rec : result.records) {
    auto ls = monitor::lyapunov(rec.sigma1, rec.sigma2, rec.eta1_hat,
                                rec.eta2_hat, eta1, eta2);
    ls.t = rec.t;
    ls.d_norm = rec.d_norm;
    ls.jdot_u_norm = rec.jdot_u_norm;
    rec.v1 = ls.v1;
    rec.v2 = ls.v2;
    rec.v_total = ls.v_total;
    samples.push_back(ls);
  }
  if (samples.size() >= 2) {
    const double tol = 10.0 * bounds.a * bounds.b * dt;
    const auto rep = monitor::check_decrease(samples, bounds, dt, tol);
    sum.decrease_violation_fraction = rep.violation_fraction;
    sum.decrease_worst_margin = rep.worst_margin;
  }
  return result;
}

std::string trajectory_csv(const RunResult& result) {
  std::ostringstream out;
  const int p = result.records.empty()
                    ? 0
                    : static_cast<int>(result.records.front().s.size());
  out << "t";
  auto vec_cols = [&](const char* name, int count) {
    for (int i = 0; i < count; ++i) out << ',' << name << i;
  };
  vec_cols("s", p);
  vec_cols("s_d", p);
  vec_cols("e1_", p);
  out << ",e1_norm";
  vec_cols("sigma1_", p);
  vec_cols("sigma2_", p);
  vec_cols("v", kJointDim);
  vec_cols("u", kJointDim);
  vec_cols("u_tilde", kJointDim);
  out << ",eta1_hat,eta2_hat,jhat_fro,jtilde_fro,V,V1,V2\r\n";
  for (const auto& r : result.records) {
    out << fmt(r.t);
    auto emit = [&](const auto& v) {
      for (int i = 0; i < v.size(); ++i) out << ',' << fmt(v[i]);
    };
    emit(r.s);
    emit(r.s_d);
    emit(r.e1);
    out << ',' << fmt(r.e1_norm);
    emit(r.sigma1);
    emit(r.sigma2);
    emit(r.v);
    emit(r.u);
    emit(r.u_tilde);
    out << ',' << fmt(r.eta1_hat) << ',' << fmt(r.eta2_hat) << ','
        << fmt(r.jhat_fro) << ',' << fmt(r.jtilde_fro) << ',' << fmt(r.v_total)
        << ',' << fmt(r.v1) << ',' << fmt(r.v2) << "\r\n";
  }
  return out.str();
}

std::string summary_report(const RunSummary& s) {
  std::ostringstream out;
  out << "steps = " << s.steps << '\n'
      << "convergence_time = " << fmt(s.convergence_time) << '\n'
      << "final_e1_norm = " << fmt(s.final_e1_norm) << '\n'
      << "sup_eta1_hat = " << fmt(s.sup_eta1_hat) << '\n'
      << "sup_eta2_hat = " << fmt(s.sup_eta2_hat) << '\n'
      << "sup_jhat_fro = " << fmt(s.sup_jhat_fro) << '\n'
      << "true_j_fro = " << fmt(s.true_j_fro) << '\n'
      << "eta1_ref = " << fmt(s.eta1_ref) << '\n'
      << "eta2_ref = " << fmt(s.eta2_ref) << '\n'
      << "uub_a = " << fmt(s.uub_a) << '\n'
      << "uub_b = " << fmt(s.uub_b) << '\n'
      << "uub_ball = " << fmt(s.uub_ball) << '\n'
      << "decrease_violation_fraction = " << fmt(s.decrease_violation_fraction)
      << '\n'
      << "decrease_worst_margin = " << fmt(s.decrease_worst_margin) << '\n'
      << "max_sat_slew = " << fmt(s.max_sat_slew) << '\n'
      << "saturation_ok = " << (s.saturation_ok ? 1 : 0) << '\n'
      << "all_finite = " << (s.all_finite ? 1 : 0) << '\n';
  return out.str();
}

SaturationDemo saturation_demo(const saturation::SaturationLimits& limits,
                               double amplitude, double omega, double duration,
                               double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("saturation_demo: dt and duration must be > 0");
  }
  SaturationDemo demo;
  const long n = static_cast<long>(std::floor(duration / dt + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double t = k * dt;
    const double v = amplitude * std::sin(omega * t);
    const Vector6 vv = Vector6::Constant(v);
    demo.t.push_back(t);
    demo.v.push_back(v);
    demo.hard.push_back(saturation::hard_sat(vv, limits)[0]);
    demo.gauss.push_back(saturation::gauss_sat(vv, limits).u[0]);
  }
  return demo;
}

std::string demo_csv(const SaturationDemo& demo) {
  std::ostringstream out;
  out << "t,v,hard_sat,gauss_sat\r\n";
  for (size_t i = 0; i < demo.t.size(); ++i) {
    out << fmt(demo.t[i]) << ',' << fmt(demo.v[i]) << ',' << fmt(demo.hard[i])
        << ',' << fmt(demo.gauss[i]) << "\r\n";
  }
  return out.str();
}

RunSummary run_to_files(const config::ScenarioConfig& cfg,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (cfg.kind == config::ScenarioKind::kSaturationDemo) {
    const saturation::SaturationLimits limits(cfg.u_min, cfg.u_max);
    const auto demo = saturation_demo(limits, cfg.demo_amplitude,
                                      cfg.demo_omega, cfg.demo_duration,
                                      cfg.demo_dt);
    std::ofstream((fs::path(out_dir) / "fig1.csv")) << demo_csv(demo);
    return RunSummary{};
  }
  const RunResult result = run_scenario(cfg);
  std::ofstream((fs::path(out_dir) / "trajectory.csv"))
      << trajectory_csv(result);
  std::ofstream((fs::path(out_dir) / "report.txt"))
      << summary_report(result.summary);
  return result.summary;
}

}  // namespace shapeservo::sim
