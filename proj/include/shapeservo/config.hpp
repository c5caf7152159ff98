#pragma once

#include <string>

#include "shapeservo/feature_map.hpp"
#include "shapeservo/types.hpp"

namespace shapeservo::config {

enum class ScenarioKind { kClosedLoop, kSaturationDemo };
enum class PlantKind { kLinear, kChain };
enum class TargetKind { kConstant, kSinusoid };

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kClosedLoop;
  unsigned seed = 1;
  double dt = 1e-3;
  double duration = 10.0;

  PlantKind plant = PlantKind::kLinear;
  plant::FeatureMapKind feature_map = plant::FeatureMapKind::kSubsample;
  int p = 6;

  Vector6 u_max = Vector6::Constant(5.0);
  Vector6 u_min = Vector6::Constant(-6.0);

  double eps1 = 0.1;
  double eps2 = 0.1;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double lambda = 1e-6;        // pseudo-inverse damping
  double sigma_guard = -1.0;   // < 0 means default 1e-8 * eps
  double v_guard = 1e-6;
  double filter_cutoff = 20.0; // Hz
  double jdot_max = 2.0;       // slew limit on |Jdot|_F

  TargetKind target = TargetKind::kConstant;
  double target_offset = 0.5;     // feature units, added to s(0)
  double target_amplitude = 0.5;  // sinusoid
  double target_frequency = 0.2;  // Hz

  double j0_perturbation = 0.2;   // relative, linear plant
  double chain_id_step = 1e-2;    // rad, coarse t=0 identification

  double linear_tv_amplitude = 0.0;
  double linear_tv_frequency = 0.0;

  int chain_nodes = 20;
  double chain_gravity = 9.81;
  double chain_stiffness = 200.0;
  double chain_bending = 0.05;
  double chain_mass = 0.01;
  double chain_rest_length = 0.02;
  double chain_fd_step = 1e-5;

  double demo_amplitude = 10.0;
  double demo_omega = 2.0;  // rad/s
  double demo_duration = 6.283185307179586;
  double demo_dt = 1e-3;

  double convergence_threshold = 1e-2;

  // sigma_guard with the default rule applied
  double effective_sigma_guard(double eps) const {
    return sigma_guard > 0.0 ? sigma_guard : 1e-8 * eps;
  }
};

// Parses a `key = value` document with `#` comments and dotted keys.
// Unknown keys, type mismatches, and constraint violations throw
// std::invalid_argument citing the line number. Keys not present keep
// their defaults (starting from `base`).
ScenarioConfig parse_config(const std::string& text,
                            const ScenarioConfig& base = {});

// Shipped presets: fig1-saturation, regulation-linear, tracking-linear,
// regulation-chain. Throws on unknown names.
ScenarioConfig preset(const std::string& name);

// Cross-field validation (positivity, dt > 0, duration >= 0, limits
// bracketing zero). Throws std::invalid_argument.
void validate(const ScenarioConfig& cfg);

}  // namespace shapeservo::config
