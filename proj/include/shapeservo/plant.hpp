#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "shapeservo/feature_map.hpp"
#include "shapeservo/types.hpp"

namespace shapeservo::plant {

class EquilibriumFailure : public std::runtime_error {
 public:
  EquilibriumFailure(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Minimal plant satisfying the first-order feature dynamics exactly:
// s advances as s += dt * J(t) * u, with J(t) = j0 * (1 + a*sin(2*pi*f*t)).
struct LinearPlantParams {
  MatrixX j0;                 // p x 6
  double tv_amplitude = 0.0;  // relative modulation of J
  double tv_frequency = 0.0;  // Hz
};

// Planar mass-spring chain. Node 0 and node 1 are clamped to the
// gripper (position + tangent direction derived from q); the far end is
// free. Shape is the quasi-static minimum of stretch + bending +
// gravity energy, found by damped Newton.
struct ChainPlantParams {
  int nodes = 20;
  double rest_length = 0.02;        // m per segment
  double stretch_stiffness = 200.0; // N/m
  double bend_stiffness = 0.05;     // N*m^2-ish discrete penalty
  double node_mass = 0.01;          // kg
  double gravity = 9.81;            // m/s^2, 0 = unloaded
  double fd_step = 1e-5;            // rad, central differences
  double px_scale = 500.0;          // px per m, scaled orthographic
  Eigen::Vector2d px_offset{320.0, 240.0};
  double solver_tol = 1e-9;
  int solver_max_iter = 200;
};

class Plant {
 public:
  static Plant make_linear(LinearPlantParams params, const VectorX& s0);
  static Plant make_chain(ChainPlantParams params);

  bool is_chain() const;
  const Vector6& q() const { return q_; }
  double time() const { return t_; }
  int feature_dim(const FeatureMapSpec& map) const;

  Centerline centerline() const;
  VectorX features(const FeatureMapSpec& map) const;
  MatrixX true_jacobian(const FeatureMapSpec& map) const;

  // Kinematic propagation: q += dt*u, then quasi-static re-solve
  // (chain) or exact feature integration (linear).
  Plant step(const Vector6& u, double dt) const;

  // Force residual norm of the last accepted equilibrium (chain only).
  double equilibrium_residual() const;

 private:
  Plant() = default;

  struct LinearState {
    LinearPlantParams params;
    VectorX s;
  };
  struct ChainState {
    ChainPlantParams params;
    MatrixX nodes;  // 2 x N node positions (meters)
    double residual = 0.0;
  };

  MatrixX jacobian_at(double t) const;
  static void solve_equilibrium(ChainState& cs, const Vector6& q);

  Vector6 q_ = Vector6::Zero();
  double t_ = 0.0;
  std::variant<LinearState, ChainState> state_;
};

}  // namespace shapeservo::plant
