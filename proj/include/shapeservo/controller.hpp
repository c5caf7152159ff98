#pragma once

#include "shapeservo/types.hpp"

namespace shapeservo::controller {

struct ControllerGains {
  double eps1 = 0.1;          // tanh sharpness
  double gamma1 = 1.0;        // adaptive leak rate
  double sigma_guard = 1e-9;  // small-norm guard, default 1e-8 * eps1
  double pinv_damping = 1e-6;

  void validate() const;
};

// Integral-sliding-surface bookkeeping for the deformation error.
// sigma1 = e1 - e1(0) + int e1 dt, zero at t = 0 by construction.
struct ControllerState {
  VectorX e1_0;
  VectorX int_e1;
  VectorX prev_e1;
  VectorX sigma1;
  double eta1_hat = 0.0;
  bool started = false;

  static ControllerState initial(int p);
};

VectorX deformation_error(const VectorX& s, const VectorX& s_d);

// Trapezoidal integral update; first call captures e1(0).
ControllerState update_surface1(const ControllerState& state,
                                const VectorX& e1, double dt);

// v = Jhat^+ (-sigma1 + sd_dot - e1 + Theta1),
// Theta1 = -eta1_hat * tanh(|sigma1|/eps1) * sigma1/|sigma1|,
// with the continuous limit -eta1_hat * sigma1/eps1 inside the guard.
Vector6 control_law(const VectorX& sigma1, const VectorX& s_d_dot,
                    const VectorX& e1, const MatrixX& j_hat, double eta1_hat,
                    const ControllerGains& gains);

// eta1_hat += dt * (tanh(|sigma1|/eps1)*|sigma1| - gamma1*eta1_hat),
// clamped at zero.
double adapt_eta1(double eta1_hat, const VectorX& sigma1,
                  const ControllerGains& gains, double dt);

}  // namespace shapeservo::controller
