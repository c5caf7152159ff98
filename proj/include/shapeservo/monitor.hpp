#pragma once

#include <vector>

#include "shapeservo/types.hpp"

namespace shapeservo::monitor {

struct LyapunovSample {
  double t = 0.0;
  double v1 = 0.0;       // 0.5 |sigma1|^2
  double v2 = 0.0;       // 0.5 |sigma2|^2
  double v_total = 0.0;  // v1 + v2 + 0.5 eta_tilde1^2 + 0.5 eta_tilde2^2
  double d_norm = 0.0;   // measured |d| (feature-dynamics residual)
  double jdot_u_norm = 0.0;  // measured |Jhat_dot * u_tilde|
};

struct UubBounds {
  double a = 0.0;     // min(2, gamma1, gamma2)
  double b = 0.0;     // gamma1*eta1^2/2 + gamma2*eta2^2/2 + delta*(eta1*eps1 + eta2*eps2)
  double ball = 0.0;  // b/a
};

struct DecreaseReport {
  double violation_fraction = 0.0;
  double worst_margin = 0.0;  // max over pairs of dV/dt - (-a*V + b + tol)
  int checked = 0;
  int violations = 0;
};

LyapunovSample lyapunov(const VectorX& sigma1, const VectorX& sigma2,
                        double eta1_hat, double eta2_hat, double eta1_ref,
                        double eta2_ref);

UubBounds uub_bounds(double gamma1, double gamma2, double eps1, double eps2,
                     double eta1, double eta2);

// Checks dV/dt <= -a*V + b + tol on consecutive sample pairs.
DecreaseReport check_decrease(const std::vector<LyapunovSample>& samples,
                              const UubBounds& bounds, double dt, double tol);

}  // namespace shapeservo::monitor
