#pragma once

#include "shapeservo/types.hpp"

namespace shapeservo::estimator {

struct EstimatorGains {
  double eps2 = 0.1;
  double gamma2 = 1.0;
  double pinv_damping = 1e-6;   // lambda
  double v_guard = 1e-6;        // excitation threshold on |v|
  double filter_cutoff = 20.0;  // Hz, rate filtering
  double sigma_guard = 1e-9;
  // Slew limit on |Jdot|_F. The regressor division v^T/|v|^2 is unbounded as
  // |v| -> 0, so a fixed-step realization of the update needs a rate ceiling;
  // the update direction (and with it the sigma2 cancellation along v) is
  // preserved whenever the ceiling is inactive.
  double jdot_max = 2.0;

  void validate() const;
};

// One-pole low-pass differentiation state for s_dot and s_ddot.
// Rates are reported as zero (and flagged) during a 2-sample warm-up.
struct RateFilterState {
  VectorX prev_s;
  VectorX s_dot;   // filtered
  VectorX s_ddot;  // filtered
  VectorX prev_s_dot;
  int samples = 0;
  double dt = 0.0;

  static RateFilterState initial(int p);
  bool warmed_up() const { return samples > 2; }
};

struct FeatureRates {
  VectorX s_dot;
  VectorX s_ddot;
  bool valid = false;  // false during warm-up
};

FeatureRates feature_rates(const VectorX& s, RateFilterState& state, double dt,
                           double cutoff_hz);

struct EstimatorState {
  MatrixX j_hat;  // p x 6
  double eta2_hat = 0.0;
  VectorX e2_0;
  VectorX int_e2;
  VectorX prev_e2;
  VectorX sigma2;
  VectorX e2;
  bool started = false;

  static EstimatorState initial(const MatrixX& j0);
};

// M^T (M M^T + lambda I)^-1, Cholesky on the damped Gram matrix.
MatrixX damped_pinv(const MatrixX& m, double lambda);

// sigma2 = e2 - e2(0) + int e2 dt (trapezoidal), e2 = s_dot - Jhat*u.
EstimatorState update_surface2(const EstimatorState& state, const VectorX& e2,
                               double dt);

// Jhat += dt * (s_ddot - Jhat*v_dot + sigma2 + e2 + sigma2^T+ * Theta2) v^+,
// Theta2 = tanh(|sigma2|/eps2)*eta2_hat*|sigma2|, v^+ = v^T/|v|^2.
// No update below the excitation guard; |Jdot|_F clamped to jdot_max.
EstimatorState djm_update(const EstimatorState& state, const VectorX& s_ddot,
                          const Vector6& v, const Vector6& v_dot,
                          const EstimatorGains& gains, double dt);

double adapt_eta2(double eta2_hat, const VectorX& sigma2,
                  const EstimatorGains& gains, double dt);

}  // namespace shapeservo::estimator
