#pragma once

#include "shapeservo/types.hpp"

namespace shapeservo::saturation {

// Per-axis joint velocity bounds. Each axis must bracket zero
// (u_min[i] < 0 < u_max[i]), otherwise the smooth model cannot
// saturate on both sides.
struct SaturationLimits {
  Vector6 u_min;
  Vector6 u_max;

  SaturationLimits(const Vector6& lo, const Vector6& hi);

  static SaturationLimits uniform(double lo, double hi);
};

struct SatOutput {
  Vector6 u;        // saturated command
  Vector6 u_tilde;  // u - v
};

// erf(x) = (2/sqrt(pi)) * integral_0^x exp(-t^2) dt
double erf(double x);

// Three-branch hard clamp.
Vector6 hard_sat(const Vector6& v, const SaturationLimits& limits);

// Smooth asymmetric saturation: u_i = u_mi * erf(sqrt(pi)/(2 u_mi) * v_i)
// with u_mi = (u_max+u_min)/2 + (u_max-u_min)/2 * sgn(v_i).
SatOutput gauss_sat(const Vector6& v, const SaturationLimits& limits);

// |x| - x*tanh(x/eps), always in [0, 0.2785*eps]. Throws on eps <= 0.
double tanh_gap(double x, double eps);

// The constant delta = 0.2785 satisfying delta = exp(-(delta+1)).
inline constexpr double kTanhGapDelta = 0.2785;

}  // namespace shapeservo::saturation
