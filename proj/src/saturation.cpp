#include "shapeservo/saturation.hpp"

#include <cmath>
#include <stdexcept>

namespace shapeservo::saturation {

namespace {
double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }  // sgn(0) := +1
}  // namespace

SaturationLimits::SaturationLimits(const Vector6& lo, const Vector6& hi)
    : u_min(lo), u_max(hi) {
  for (int i = 0; i < kJointDim; ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw std::invalid_argument("saturation limits must be finite");
    }
    if (!(lo[i] < 0.0 && 0.0 < hi[i])) {
      throw std::invalid_argument(
          "saturation limits must satisfy u_min < 0 < u_max per axis");
    }
  }
}

SaturationLimits SaturationLimits::uniform(double lo, double hi) {
  return SaturationLimits(Vector6::Constant(lo), Vector6::Constant(hi));
}

double erf(double x) { return std::erf(x); }

Vector6 hard_sat(const Vector6& v, const SaturationLimits& limits) {
  Vector6 out;
  for (int i = 0; i < kJointDim; ++i) {
    if (v[i] >= limits.u_max[i]) {
      out[i] = limits.u_max[i];
    } else if (v[i] <= limits.u_min[i]) {
      out[i] = limits.u_min[i];
    } else {
      out[i] = v[i];
    }
  }
  return out;
}

SatOutput gauss_sat(const Vector6& v, const SaturationLimits& limits) {
  constexpr double kHalfSqrtPi = 0.88622692545275801;  // sqrt(pi)/2
  SatOutput out;
  for (int i = 0; i < kJointDim; ++i) {
    const double mid = 0.5 * (limits.u_max[i] + limits.u_min[i]);
    const double half = 0.5 * (limits.u_max[i] - limits.u_min[i]);
    const double u_m = mid + half * sgn(v[i]);
    // u_m has the sign of v (u_max for v >= 0, u_min for v < 0).
    out.u[i] = u_m * erf(kHalfSqrtPi / u_m * v[i]);
    out.u_tilde[i] = out.u[i] - v[i];
  }
  return out;
}

double tanh_gap(double x, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("tanh_gap requires eps > 0");
  }
  return std::abs(x) - x * std::tanh(x / eps);
}

}  // namespace shapeservo::saturation
