#include "shapeservo/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shapeservo::estimator {

void EstimatorGains::validate() const {
  if (!(eps2 > 0.0 && gamma2 > 0.0 && pinv_damping > 0.0 && v_guard > 0.0 &&
        filter_cutoff > 0.0 && sigma_guard > 0.0 && jdot_max > 0.0)) {
    throw std::invalid_argument("estimator gains must be strictly positive");
  }
}

RateFilterState RateFilterState::initial(int p) {
  RateFilterState s;
  s.prev_s = VectorX::Zero(p);
  s.s_dot = VectorX::Zero(p);
  s.s_ddot = VectorX::Zero(p);
  s.prev_s_dot = VectorX::Zero(p);
  return s;
}

FeatureRates feature_rates(const VectorX& s, RateFilterState& state, double dt,
                           double cutoff_hz) {
  if (!(dt > 0.0)) throw std::invalid_argument("feature_rates: dt > 0");
  if (state.dt == 0.0) {
    state.dt = dt;
  } else if (state.dt != dt) {
    throw std::invalid_argument("feature_rates: dt changed mid-run");
  }
  ++state.samples;
  FeatureRates out;
  out.s_dot = VectorX::Zero(s.size());
  out.s_ddot = VectorX::Zero(s.size());
  if (state.samples <= 2) {
    // warm-up: no usable difference yet
    state.prev_s = s;
    return out;
  }
  const double rc = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
  const double alpha = dt / (dt + rc);
  const VectorX raw_dot = (s - state.prev_s) / dt;
  state.prev_s_dot = state.s_dot;
  state.s_dot += alpha * (raw_dot - state.s_dot);
  const VectorX raw_ddot = (state.s_dot - state.prev_s_dot) / dt;
  state.s_ddot += alpha * (raw_ddot - state.s_ddot);
  state.prev_s = s;
  out.s_dot = state.s_dot;
  out.s_ddot = state.s_ddot;
  out.valid = true;
  return out;
}

EstimatorState EstimatorState::initial(const MatrixX& j0) {
  EstimatorState s;
  s.j_hat = j0;
  const int p = static_cast<int>(j0.rows());
  s.e2_0 = VectorX::Zero(p);
  s.int_e2 = VectorX::Zero(p);
  s.prev_e2 = VectorX::Zero(p);
  s.sigma2 = VectorX::Zero(p);
  s.e2 = VectorX::Zero(p);
  return s;
}

MatrixX damped_pinv(const MatrixX& m, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("damped_pinv: lambda > 0");
  if (!m.allFinite()) {
    throw std::invalid_argument("damped_pinv: non-finite matrix");
  }
  const int p = static_cast<int>(m.rows());
  MatrixX gram = m * m.transpose();
  gram.diagonal().array() += lambda;
  return m.transpose() * gram.llt().solve(MatrixX::Identity(p, p));
}

EstimatorState update_surface2(const EstimatorState& state, const VectorX& e2,
                               double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("update_surface2: dt > 0");
  EstimatorState next = state;
  if (!state.started) {
    next.e2_0 = e2;
    next.int_e2 = VectorX::Zero(e2.size());
    next.started = true;
  } else {
    next.int_e2 += 0.5 * dt * (state.prev_e2 + e2);
  }
  next.prev_e2 = e2;
  next.e2 = e2;
  next.sigma2 = e2 - next.e2_0 + next.int_e2;
  return next;
}

EstimatorState djm_update(const EstimatorState& state, const VectorX& s_ddot,
                          const Vector6& v, const Vector6& v_dot,
                          const EstimatorGains& gains, double dt) {
  gains.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("djm_update: dt > 0");
  if (!s_ddot.allFinite() || !v.allFinite() || !v_dot.allFinite()) {
    throw std::invalid_argument("djm_update: non-finite input");
  }
  const double vnorm = v.norm();
  if (vnorm < gains.v_guard) {
    return state;  // no excitation, no information about J
  }
  EstimatorState next = state;
  const double snorm = state.sigma2.norm();
  VectorX theta_term;
  if (snorm < gains.sigma_guard) {
    theta_term = (state.eta2_hat / gains.eps2) * state.sigma2;
  } else {
    theta_term =
        (state.eta2_hat * std::tanh(snorm / gains.eps2) / snorm) * state.sigma2;
  }
  const VectorX drive =
      s_ddot - state.j_hat * v_dot + state.sigma2 + state.e2 + theta_term;
  MatrixX jdot = drive * (v.transpose() / (vnorm * vnorm));
  const double jdot_norm = jdot.norm();
  if (jdot_norm > gains.jdot_max) jdot *= gains.jdot_max / jdot_norm;
  next.j_hat += dt * jdot;
  return next;
}

double adapt_eta2(double eta2_hat, const VectorX& sigma2,
                  const EstimatorGains& gains, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adapt_eta2: dt > 0");
  const double norm = sigma2.norm();
  const double next =
      eta2_hat +
      dt * (std::tanh(norm / gains.eps2) * norm - gains.gamma2 * eta2_hat);
  return std::max(next, 0.0);
}

}  // namespace shapeservo::estimator
