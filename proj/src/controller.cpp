#include "shapeservo/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "shapeservo/estimator.hpp"

namespace shapeservo::controller {

void ControllerGains::validate() const {
  if (!(eps1 > 0.0 && gamma1 > 0.0 && sigma_guard > 0.0 &&
        pinv_damping > 0.0)) {
    throw std::invalid_argument("controller gains must be strictly positive");
  }
}

ControllerState ControllerState::initial(int p) {
  ControllerState s;
  s.e1_0 = VectorX::Zero(p);
  s.int_e1 = VectorX::Zero(p);
  s.prev_e1 = VectorX::Zero(p);
  s.sigma1 = VectorX::Zero(p);
  return s;
}

VectorX deformation_error(const VectorX& s, const VectorX& s_d) {
  if (s.size() != s_d.size()) {
    throw std::invalid_argument("feature dimension mismatch in e1");
  }
  return s - s_d;
}

ControllerState update_surface1(const ControllerState& state,
                                const VectorX& e1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("update_surface1: dt > 0");
  ControllerState next = state;
  if (!state.started) {
    next.e1_0 = e1;
    next.int_e1 = VectorX::Zero(e1.size());
    next.started = true;
  } else {
    next.int_e1 += 0.5 * dt * (state.prev_e1 + e1);
  }
  next.prev_e1 = e1;
  next.sigma1 = e1 - next.e1_0 + next.int_e1;
  return next;
}

Vector6 control_law(const VectorX& sigma1, const VectorX& s_d_dot,
                    const VectorX& e1, const MatrixX& j_hat, double eta1_hat,
                    const ControllerGains& gains) {
  gains.validate();
  if (!sigma1.allFinite() || !s_d_dot.allFinite() || !e1.allFinite() ||
      !j_hat.allFinite() || !std::isfinite(eta1_hat)) {
    throw std::invalid_argument("control_law: non-finite input");
  }
  const double norm = sigma1.norm();
  VectorX theta1;
  if (norm < gains.sigma_guard) {
    theta1 = -(eta1_hat / gains.eps1) * sigma1;
  } else {
    theta1 = -(eta1_hat * std::tanh(norm / gains.eps1) / norm) * sigma1;
  }
  const MatrixX j_pinv = estimator::damped_pinv(j_hat, gains.pinv_damping);
  return j_pinv * (-sigma1 + s_d_dot - e1 + theta1);
}

double adapt_eta1(double eta1_hat, const VectorX& sigma1,
                  const ControllerGains& gains, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adapt_eta1: dt > 0");
  const double norm = sigma1.norm();
  const double next =
      eta1_hat +
      dt * (std::tanh(norm / gains.eps1) * norm - gains.gamma1 * eta1_hat);
  return std::max(next, 0.0);
}

}  // namespace shapeservo::controller
