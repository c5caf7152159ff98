#include "shapeservo/monitor.hpp"

#include <algorithm>
#include <stdexcept>

#include "shapeservo/saturation.hpp"

namespace shapeservo::monitor {

LyapunovSample lyapunov(const VectorX& sigma1, const VectorX& sigma2,
                        double eta1_hat, double eta2_hat, double eta1_ref,
                        double eta2_ref) {
  if (eta1_ref < 0.0 || eta2_ref < 0.0) {
    throw std::invalid_argument("lyapunov: eta references must be >= 0");
  }
  LyapunovSample s;
  s.v1 = 0.5 * sigma1.squaredNorm();
  s.v2 = 0.5 * sigma2.squaredNorm();
  const double et1 = eta1_ref - eta1_hat;
  const double et2 = eta2_ref - eta2_hat;
  s.v_total = s.v1 + s.v2 + 0.5 * et1 * et1 + 0.5 * et2 * et2;
  return s;
}

UubBounds uub_bounds(double gamma1, double gamma2, double eps1, double eps2,
                     double eta1, double eta2) {
  if (!(gamma1 > 0.0 && gamma2 > 0.0 && eps1 > 0.0 && eps2 > 0.0 &&
        eta1 > 0.0 && eta2 > 0.0)) {
    throw std::invalid_argument("uub_bounds: inputs must be > 0");
  }
  UubBounds b;
  b.a = std::min({2.0, gamma1, gamma2});
  b.b = 0.5 * gamma1 * eta1 * eta1 + 0.5 * gamma2 * eta2 * eta2 +
        saturation::kTanhGapDelta * (eta1 * eps1 + eta2 * eps2);
  b.ball = b.b / b.a;
  return b;
}

DecreaseReport check_decrease(const std::vector<LyapunovSample>& samples,
                              const UubBounds& bounds, double dt, double tol) {
  if (samples.size() < 2) {
    throw std::invalid_argument("check_decrease: need at least 2 samples");
  }
  DecreaseReport rep;
  rep.worst_margin = -1e300;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    const double v = samples[i].v_total;
    const double dv_dt = (samples[i + 1].v_total - v) / dt;
    const double margin = dv_dt - (-bounds.a * v + bounds.b + tol);
    rep.worst_margin = std::max(rep.worst_margin, margin);
    if (margin > 0.0) ++rep.violations;
    ++rep.checked;
  }
  rep.violation_fraction =
      static_cast<double>(rep.violations) / rep.checked;
  return rep;
}

}  // namespace shapeservo::monitor
