#include "shapeservo/feature_map.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shapeservo::plant {

MatrixX feature_matrix(const FeatureMapSpec& map, int num_points) {
  const int n = num_points;
  const int p = map.p;
  if (n < 3) throw std::invalid_argument("centerline needs at least 3 points");
  if (p < 2 || p % 2 != 0) {
    throw std::invalid_argument("feature dimension p must be even and >= 2");
  }
  if (p > 2 * n) {
    throw std::invalid_argument("feature dimension p exceeds 2N");
  }
  const int m = p / 2;
  MatrixX F = MatrixX::Zero(p, 2 * n);

  if (map.kind == FeatureMapKind::kSubsample) {
    for (int j = 0; j < m; ++j) {
      const int idx = (m == 1) ? 0
                               : static_cast<int>(std::lround(
                                     static_cast<double>(j) * (n - 1) / (m - 1)));
      F(2 * j, 2 * idx) = 1.0;
      F(2 * j + 1, 2 * idx + 1) = 1.0;
    }
    return F;
  }

  // Fourier descriptors. Work on complex z_j = x_j + i*y_j.
  // Order 0: centroid (1/N) sum z_j.
  for (int j = 0; j < n; ++j) {
    F(0, 2 * j) = 1.0 / n;
    F(1, 2 * j + 1) = 1.0 / n;
  }
  // Orders k >= 1 act on the chord-detrended sequence
  //   d_j = z_j - (z_0 + (z_{N-1} - z_0) * j/(N-1)),
  // itself linear in the coordinates, so the composite stays linear.
  for (int k = 1; k < m; ++k) {
    for (int j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * j * k / n;
      const double wr = std::cos(ang) / n;
      const double wi = std::sin(ang) / n;
      const double t = static_cast<double>(j) / (n - 1);
      // weight applied to z_j, z_0 and z_{N-1} through the detrend
      auto add = [&](int col_point, double coeff) {
        // complex multiply (wr + i wi)*coeff distributed over (x, y)
        F(2 * k, 2 * col_point) += wr * coeff;
        F(2 * k, 2 * col_point + 1) += -wi * coeff;
        F(2 * k + 1, 2 * col_point) += wi * coeff;
        F(2 * k + 1, 2 * col_point + 1) += wr * coeff;
      };
      add(j, 1.0);
      add(0, -(1.0 - t));
      add(n - 1, -t);
    }
  }
  return F;
}

ShapeFeature extract_features(const Centerline& c, const FeatureMapSpec& map) {
  if (!c.coords.allFinite()) {
    throw std::invalid_argument("centerline has non-finite coordinates");
  }
  const MatrixX F = feature_matrix(map, c.num_points());
  return ShapeFeature{F * c.coords};
}

}  // namespace shapeservo::plant
