#pragma once

#include <vector>

#include "shapeservo/types.hpp"

namespace shapeservo::plant {

// Ordered 2-D pixel coordinates of the observed centerline. Index i is
// the identity of the i-th physical point.
struct Centerline {
  // Stacked as [x0, y0, x1, y1, ...], size 2N.
  VectorX coords;

  int num_points() const { return static_cast<int>(coords.size()) / 2; }
  Eigen::Vector2d point(int i) const {
    return Eigen::Vector2d(coords[2 * i], coords[2 * i + 1]);
  }
};

struct ShapeFeature {
  VectorX s;
};

enum class FeatureMapKind { kSubsample, kFourier };

// A fixed linear map s = F * c_bar.
//   subsample: coordinates of p/2 evenly spaced points.
//   fourier:   order 0 is the centroid; orders k >= 1 are the complex DFT
//              coefficients of the chord-detrended point sequence,
//              real/imaginary stacked. Any straight centerline maps to
//              zero at every order >= 1.
struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::kSubsample;
  int p = 6;  // output dimension, must be even and <= 2N
};

ShapeFeature extract_features(const Centerline& c, const FeatureMapSpec& map);

// Dense matrix F of the map for a given N, so that
// extract_features(c).s == F * c.coords. Used by tests and the
// finite-difference Jacobian path.
MatrixX feature_matrix(const FeatureMapSpec& map, int num_points);

}  // namespace shapeservo::plant
