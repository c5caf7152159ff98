#pragma once

#include <Eigen/Dense>

namespace shapeservo {

inline constexpr int kJointDim = 6;

using Vector6 = Eigen::Matrix<double, kJointDim, 1>;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

}  // namespace shapeservo
