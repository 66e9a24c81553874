#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace evsys {

using Index = Eigen::Index;

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ExponentVector = Eigen::VectorXi;

}  // namespace evsys
