#pragma once

#include <Eigen/Dense>
#include <limits>

namespace glift {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances shared across modules.
constexpr double kSeedTol = 1e-10;
constexpr double kBoundaryMargin = 1e-9;
constexpr double kVerdictSlack = 1e-9;

}  // namespace glift
