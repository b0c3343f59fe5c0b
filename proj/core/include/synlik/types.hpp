#pragma once

#include <Eigen/Dense>

namespace synlik {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Model parameter theta, length p.
using ParamVector = Eigen::VectorXd;
/// One summary statistic, length d.
using SummaryVector = Eigen::VectorXd;
/// n simulated summaries stored row-wise (n x d).
using SummaryMatrix = Eigen::MatrixXd;
/// Per-parameter (lower, upper) bounds stored as a p x 2 matrix; entries may be infinite.
using BoundsMatrix = Eigen::MatrixX2d;

struct MomentEstimates {
  SummaryVector mean;
  Matrix covariance;
  Eigen::Index n = 0;
};

}  // namespace synlik
