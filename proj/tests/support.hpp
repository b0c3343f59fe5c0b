#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "synlik/rng.hpp"
#include "synlik/types.hpp"

namespace synlik::testing {

inline RngStream test_stream(std::uint64_t seed, std::uint64_t index = 0) {
  return RngStream(seed, make_stream_id(StreamPurpose::User, index));
}

inline Matrix random_normal_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

/// A x A' + d I: symmetric positive definite with a controlled condition number.
inline Matrix random_spd(RngStream& rng, Eigen::Index d, double ridge = 0.5) {
  const Matrix a = random_normal_matrix(rng, d, d);
  return a * a.transpose() / static_cast<double>(d) + ridge * Matrix::Identity(d, d);
}

/// n draws from N(mean, cov), one per row.
inline SummaryMatrix mvn_draws(RngStream& rng, const Vector& mean, const Matrix& cov, Eigen::Index n) {
  const Matrix l = cov.llt().matrixL();
  const Matrix z = random_normal_matrix(rng, n, mean.size());
  return (z * l.transpose()).rowwise() + mean.transpose();
}

}  // namespace synlik::testing
