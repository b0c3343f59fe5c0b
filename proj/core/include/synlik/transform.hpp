#pragma once

#include "synlik/types.hpp"

namespace synlik {

// Coordinate-wise maps between a bounded parameter and the real line. A
// bounds row (a, b) selects: logit for finite a and b, log(theta - a) for
// b = inf, -log(b - theta) for a = -inf, identity when both are infinite.

/// Original scale -> sampling scale. Throws DomainError when a coordinate is
/// on or outside one of its finite bounds.
ParamVector logit_transform(const ParamVector& theta, const BoundsMatrix& bounds);

/// Sampling scale -> original scale. Results are kept strictly inside the bounds.
ParamVector inverse_logit_transform(const ParamVector& theta_tilde, const BoundsMatrix& bounds);

/// sum_i log|d theta_i / d theta_tilde_i|, overflow-safe.
double log_jacobian(const ParamVector& theta_tilde, const BoundsMatrix& bounds);

}  // namespace synlik
