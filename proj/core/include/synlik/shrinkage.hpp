#pragma once

#include <string_view>

#include "synlik/types.hpp"

namespace synlik {

enum class ShrinkageKind { None, Glasso, Warton };

std::string_view to_string(ShrinkageKind kind);
/// Accepts "none", "glasso" and "Warton" (case-insensitive).
ShrinkageKind parse_shrinkage_kind(std::string_view name);

/// Which penalised estimator to apply and its penalty: lambda for the
/// graphical lasso, gamma in [0, 1] for Warton.
struct ShrinkageSpec {
  ShrinkageKind kind = ShrinkageKind::None;
  double penalty = 0.0;

  static ShrinkageSpec none() { return {}; }
  static ShrinkageSpec glasso(double lambda) { return {ShrinkageKind::Glasso, lambda}; }
  static ShrinkageSpec warton(double gamma) { return {ShrinkageKind::Warton, gamma}; }

  /// Throws DomainError when the penalty is out of range for the kind.
  void validate() const;
};

struct GlassoOptions {
  /// Relative tolerance: a sweep converges when the largest absolute change in
  /// the working covariance is below tol * mean(|offdiag(S)|).
  double tol = 1e-4;
  int max_iter = 10000;
  /// Coordinate-descent tolerance of each inner lasso problem.
  double inner_tol = 1e-10;
  int inner_max_iter = 10000;
};

struct GlassoResult {
  Matrix covariance;
  Matrix precision;
  int iterations = 0;
  bool converged = false;
};

/// Graphical lasso by block coordinate descent (Friedman, Hastie and
/// Tibshirani 2008). Maximises log|Theta| - tr(Theta S) - lambda * sum_{i != j}
/// |Theta_ij|; the diagonal is not penalised, so diag(covariance) == diag(S).
///
/// Non-convergence is reported through `converged` and a warning; the last
/// iterate is still returned.
GlassoResult glasso(const Matrix& s_cov, double lambda, const GlassoOptions& options = {});

/// Warton's ridge-to-identity covariance: D^{1/2} (gamma C + (1-gamma) I) D^{1/2}
/// where C is the correlation matrix of `s_cov` and D its diagonal.
Matrix warton_covariance(const Matrix& s_cov, double gamma);

/// gamma * corr + (1 - gamma) * I.
Matrix warton_correlation(const Matrix& corr, double gamma);

/// Graphical lasso on a correlation matrix, rescaled back to unit diagonal.
Matrix glasso_correlation(const Matrix& corr, double lambda, const GlassoOptions& options = {});

/// Applies `spec` to a covariance matrix (standard estimator path).
Matrix shrink_covariance(const Matrix& cov, const ShrinkageSpec& spec);
/// Applies `spec` to a copula correlation matrix (semi-parametric path).
Matrix shrink_correlation(const Matrix& corr, const ShrinkageSpec& spec);

}  // namespace synlik
