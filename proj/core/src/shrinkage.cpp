#include "synlik/shrinkage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "synlik/error.hpp"

namespace synlik {

namespace {

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

std::string lower_case(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Removes row and column j.
Matrix drop_index(const Matrix& a, Eigen::Index j) {
  const Eigen::Index d = a.rows();
  Matrix out(d - 1, d - 1);
  for (Eigen::Index r = 0, rr = 0; r < d; ++r) {
    if (r == j) continue;
    for (Eigen::Index c = 0, cc = 0; c < d; ++c) {
      if (c == j) continue;
      out(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return out;
}

Vector drop_entry(const Vector& v, Eigen::Index j) {
  Vector out(v.size() - 1);
  for (Eigen::Index i = 0, k = 0; i < v.size(); ++i) {
    if (i != j) out(k++) = v(i);
  }
  return out;
}

// Solves min_b 0.5 b'W b - b's + lambda |b|_1 by cyclic coordinate descent,
// warm-started from `beta`.
void lasso_coordinate_descent(const Matrix& w, const Vector& s, double lambda,
                              const GlassoOptions& options, Vector& beta) {
  const Eigen::Index m = w.rows();
  Vector wb = w * beta;
  for (int iter = 0; iter < options.inner_max_iter; ++iter) {
    double max_change = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double partial = s(k) - (wb(k) - w(k, k) * beta(k));
      const double updated = soft_threshold(partial, lambda) / w(k, k);
      const double delta = updated - beta(k);
      if (delta != 0.0) {
        wb += delta * w.col(k);
        beta(k) = updated;
        max_change = std::max(max_change, std::fabs(delta));
      }
    }
    if (max_change < options.inner_tol) return;
  }
}

void require_positive_diagonal(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw DomainError(std::string(who) + ": matrix must be square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (!(a(i, i) > 0.0)) {
      throw DegenerateMargin(std::string(who) + ": diagonal entry " + std::to_string(i) +
                             " is not positive");
    }
  }
}

}  // namespace

std::string_view to_string(ShrinkageKind kind) {
  switch (kind) {
    case ShrinkageKind::None: return "none";
    case ShrinkageKind::Glasso: return "glasso";
    case ShrinkageKind::Warton: return "Warton";
  }
  return "none";
}

ShrinkageKind parse_shrinkage_kind(std::string_view name) {
  const std::string key = lower_case(name);
  if (key == "none") return ShrinkageKind::None;
  if (key == "glasso") return ShrinkageKind::Glasso;
  if (key == "warton") return ShrinkageKind::Warton;
  throw DomainError("unknown shrinkage '" + std::string(name) + "' (expected none, glasso or Warton)");
}

void ShrinkageSpec::validate() const {
  if (!std::isfinite(penalty) || penalty < 0.0) {
    throw DomainError("shrinkage penalty must be a finite non-negative number");
  }
  if (kind == ShrinkageKind::Warton && penalty > 1.0) {
    throw DomainError("Warton penalty gamma must lie in [0, 1]");
  }
}

GlassoResult glasso(const Matrix& s_cov, double lambda, const GlassoOptions& options) {
  require_positive_diagonal(s_cov, "glasso");
  if (!(lambda >= 0.0)) throw DomainError("glasso: lambda must be non-negative");
  const Eigen::Index d = s_cov.rows();

  GlassoResult result;
  result.covariance = s_cov;
  if (d == 1) {
    result.precision = s_cov.cwiseInverse();
    result.converged = true;
    return result;
  }

  double mean_offdiag = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) mean_offdiag += std::fabs(s_cov(i, j));
  mean_offdiag /= static_cast<double>(d * (d - 1));
  const double threshold = options.tol * mean_offdiag;

  Matrix& w = result.covariance;
  // Column j holds the lasso coefficients for variable j (entry j unused).
  Matrix betas = Matrix::Zero(d - 1, d);

  for (int sweep = 1; sweep <= options.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const Matrix w11 = drop_index(w, j);
      const Vector s12 = drop_entry(s_cov.col(j), j);
      Vector beta = betas.col(j);
      lasso_coordinate_descent(w11, s12, lambda, options, beta);
      betas.col(j) = beta;
      const Vector w12 = w11 * beta;
      for (Eigen::Index i = 0, k = 0; i < d; ++i) {
        if (i == j) continue;
        max_change = std::max(max_change, std::fabs(w12(k) - w(i, j)));
        w(i, j) = w12(k);
        w(j, i) = w12(k);
        ++k;
      }
    }
    result.iterations = sweep;
    if (max_change <= threshold) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    spdlog::warn("glasso did not converge after {} sweeps (lambda = {})", options.max_iter, lambda);
  }

  // theta_jj = 1 / (w_jj - w12' beta), theta_12 = -beta theta_jj.
  Matrix& precision = result.precision;
  precision = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector beta = betas.col(j);
    const Vector w12 = drop_entry(w.col(j), j);
    const double theta_jj = 1.0 / (w(j, j) - w12.dot(beta));
    precision(j, j) = theta_jj;
    for (Eigen::Index i = 0, k = 0; i < d; ++i) {
      if (i == j) continue;
      precision(i, j) = -beta(k++) * theta_jj;
    }
  }
  precision = 0.5 * (precision + precision.transpose()).eval();
  return result;
}

Matrix warton_covariance(const Matrix& s_cov, double gamma) {
  require_positive_diagonal(s_cov, "warton_covariance");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("warton_covariance: gamma must lie in [0, 1]");
  // Scaling the off-diagonals by gamma is D^{1/2} (gamma C + (1-gamma) I) D^{1/2}.
  Matrix out = gamma * s_cov;
  out.diagonal() = s_cov.diagonal();
  return out;
}

Matrix warton_correlation(const Matrix& corr, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("warton_correlation: gamma must lie in [0, 1]");
  Matrix out = gamma * corr;
  out.diagonal().setOnes();
  return out;
}

Matrix glasso_correlation(const Matrix& corr, double lambda, const GlassoOptions& options) {
  const Matrix w = glasso(corr, lambda, options).covariance;
  const Vector inv_sd = w.diagonal().cwiseSqrt().cwiseInverse();
  Matrix out = inv_sd.asDiagonal() * w * inv_sd.asDiagonal();
  out.diagonal().setOnes();
  return out;
}

Matrix shrink_covariance(const Matrix& cov, const ShrinkageSpec& spec) {
  switch (spec.kind) {
    case ShrinkageKind::None: return cov;
    case ShrinkageKind::Glasso: return glasso(cov, spec.penalty).covariance;
    case ShrinkageKind::Warton: return warton_covariance(cov, spec.penalty);
  }
  return cov;
}

Matrix shrink_correlation(const Matrix& corr, const ShrinkageSpec& spec) {
  switch (spec.kind) {
    case ShrinkageKind::None: return corr;
    case ShrinkageKind::Glasso: return glasso_correlation(corr, spec.penalty);
    case ShrinkageKind::Warton: return warton_correlation(corr, spec.penalty);
  }
  return corr;
}

}  // namespace synlik
