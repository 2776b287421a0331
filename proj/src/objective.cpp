#include "ped/objective.hpp"

#include <cmath>

namespace ped {

double geometric_mean_norm(std::span<const double> beta) {
  return std::sqrt(norm1(beta) * norm2(beta));
}

double k_hat(std::span<const double> beta) {
  const double l1 = norm1(beta);
  if (l1 == 0.0) throw std::domain_error("k_hat undefined for beta = 0");
  return std::sqrt(norm2(beta) / l1);
}

namespace {

Vector residual(const StandardizedDataset& ds, std::span<const double> beta) {
  Vector r = ds.y;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (beta[j] != 0.0) kernels::axpy(-beta[j], ds.X.col(j), r);
  return r;
}

}  // namespace

ObjectiveParts ped_objective(const StandardizedDataset& ds,
                             std::span<const double> beta, double lambda) {
  if (beta.size() != ds.p())
    throw DataError("coefficient length does not match design columns");
  ObjectiveParts parts;
  const Vector r = residual(ds, beta);
  parts.residual_norm = norm2(r);
  parts.penalty_norm = geometric_mean_norm(beta);
  parts.objective = parts.residual_norm + lambda * parts.penalty_norm;
  if (parts.residual_norm > 0.0) {
    parts.cosines = tmatvec(ds.X, r);
    kernels::scal(1.0 / parts.residual_norm, parts.cosines);
    parts.cosines_defined = true;
  } else {
    parts.cosines.assign(ds.p(), 0.0);
  }
  if (norm1(beta) > 0.0) parts.k_hat = k_hat(beta);
  return parts;
}

double smoothed_objective(const StandardizedDataset& ds,
                          std::span<const double> beta, double lambda,
                          double smoothing_eps) {
  const Vector r = residual(ds, beta);
  const double rn = norm2(r);
  if (rn <= kResidualGuard)
    throw InterpolationRegimeError("residual norm below guard");
  const double e2 = smoothing_eps * smoothing_eps;
  double l1s = 0.0;
  for (double b : beta) l1s += std::sqrt(b * b + e2);
  const double l2s = std::sqrt(kernels::sum_sq(beta) + e2);
  return rn + lambda * std::sqrt(l1s * l2s);
}

double smoothed_value_gradient(const StandardizedDataset& ds,
                               std::span<const double> beta, double lambda,
                               double smoothing_eps, Vector& grad) {
  const Vector r = residual(ds, beta);
  const double rn = norm2(r);
  if (rn <= kResidualGuard)
    throw InterpolationRegimeError("residual norm below guard");

  grad = tmatvec(ds.X, r);
  kernels::scal(-1.0 / rn, grad);

  double value = rn;
  if (lambda > 0.0) {
    const double e2 = smoothing_eps * smoothing_eps;
    double l1s = 0.0;
    for (double b : beta) l1s += std::sqrt(b * b + e2);
    const double l2s = std::sqrt(kernels::sum_sq(beta) + e2);
    const double pen = std::sqrt(l1s * l2s);
    value += lambda * pen;
    if (pen > 0.0) {
      const double half_over_pen = 0.5 / pen;
      for (std::size_t j = 0; j < beta.size(); ++j) {
        const double b = beta[j];
        const double dl1 = b / std::sqrt(b * b + e2);
        const double dl2 = b / l2s;
        grad[j] += lambda * half_over_pen * (l2s * dl1 + l1s * dl2);
      }
    }
  }
  return value;
}

Vector ped_gradient(const StandardizedDataset& ds, std::span<const double> beta,
                    double lambda, double smoothing_eps) {
  Vector g;
  smoothed_value_gradient(ds, beta, lambda, smoothing_eps, g);
  return g;
}

}  // namespace ped
