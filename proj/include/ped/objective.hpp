#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "ped/data.hpp"

namespace ped {

// Residual norm fell below the guard: the Euclidean term's gradient is
// undefined in the interpolation regime and the fit cannot proceed.
struct InterpolationRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kResidualGuard = 1e-10;

struct ObjectiveParts {
  double residual_norm = 0.0;
  double penalty_norm = 0.0;  // sqrt(l1 * l2) of beta
  double objective = 0.0;
  Vector cosines;             // x_j^T r / ||r||, undefined when flag is false
  bool cosines_defined = false;
  std::optional<double> k_hat;  // sqrt(l2/l1), absent when beta == 0
};

// sqrt(||beta||_1 * ||beta||_2); zero iff beta == 0.
double geometric_mean_norm(std::span<const double> beta);

// sqrt(||beta|| / ||beta||_1), in [p^{-1/4}, 1]. Throws on beta == 0.
double k_hat(std::span<const double> beta);

ObjectiveParts ped_objective(const StandardizedDataset& ds,
                             std::span<const double> beta, double lambda);

// Smoothed objective used by the optimizer: |b_j| -> sqrt(b_j^2 + eps^2)
// and ||b|| -> sqrt(||b||^2 + eps^2). Throws InterpolationRegimeError
// when the residual norm falls below the guard.
double smoothed_objective(const StandardizedDataset& ds,
                          std::span<const double> beta, double lambda,
                          double smoothing_eps);

// Gradient of the smoothed objective.
Vector ped_gradient(const StandardizedDataset& ds, std::span<const double> beta,
                    double lambda, double smoothing_eps);

// Fused value + gradient of the smoothed objective (single residual pass).
double smoothed_value_gradient(const StandardizedDataset& ds,
                               std::span<const double> beta, double lambda,
                               double smoothing_eps, Vector& grad);

}  // namespace ped
