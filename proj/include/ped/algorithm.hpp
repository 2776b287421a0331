#pragma once

#include <cstdint>

#include "ped/optimizer.hpp"

namespace ped {

enum class Selection { maximize_k_hat, aic };

struct PedConfig {
  std::vector<double> lambda_grid{0.2, 0.5, 1.0};
  std::vector<double> C_grid{0.75, 1.0, 1.25, 1.5};
  double alpha = 0.05;
  double c = 1.1;              // multiplier in the theoretical lambda
  int iterative_rounds = 0;    // extra screening rounds (one-pass by default)
  Selection selection = Selection::maximize_k_hat;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (lambda_grid.empty() || C_grid.empty())
      throw std::invalid_argument("parameter grids must be non-empty");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha in (0,1)");
    if (!(c > 1.0)) throw std::invalid_argument("c must be > 1");
    if (iterative_rounds < 0) throw std::invalid_argument("rounds must be >= 0");
    optimizer.validate();
  }
};

struct FitResult {
  Vector beta;                          // length p, exact zeros off the active set
  std::vector<std::size_t> active_set;  // retained column indices (ascending)
  double lambda0 = 0.0;
  double C = 0.0;
  double lambda_F = 0.0;
  double k_hat_final = 0.0;
  double residual_norm = 0.0;
  Vector cosines;  // against the final residual, length p
  std::vector<std::pair<int, std::size_t>> screening_history;  // (round, kept)
  std::vector<OptimizerReport> optimizer_reports;
  bool degenerate_screen = false;
};

// lambda = (c p^{1/4} / sqrt(n)) * Phi0^{-1}(1 - alpha/(2p))
double theoretical_lambda(std::size_t n, std::size_t p, double alpha, double c);

// theoretical_lambda with p replaced by the retained model size.
double lambda_f(std::size_t n, std::size_t p_star, double alpha, double c);

// Indices with |beta_j| / ||beta|| < C / sqrt(n). Returns all indices when
// beta == 0 (degenerate, caller decides).
std::vector<std::size_t> screen(std::span<const double> beta, double C, std::size_t n);

FitResult ped_fit(const StandardizedDataset& ds, const PedConfig& cfg);

// Gaussian-likelihood AIC: n ln(||Y - X beta||^2 / n) + 2 |active_set|.
double aic_score(const StandardizedDataset& ds, const FitResult& fit);

}  // namespace ped
