#pragma once

#include "ped/objective.hpp"

namespace ped {

struct OptimizerConfig {
  int memory = 10;          // L-BFGS history pairs
  int max_iters = 2000;
  double grad_tol = 1e-7;   // inf-norm of the smoothed gradient
  double obj_tol = 1e-12;   // relative objective decrease for stall detection
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double smoothing_eps = 1e-8;

  void validate() const {
    if (memory < 1) throw std::invalid_argument("memory must be >= 1");
    if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
      throw std::invalid_argument("need 0 < c1 < c2 < 1");
  }
};

struct OptimizerReport {
  Vector beta_opt;
  int iterations = 0;
  double final_grad_norm = 0.0;  // inf-norm
  bool converged = false;
  std::vector<double> objective_trace;  // value at each accepted iterate
};

OptimizerReport minimize(const StandardizedDataset& ds, double lambda,
                         Vector init, const OptimizerConfig& cfg);

}  // namespace ped
