#pragma once

#include "ped/algorithm.hpp"

namespace ped {

struct GroupingPair {
  std::size_t i = 0, j = 0;
  double d_lambda = 0.0;       // |beta_i - beta_j| / ||beta||
  double rho = 0.0;            // x_i^T x_j on the standardized design
  double bound = 0.0;          // (2/lambda) sqrt(2 (1 - rho)), the proof form
  double stated_bound = 0.0;   // 2 sqrt(1 - rho) / lambda, the stated form
  bool pass = false;
  bool stated_holds = false;
};

struct GroupingCheckReport {
  double lambda = 0.0;
  std::vector<GroupingPair> pairs;
  bool all_pass() const {
    for (const auto& p : pairs)
      if (!p.pass) return false;
    return true;
  }
};

struct KktReport {
  double lambda = 0.0;
  double max_nonzero_residual = 0.0;  // stationarity identity on active coords
  double max_zero_violation = 0.0;    // excess of |cos| over lambda k/2 on zeros
  std::size_t zero_violations = 0;    // zero coords above the slack
  std::size_t zero_count = 0;
};

// Minimizes to tight tolerance (grad_tol 1e-9, smoothing annealed to 1e-12).
OptimizerReport tight_minimize(const StandardizedDataset& ds, double lambda,
                               const Vector& init);
OptimizerReport tight_minimize(const StandardizedDataset& ds, double lambda);

// Columns i and j of ds must be bit-identical. True when the solved
// coefficients agree within 1e-6 * max(||beta||, 1).
bool check_identical_columns(const StandardizedDataset& ds, double lambda,
                             std::size_t i, std::size_t j, double tol = 1e-6);

GroupingCheckReport check_grouping_bound(
    const StandardizedDataset& ds, double lambda,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    double slack = 1e-6);

// Residual norms along a decreasing lambda sequence must approach the OLS
// residual monotonically; final relative gap <= max_gap.
bool check_lambda_convergence(const StandardizedDataset& ds,
                              const std::vector<double>& lambdas,
                              double max_gap = 0.01);

struct BruteForceResult {
  Vector beta;
  double objective = 0.0;
};

// Exhaustive grid minimum of the exact objective over [lo, hi]^p; p <= 3.
BruteForceResult brute_force_minimize(const StandardizedDataset& ds, double lambda,
                                      double lo, double hi, std::size_t grid_points);

// Stationarity diagnostics for a completed fit, against the final residual.
KktReport check_kkt(const StandardizedDataset& ds, const FitResult& fit);

// Same diagnostics for a plain minimizer of the objective at the given
// lambda. Coordinates below 1e-4 * ||beta|| count as zero: the smoothed
// solve leaves inactive coordinates at ~sqrt(smoothing_eps) rather than
// exactly zero, well below that cutoff for the tight configuration.
KktReport check_kkt(const StandardizedDataset& ds, std::span<const double> beta,
                    double lambda);

// OLS coefficients via the normal equations (Cholesky); oracle path,
// independent of the quasi-Newton solver.
Vector ols_solve(const StandardizedDataset& ds);

// Constructed instances used by the checks and the test suites.
StandardizedDataset make_duplicate_pair_dataset(std::size_t n, std::size_t p,
                                                std::uint64_t seed);
StandardizedDataset make_correlated_pair_dataset(std::size_t n, double rho,
                                                 std::uint64_t seed);
StandardizedDataset make_full_rank_dataset(std::size_t n, std::size_t p,
                                           std::uint64_t seed);

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> only;  // empty = all checks
  double tol_scale = 1.0;         // < 1 tightens every tolerance
  std::uint64_t seed = 12345;
  int threads = 0;
  bool include_rate_check = true;  // the slow 1/sqrt(n) scaling sweep
};

std::vector<CheckOutcome> run_verification_suite(const VerifyOptions& opts);

}  // namespace ped
