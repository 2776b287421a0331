#include "ped/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "ped/mathutil.hpp"

namespace ped {

double theoretical_lambda(std::size_t n, std::size_t p, double alpha, double c) {
  if (n < 1 || p < 1) throw std::invalid_argument("n, p must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha in (0,1)");
  const double q = inverse_normal_cdf(1.0 - alpha / (2.0 * static_cast<double>(p)));
  return c * std::pow(static_cast<double>(p), 0.25) / std::sqrt(static_cast<double>(n)) * q;
}

double lambda_f(std::size_t n, std::size_t p_star, double alpha, double c) {
  return theoretical_lambda(n, p_star, alpha, c);
}

std::vector<std::size_t> screen(std::span<const double> beta, double C, std::size_t n) {
  std::vector<std::size_t> irrelevant;
  const double nb = norm2(beta);
  const double threshold = C / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (nb == 0.0 || std::fabs(beta[j]) / nb < threshold) irrelevant.push_back(j);
  }
  return irrelevant;
}

namespace {

StandardizedDataset subset_columns(const StandardizedDataset& ds,
                                   const std::vector<std::size_t>& cols) {
  StandardizedDataset sub;
  sub.y = ds.y;
  sub.y_mean = ds.y_mean;
  sub.p_raw = ds.p_raw;
  sub.X = Matrix(ds.n(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    auto src = ds.X.col(cols[k]);
    auto dst = sub.X.col(k);
    std::copy(src.begin(), src.end(), dst.begin());
    sub.col_means.push_back(ds.col_means[cols[k]]);
    sub.col_scales.push_back(ds.col_scales[cols[k]]);
    sub.retained_columns.push_back(ds.retained_columns.empty()
                                       ? cols[k]
                                       : ds.retained_columns[cols[k]]);
    if (!ds.column_names.empty()) sub.column_names.push_back(ds.column_names[cols[k]]);
  }
  return sub;
}

Vector correlation_init(const StandardizedDataset& ds) { return tmatvec(ds.X, ds.y); }

// Complement of the irrelevant set; on a degenerate full screen keeps the
// single largest-|beta_j| column.
std::vector<std::size_t> retained_after_screen(std::span<const double> beta, double C,
                                               std::size_t n, bool& degenerate) {
  const auto irrelevant = screen(beta, C, n);
  std::vector<std::size_t> kept;
  std::size_t ir = 0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (ir < irrelevant.size() && irrelevant[ir] == j) {
      ++ir;
    } else {
      kept.push_back(j);
    }
  }
  if (kept.empty()) {
    degenerate = true;
    std::size_t top = 0;
    for (std::size_t j = 1; j < beta.size(); ++j)
      if (std::fabs(beta[j]) > std::fabs(beta[top])) top = j;
    kept.push_back(top);
  }
  return kept;
}

struct GridPoint {
  double lambda0, C;
  std::vector<std::size_t> retained;  // indices into ds columns
  OptimizerReport refit;
  double k_hat_val = 0.0;
  double aic = 0.0;
  double zero_violation_share = 0.0;  // screened coords with |cos| > lambda0 k/2
  bool degenerate = false;
};

}  // namespace

FitResult ped_fit(const StandardizedDataset& ds, const PedConfig& cfg) {
  cfg.validate();
  const std::size_t n = ds.n();
  const std::size_t p = ds.p();
  if (norm2(ds.y) <= kResidualGuard) throw DataError("degenerate input: zero response");

  std::vector<double> lambdas = cfg.lambda_grid;
  std::vector<double> cs = cfg.C_grid;
  std::sort(lambdas.begin(), lambdas.end());
  std::sort(cs.begin(), cs.end());

  const Vector init = correlation_init(ds);

  // Step 1: one base minimization per lambda0 (independent, run in parallel).
  std::vector<OptimizerReport> base(lambdas.size());
  {
    std::vector<std::future<OptimizerReport>> futs;
    for (std::size_t li = 1; li < lambdas.size(); ++li)
      futs.push_back(std::async(std::launch::async, [&, li] {
        return minimize(ds, lambdas[li], init, cfg.optimizer);
      }));
    base[0] = minimize(ds, lambdas[0], init, cfg.optimizer);
    for (std::size_t li = 1; li < lambdas.size(); ++li) base[li] = futs[li - 1].get();
  }

  // Step 2: screen and refit each (lambda0, C) pair; score for selection.
  std::vector<GridPoint> grid;
  for (std::size_t li = 0; li < lambdas.size(); ++li)
    for (double C : cs) grid.push_back({lambdas[li], C, {}, {}, 0.0, 0.0, false});

  const double y_norm = norm2(ds.y);
  auto eval_point = [&](GridPoint& gp, const OptimizerReport& b) {
    gp.retained = retained_after_screen(b.beta_opt, gp.C, n, gp.degenerate);
    const StandardizedDataset sub = subset_columns(ds, gp.retained);
    gp.refit = minimize(sub, gp.lambda0, correlation_init(sub), cfg.optimizer);
    const double l1 = norm1(gp.refit.beta_opt);
    gp.k_hat_val = (l1 > 0.0) ? k_hat(gp.refit.beta_opt) : 0.0;
    Vector r = sub.y;
    for (std::size_t k = 0; k < sub.p(); ++k)
      kernels::axpy(-gp.refit.beta_opt[k], sub.X.col(k), r);
    const double rss = kernels::sum_sq(r);
    gp.aic = static_cast<double>(n) * std::log(std::max(rss, 1e-300) / static_cast<double>(n)) +
             2.0 * static_cast<double>(gp.retained.size());
    // Screening is only trustworthy when the zeroed coordinates satisfy the
    // zero-coefficient optimality condition |cos(theta_j)| <= lambda k/2
    // against the refit residual; an over-aggressive screen that dropped a
    // real signal leaves a large residual correlation behind. Record the
    // violating share so selection can rule such grid points out.
    const double r_norm = norm2(r);
    if (r_norm > 0.0 && gp.k_hat_val > 0.0) {
      std::size_t violations = 0, zeros = 0, ki = 0;
      const double bound = gp.lambda0 * gp.k_hat_val / 2.0 + 0.02;
      for (std::size_t j = 0; j < p; ++j) {
        if (ki < gp.retained.size() && gp.retained[ki] == j) {
          ++ki;
          continue;
        }
        ++zeros;
        if (std::fabs(kernels::dot(ds.X.col(j), r)) / r_norm > bound) ++violations;
      }
      gp.zero_violation_share =
          zeros ? static_cast<double>(violations) / static_cast<double>(zeros) : 0.0;
    }
    // A lambda0 large enough to collapse the base fit to ~0 leaves a screen
    // built from noise; its tiny refit would still post a high concentration
    // score. Rank such unproductive points last instead of letting them win.
    if (gp.degenerate || std::sqrt(rss) >= y_norm * (1.0 - 1e-6)) {
      gp.k_hat_val = 0.0;
      gp.aic = std::numeric_limits<double>::infinity();
      gp.zero_violation_share = std::numeric_limits<double>::infinity();
    }
  };
  {
    std::vector<std::future<void>> futs;
    for (std::size_t gi = 1; gi < grid.size(); ++gi)
      futs.push_back(std::async(std::launch::async, [&, gi] {
        eval_point(grid[gi], base[gi / cs.size()]);
      }));
    eval_point(grid[0], base[0]);
    for (auto& f : futs) f.get();
  }

  // Selection scans in (lambda0 asc, C asc) order; strict improvement only,
  // so ties resolve to the smallest lambda0 then smallest C. Concentration
  // (k-hat) is maximized over the grid points whose screen respects the
  // zero-coefficient condition; when none qualifies, the least-violating
  // point wins (raw k-hat alone always favors the most aggressive screen,
  // even one that discards real signal).
  constexpr double kFeasibleShare = 0.05;
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (cfg.selection == Selection::maximize_k_hat) {
      const bool b_feas = grid[best].zero_violation_share <= kFeasibleShare;
      const bool g_feas = grid[gi].zero_violation_share <= kFeasibleShare;
      if (b_feas || g_feas) {
        if (g_feas && (!b_feas || grid[gi].k_hat_val > grid[best].k_hat_val)) best = gi;
      } else if (grid[gi].zero_violation_share < grid[best].zero_violation_share) {
        best = gi;
      }
    } else {
      if (grid[gi].aic < grid[best].aic) best = gi;
    }
  }
  GridPoint& sel = grid[best];

  FitResult fit;
  fit.lambda0 = sel.lambda0;
  fit.C = sel.C;
  fit.degenerate_screen = sel.degenerate;
  fit.optimizer_reports.push_back(base[best / cs.size()]);
  fit.optimizer_reports.push_back(sel.refit);
  fit.screening_history.emplace_back(0, sel.retained.size());

  // Step 3 (optional): iterative screening rounds with decreasing lambda.
  std::vector<std::size_t> retained = sel.retained;
  Vector current = sel.refit.beta_opt;
  for (int round = 1; round <= cfg.iterative_rounds; ++round) {
    const double lam = sel.lambda0 * std::pow(2.0, -round);
    StandardizedDataset sub = subset_columns(ds, retained);
    OptimizerReport rep = minimize(sub, lam, current, cfg.optimizer);
    bool degenerate = false;
    const auto kept_local = retained_after_screen(rep.beta_opt, sel.C, n, degenerate);
    fit.degenerate_screen = fit.degenerate_screen || degenerate;
    std::vector<std::size_t> next;
    Vector next_beta;
    for (std::size_t k : kept_local) {
      next.push_back(retained[k]);
      next_beta.push_back(rep.beta_opt[k]);
    }
    retained = std::move(next);
    current = std::move(next_beta);
    fit.optimizer_reports.push_back(std::move(rep));
    fit.screening_history.emplace_back(round, retained.size());
  }

  // Step 4: final refit with small lambda_F, smoothing annealed down.
  const std::size_t p_star = retained.size();
  fit.lambda_F = lambda_f(n, p_star, cfg.alpha, cfg.c);
  StandardizedDataset sub = subset_columns(ds, retained);
  OptimizerReport fin = minimize(sub, fit.lambda_F, current, cfg.optimizer);
  OptimizerConfig tight = cfg.optimizer;
  tight.smoothing_eps = 1e-12;
  fin = minimize(sub, fit.lambda_F, fin.beta_opt, tight);

  fit.beta.assign(p, 0.0);
  for (std::size_t k = 0; k < p_star; ++k) fit.beta[retained[k]] = fin.beta_opt[k];
  fit.active_set = retained;
  fit.k_hat_final = (norm1(fin.beta_opt) > 0.0) ? k_hat(fin.beta_opt) : 0.0;
  fit.optimizer_reports.push_back(std::move(fin));

  const ObjectiveParts parts = ped_objective(ds, fit.beta, fit.lambda_F);
  fit.residual_norm = parts.residual_norm;
  fit.cosines = parts.cosines;
  return fit;
}

double aic_score(const StandardizedDataset& ds, const FitResult& fit) {
  Vector r = ds.y;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (fit.beta[j] != 0.0) kernels::axpy(-fit.beta[j], ds.X.col(j), r);
  const double rss = kernels::sum_sq(r);
  return static_cast<double>(ds.n()) *
             std::log(std::max(rss, 1e-300) / static_cast<double>(ds.n())) +
         2.0 * static_cast<double>(fit.active_set.size());
}

}  // namespace ped
