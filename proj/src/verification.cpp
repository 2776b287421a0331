#include "ped/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ped/rng.hpp"
#include "ped/simulation.hpp"

namespace ped {

namespace {

OptimizerConfig tight_config() {
  OptimizerConfig cfg;
  cfg.max_iters = 5000;
  cfg.grad_tol = 1e-9;
  cfg.obj_tol = 1e-14;
  return cfg;
}

double objective_value(const StandardizedDataset& ds, std::span<const double> beta,
                       double lambda) {
  Vector r = ds.y;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (beta[j] != 0.0) kernels::axpy(-beta[j], ds.X.col(j), r);
  return norm2(r) + lambda * geometric_mean_norm(beta);
}

}  // namespace

OptimizerReport tight_minimize(const StandardizedDataset& ds, double lambda,
                               const Vector& init) {
  OptimizerConfig cfg = tight_config();
  OptimizerReport rep = minimize(ds, lambda, init, cfg);
  cfg.smoothing_eps = 1e-12;
  return minimize(ds, lambda, rep.beta_opt, cfg);
}

OptimizerReport tight_minimize(const StandardizedDataset& ds, double lambda) {
  return tight_minimize(ds, lambda, tmatvec(ds.X, ds.y));
}

bool check_identical_columns(const StandardizedDataset& ds, double lambda,
                             std::size_t i, std::size_t j, double tol) {
  const OptimizerReport rep = tight_minimize(ds, lambda);
  const double nb = norm2(rep.beta_opt);
  return std::fabs(rep.beta_opt[i] - rep.beta_opt[j]) <= tol * std::max(nb, 1.0);
}

GroupingCheckReport check_grouping_bound(
    const StandardizedDataset& ds, double lambda,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double slack) {
  GroupingCheckReport report;
  report.lambda = lambda;
  const OptimizerReport rep = tight_minimize(ds, lambda);
  const double nb = norm2(rep.beta_opt);
  for (auto [i, j] : pairs) {
    GroupingPair gp;
    gp.i = i;
    gp.j = j;
    gp.rho = kernels::dot(ds.X.col(i), ds.X.col(j));
    gp.bound = (2.0 / lambda) * std::sqrt(2.0 * std::max(0.0, 1.0 - gp.rho));
    gp.stated_bound = 2.0 * std::sqrt(std::max(0.0, 1.0 - gp.rho)) / lambda;
    if (nb > 0.0) {
      gp.d_lambda = std::fabs(rep.beta_opt[i] - rep.beta_opt[j]) / nb;
      gp.pass = gp.d_lambda <= gp.bound + slack;
      gp.stated_holds = gp.d_lambda <= gp.stated_bound + slack;
    }
    report.pairs.push_back(gp);
  }
  return report;
}

Vector ols_solve(const StandardizedDataset& ds) {
  const std::size_t p = ds.p();
  // Normal equations with a Cholesky factorization.
  std::vector<double> G(p * p);
  Vector b(p);
  for (std::size_t i = 0; i < p; ++i) {
    b[i] = kernels::dot(ds.X.col(i), ds.y);
    for (std::size_t j = i; j < p; ++j)
      G[i * p + j] = G[j * p + i] = kernels::dot(ds.X.col(i), ds.X.col(j));
  }
  std::vector<double> L(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = G[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * p + k] * L[j * p + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("design not full rank");
        L[i * p + i] = std::sqrt(s);
      } else {
        L[i * p + j] = s / L[j * p + j];
      }
    }
  }
  Vector z(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * p + k] * z[k];
    z[i] = s / L[i * p + i];
  }
  Vector beta(p);
  for (std::size_t i = p; i-- > 0;) {
    double s = z[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= L[k * p + i] * beta[k];
    beta[i] = s / L[i * p + i];
  }
  return beta;
}

bool check_lambda_convergence(const StandardizedDataset& ds,
                              const std::vector<double>& lambdas, double max_gap) {
  Vector r_ols = ds.y;
  const Vector beta_ols = ols_solve(ds);
  for (std::size_t j = 0; j < ds.p(); ++j)
    kernels::axpy(-beta_ols[j], ds.X.col(j), r_ols);
  const double ols_norm = norm2(r_ols);

  double prev = std::numeric_limits<double>::infinity();
  double last = prev;
  Vector warm = tmatvec(ds.X, ds.y);
  for (double lam : lambdas) {
    const OptimizerReport rep = tight_minimize(ds, lam, warm);
    warm = rep.beta_opt;
    Vector r = ds.y;
    for (std::size_t j = 0; j < ds.p(); ++j)
      kernels::axpy(-rep.beta_opt[j], ds.X.col(j), r);
    last = norm2(r);
    if (last > prev + 1e-9) return false;
    prev = last;
  }
  return (last - ols_norm) <= max_gap * ols_norm;
}

BruteForceResult brute_force_minimize(const StandardizedDataset& ds, double lambda,
                                      double lo, double hi, std::size_t grid_points) {
  const std::size_t p = ds.p();
  if (p > 3) throw std::invalid_argument("brute force oracle limited to p <= 3");
  if (grid_points < 2) throw std::invalid_argument("need at least 2 grid points");
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  BruteForceResult best;
  best.beta.assign(p, 0.0);
  best.objective = std::numeric_limits<double>::infinity();
  Vector beta(p, 0.0);
  std::vector<std::size_t> idx(p, 0);
  for (;;) {
    for (std::size_t d = 0; d < p; ++d) beta[d] = lo + step * static_cast<double>(idx[d]);
    const double val = objective_value(ds, beta, lambda);
    if (val < best.objective) {
      best.objective = val;
      best.beta = beta;
    }
    std::size_t d = 0;
    while (d < p && ++idx[d] == grid_points) idx[d++] = 0;
    if (d == p) break;
  }
  return best;
}

KktReport check_kkt(const StandardizedDataset& ds, const FitResult& fit) {
  KktReport rep;
  rep.lambda = fit.lambda_F;
  const double k = fit.k_hat_final;
  Vector active;
  for (std::size_t j : fit.active_set) active.push_back(fit.beta[j]);
  const double nb = norm2(active);
  if (nb == 0.0 || k == 0.0) return rep;

  std::size_t ai = 0;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double cosj = fit.cosines[j];
    if (ai < fit.active_set.size() && fit.active_set[ai] == j) {
      ++ai;
      const double b = fit.beta[j];
      const double resid =
          b / nb - k * (2.0 * cosj / rep.lambda - k * (b > 0.0 ? 1.0 : -1.0));
      rep.max_nonzero_residual = std::max(rep.max_nonzero_residual, std::fabs(resid));
    } else {
      ++rep.zero_count;
      const double viol = std::fabs(cosj) - 0.5 * rep.lambda * k;
      rep.max_zero_violation = std::max(rep.max_zero_violation, std::max(0.0, viol));
      if (viol > 2e-2) ++rep.zero_violations;
    }
  }
  return rep;
}

KktReport check_kkt(const StandardizedDataset& ds, std::span<const double> beta,
                    double lambda) {
  KktReport rep;
  rep.lambda = lambda;
  const double nb_full = norm2(beta);
  if (nb_full == 0.0) return rep;
  Vector active;
  std::vector<bool> zero(ds.p());
  for (std::size_t j = 0; j < ds.p(); ++j) {
    zero[j] = std::fabs(beta[j]) < 1e-4 * nb_full;
    if (!zero[j]) active.push_back(beta[j]);
  }
  if (active.empty()) return rep;
  const double k = k_hat(active);
  const double nb = norm2(active);

  Vector r = ds.y;
  for (std::size_t j = 0; j < ds.p(); ++j)
    kernels::axpy(-beta[j], ds.X.col(j), r);
  const double rn = norm2(r);
  if (rn == 0.0) return rep;

  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double cosj = kernels::dot(ds.X.col(j), r) / rn;
    if (!zero[j]) {
      const double b = beta[j];
      const double resid =
          b / nb - k * (2.0 * cosj / lambda - k * (b > 0.0 ? 1.0 : -1.0));
      rep.max_nonzero_residual = std::max(rep.max_nonzero_residual, std::fabs(resid));
    } else {
      ++rep.zero_count;
      const double viol = std::fabs(cosj) - 0.5 * lambda * k;
      rep.max_zero_violation = std::max(rep.max_zero_violation, std::max(0.0, viol));
      if (viol > 2e-2) ++rep.zero_violations;
    }
  }
  return rep;
}

StandardizedDataset make_duplicate_pair_dataset(std::size_t n, std::size_t p,
                                                std::uint64_t seed) {
  NormalSampler rng(seed);
  RawDataset raw;
  raw.X = Matrix(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) raw.X(i, j) = rng.next();
  for (std::size_t i = 0; i < n; ++i) raw.X(i, 1) = raw.X(i, 0);  // exact duplicate
  raw.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double signal = 3.0 * raw.X(i, 0);
    if (p > 2) signal += raw.X(i, 2);
    raw.y[i] = signal + 0.3 * rng.next();
  }
  return standardize(raw);
}

StandardizedDataset make_correlated_pair_dataset(std::size_t n, double rho,
                                                 std::uint64_t seed) {
  NormalSampler rng(seed);
  const std::size_t p = 4;
  RawDataset raw;
  raw.X = Matrix(n, p);
  const double fresh = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double z0 = rng.next();
    raw.X(i, 0) = z0;
    raw.X(i, 1) = rho * z0 + fresh * rng.next();
    raw.X(i, 2) = rng.next();
    raw.X(i, 3) = rng.next();
  }
  raw.y.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    raw.y[i] = 2.0 * raw.X(i, 0) + 2.0 * raw.X(i, 1) + raw.X(i, 2) + 0.5 * rng.next();
  return standardize(raw);
}

StandardizedDataset make_full_rank_dataset(std::size_t n, std::size_t p,
                                           std::uint64_t seed) {
  NormalSampler rng(seed);
  RawDataset raw;
  raw.X = Matrix(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) raw.X(i, j) = rng.next();
  raw.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      s += (1.0 + 0.5 * static_cast<double>(j)) * raw.X(i, j);
    raw.y[i] = s + rng.next();
  }
  return standardize(raw);
}

namespace {

bool wanted(const VerifyOptions& opts, const std::string& name) {
  if (opts.only.empty()) return true;
  return std::find(opts.only.begin(), opts.only.end(), name) != opts.only.end();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckOutcome> run_verification_suite(const VerifyOptions& opts) {
  std::vector<CheckOutcome> out;
  const double ts = opts.tol_scale;

  if (wanted(opts, "norms")) {
    NormalSampler rng(opts.seed, 1);
    bool ok = true;
    std::string detail = "homogeneity, triangle, sandwich on 2000 random vectors";
    for (int t = 0; t < 2000 && ok; ++t) {
      const std::size_t p = 1 + static_cast<std::size_t>(std::fabs(rng.next()) * 15.0);
      Vector a(p), b(p);
      for (std::size_t j = 0; j < p; ++j) {
        a[j] = rng.next();
        b[j] = rng.next();
      }
      const double c = 3.0 * rng.next();
      Vector ca(p), apb(p);
      for (std::size_t j = 0; j < p; ++j) {
        ca[j] = c * a[j];
        apb[j] = a[j] + b[j];
      }
      const double na = geometric_mean_norm(a);
      ok = ok && std::fabs(geometric_mean_norm(ca) - std::fabs(c) * na) <=
                     1e-12 * ts * std::max(1.0, std::fabs(c) * na);
      ok = ok && geometric_mean_norm(apb) <= na + geometric_mean_norm(b) + 1e-12 * ts;
      ok = ok && norm2(a) <= na + 1e-12 && na <= norm1(a) + 1e-12;
      if (!ok) detail = "failed at trial " + std::to_string(t);
    }
    out.push_back({"norms", ok, detail});
  }

  if (wanted(opts, "identical-columns")) {
    bool ok = true;
    std::string detail;
    int done = 0;
    for (int inst = 0; inst < 5 && ok; ++inst) {
      const auto ds = make_duplicate_pair_dataset(40, 6, opts.seed + 100 + inst);
      for (double lam : {0.2, 0.5, 1.0}) {
        if (!check_identical_columns(ds, lam, 0, 1, 1e-6 * ts)) {
          ok = false;
          detail = "instance " + std::to_string(inst) + ", lambda " + fmt(lam);
          break;
        }
        ++done;
      }
    }
    if (ok) detail = std::to_string(done) + " instance/lambda combinations";
    out.push_back({"identical-columns", ok, detail});
  }

  if (wanted(opts, "grouping-bound")) {
    NormalSampler rng(opts.seed, 2);
    bool ok = true;
    bool stated_all = true;
    int done = 0;
    std::string detail;
    for (int inst = 0; inst < 20 && ok; ++inst) {
      const double rho = 0.9 + 0.099 * std::fabs(std::fmod(rng.next(), 1.0));
      const auto ds = make_correlated_pair_dataset(60, rho, opts.seed + 200 + inst);
      const auto rep = check_grouping_bound(ds, 0.5, {{0, 1}}, 1e-6 * ts);
      if (!rep.all_pass()) {
        ok = false;
        detail = "violated at instance " + std::to_string(inst) + ", D=" +
                 fmt(rep.pairs[0].d_lambda) + " bound=" + fmt(rep.pairs[0].bound);
      }
      stated_all = stated_all && rep.pairs[0].stated_holds;
      ++done;
    }
    if (ok)
      detail = std::to_string(done) + " instances; stated (stronger) bound " +
               (stated_all ? "also held" : "violated somewhere");
    out.push_back({"grouping-bound", ok, detail});
  }

  if (wanted(opts, "lambda-convergence")) {
    const auto ds = make_full_rank_dataset(50, 5, opts.seed + 300);
    const bool ok =
        check_lambda_convergence(ds, {1.0, 0.1, 0.01, 0.001, 1e-4}, 0.01 * ts);
    out.push_back({"lambda-convergence", ok,
                   "residual norm monotone to within 1% of the OLS residual"});
  }

  if (wanted(opts, "oracle")) {
    NormalSampler rng(opts.seed, 3);
    bool ok = true;
    std::string detail;
    for (int inst = 0; inst < 20 && ok; ++inst) {
      const std::size_t p = 1 + (inst % 2);
      const auto ds = make_full_rank_dataset(12, p, opts.seed + 400 + inst);
      const double lam = 0.1 + std::fabs(std::fmod(rng.next(), 1.0));
      const auto oracle = brute_force_minimize(ds, lam, -3.0, 3.0, 401);
      const auto rep = tight_minimize(ds, lam);
      const double solver_obj = objective_value(ds, rep.beta_opt, lam);
      if (solver_obj > oracle.objective + 1e-6 * ts) {
        ok = false;
        detail = "solver " + fmt(solver_obj) + " > oracle " + fmt(oracle.objective);
      }
    }
    if (ok) detail = "20 instances, solver never above the grid oracle";
    out.push_back({"oracle", ok, detail});
  }

  if (wanted(opts, "kkt")) {
    bool ok = true;
    std::string detail;
    double worst_nz = 0.0, worst_zero = 0.0;
    for (int inst = 0; inst < 10 && ok; ++inst) {
      SimulationSpec spec;
      spec.n = 60;
      spec.p = 120;
      spec.rho = 0.5;
      spec.sigma = 1.0;
      spec.seed = opts.seed + 500 + inst;
      spec.replicates = 1;
      spec.beta_star = Vector(spec.p, 0.0);
      for (int k = 0; k < 6; ++k) spec.beta_star[k * 10] = 1.0;
      const auto raw = generate_replicate(spec, 0);
      const auto ds = standardize(raw);
      const auto rep = tight_minimize(ds, 0.5);
      const auto kkt = check_kkt(ds, rep.beta_opt, 0.5);
      worst_nz = std::max(worst_nz, kkt.max_nonzero_residual);
      worst_zero = std::max(worst_zero, kkt.max_zero_violation);
      const bool nz_ok = kkt.max_nonzero_residual <= 1e-3 * ts;
      const bool zero_ok =
          kkt.zero_count == 0 ||
          static_cast<double>(kkt.zero_violations) <=
              0.05 * static_cast<double>(kkt.zero_count);
      if (!(nz_ok && zero_ok)) {
        ok = false;
        detail = "instance " + std::to_string(inst) + ": nonzero resid " +
                 fmt(kkt.max_nonzero_residual) + ", zero viol " +
                 fmt(kkt.max_zero_violation);
      }
    }
    if (ok)
      detail = "max stationarity resid " + fmt(worst_nz) + ", max zero-cos excess " +
               fmt(worst_zero);
    out.push_back({"kkt", ok, detail});
  }

  if (opts.include_rate_check && wanted(opts, "oracle-rate")) {
    PedConfig cfg;
    cfg.threads = opts.threads;
    std::vector<double> medians;
    bool ok = true;
    std::string detail;
    try {
      for (std::size_t n : {100UL, 200UL, 400UL, 800UL}) {
        SimulationSpec spec;
        spec.n = n;
        spec.p = 2 * n;
        spec.rho = 0.5;
        spec.replicates = 20;
        spec.seed = opts.seed + 600;
        const auto report = run_study(spec, cfg);
        Vector errs;
        for (const auto& m : report.per_replicate)
          if (!m.failed) errs.push_back(m.err_l2);
        std::sort(errs.begin(), errs.end());
        medians.push_back(errs[errs.size() / 2]);
      }
      ok = medians.back() <= 0.6 * ts * medians.front();
      detail = "median error n=100: " + fmt(medians.front()) +
               ", n=800: " + fmt(medians.back());
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    out.push_back({"oracle-rate", ok, detail});
  }

  return out;
}

}  // namespace ped
