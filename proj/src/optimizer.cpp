#include "ped/optimizer.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace ped {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCurvatureTol = 1e-12;  // skip pairs with s^T y below this

struct Eval {
  double f = kInf;
  Vector grad;
  double dphi = kInf;  // grad^T direction
};

class Problem {
 public:
  Problem(const StandardizedDataset& ds, double lambda, double eps)
      : ds_(ds), lambda_(lambda), eps_(eps) {}

  // Evaluates at x + alpha*d; returns f = +inf if the residual guard trips.
  Eval at(const Vector& x, const Vector& d, double alpha, bool& guard_tripped) const {
    Vector trial(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
    Eval e;
    try {
      e.f = smoothed_value_gradient(ds_, trial, lambda_, eps_, e.grad);
      e.dphi = kernels::dot(e.grad, d);
    } catch (const InterpolationRegimeError&) {
      guard_tripped = true;
    }
    return e;
  }

 private:
  const StandardizedDataset& ds_;
  double lambda_;
  double eps_;
};

// Cubic minimizer of phi on [a, b] from values/derivatives at the ends,
// safeguarded to the interior; falls back to bisection.
double interpolate(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double margin = 0.1 * (hi - lo);
    if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
  }
  return 0.5 * (a + b);
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  Eval eval;
};

// Strong Wolfe search (bracket + zoom). Values of +inf (residual guard)
// are treated as "too far" and shrink the bracket.
LineSearchResult strong_wolfe(const Problem& prob, const Vector& x, const Vector& d,
                              double f0, double dphi0, const OptimizerConfig& cfg) {
  LineSearchResult best;  // best sufficient-decrease point seen, as fallback

  auto note_best = [&](double alpha, const Eval& e) {
    if (e.f < f0 + cfg.wolfe_c1 * alpha * dphi0 && (!best.ok || e.f < best.eval.f)) {
      best.ok = true;
      best.alpha = alpha;
      best.eval = e;
    }
  };

  auto zoom = [&](double lo, double flo, double dlo, double hi, double fhi,
                  double dhi) -> LineSearchResult {
    for (int k = 0; k < 40; ++k) {
      double alpha = std::isfinite(fhi) ? interpolate(lo, flo, dlo, hi, fhi, dhi)
                                        : 0.5 * (lo + hi);
      bool tripped = false;
      Eval e = prob.at(x, d, alpha, tripped);
      if (!std::isfinite(e.f) || e.f > f0 + cfg.wolfe_c1 * alpha * dphi0 || e.f >= flo) {
        hi = alpha;
        fhi = e.f;
        dhi = e.dphi;
      } else {
        note_best(alpha, e);
        if (std::fabs(e.dphi) <= -cfg.wolfe_c2 * dphi0) return {true, alpha, std::move(e)};
        if (e.dphi * (hi - lo) >= 0.0) {
          hi = lo;
          fhi = flo;
          dhi = dlo;
        }
        lo = alpha;
        flo = e.f;
        dlo = e.dphi;
      }
      if (std::fabs(hi - lo) < 1e-16 * std::max(1.0, std::fabs(lo))) break;
    }
    return best;
  };

  double alpha_prev = 0.0, f_prev = f0, dphi_prev = dphi0;
  double alpha = 1.0;
  for (int i = 0; i < 20; ++i) {
    bool tripped = false;
    Eval e = prob.at(x, d, alpha, tripped);
    if (!std::isfinite(e.f) || e.f > f0 + cfg.wolfe_c1 * alpha * dphi0 ||
        (i > 0 && e.f >= f_prev)) {
      return zoom(alpha_prev, f_prev, dphi_prev, alpha, e.f, e.dphi);
    }
    note_best(alpha, e);
    if (std::fabs(e.dphi) <= -cfg.wolfe_c2 * dphi0) return {true, alpha, std::move(e)};
    if (e.dphi >= 0.0) return zoom(alpha, e.f, e.dphi, alpha_prev, f_prev, dphi_prev);
    alpha_prev = alpha;
    f_prev = e.f;
    dphi_prev = e.dphi;
    alpha *= 2.0;
  }
  return best;
}

}  // namespace

OptimizerReport minimize(const StandardizedDataset& ds, double lambda, Vector init,
                         const OptimizerConfig& cfg) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (init.size() != ds.p())
    throw DataError("init length does not match design columns");
  for (double v : init)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite init");

  OptimizerReport rep;
  Vector x = std::move(init);
  Vector grad;

  // Continuation on the smoothing width: the target eps makes near-zero
  // coordinates extremely stiff (penalty curvature ~ lambda/eps), so start
  // wide and anneal down, warm-starting each stage.
  std::vector<double> eps_stages;
  for (double e = 1e-3; e > cfg.smoothing_eps * 100.0; e *= 1e-2)
    eps_stages.push_back(e);
  eps_stages.push_back(cfg.smoothing_eps);

  for (double eps : eps_stages) {
    const Problem prob(ds, lambda, eps);
    double f = smoothed_value_gradient(ds, x, lambda, eps, grad);
    rep.objective_trace.push_back(f);
    rep.converged = false;

    std::deque<Vector> s_hist, y_hist;
    std::deque<double> rho_hist;
    int stall = 0;

    for (int iter = rep.iterations; iter < cfg.max_iters; ++iter) {
    rep.final_grad_norm = norm_inf(grad);
    if (rep.final_grad_norm <= cfg.grad_tol) {
      rep.converged = true;
      break;
    }
    rep.iterations = iter + 1;

    // Two-loop recursion.
    Vector d = grad;
    {
      const std::size_t m = s_hist.size();
      std::vector<double> alpha_coef(m);
      for (std::size_t k = m; k-- > 0;) {
        alpha_coef[k] = rho_hist[k] * kernels::dot(s_hist[k], d);
        kernels::axpy(-alpha_coef[k], y_hist[k], d);
      }
      if (m > 0) {
        const double yy = kernels::sum_sq(y_hist.back());
        const double gamma = (yy > 0.0) ? 1.0 / (rho_hist.back() * yy) : 1.0;
        kernels::scal(gamma, d);
      }
      for (std::size_t k = 0; k < m; ++k) {
        const double beta_coef = rho_hist[k] * kernels::dot(y_hist[k], d);
        kernels::axpy(alpha_coef[k] - beta_coef, s_hist[k], d);
      }
    }
    kernels::scal(-1.0, d);

    double dphi0 = kernels::dot(grad, d);
    if (dphi0 >= 0.0) {
      // Not a descent direction; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = grad;
      kernels::scal(-1.0, d);
      dphi0 = kernels::dot(grad, d);
    }

    LineSearchResult ls = strong_wolfe(prob, x, d, f, dphi0, cfg);
    if (!ls.ok) {
      // The objective is convex: no acceptable step along a descent
      // direction means the iterate is stationary to line-search precision.
      rep.converged = true;
      break;
    }

    Vector s(x.size()), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = ls.alpha * d[i];
      y[i] = ls.eval.grad[i] - grad[i];
    }
    const double sy = kernels::dot(s, y);
    if (sy > kCurvatureTol) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > cfg.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double f_new = ls.eval.f;
    const double decrease = f - f_new;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += ls.alpha * d[i];
    grad = std::move(ls.eval.grad);
    f = f_new;
    rep.objective_trace.push_back(f);

    if (decrease <= cfg.obj_tol * std::max(1.0, std::fabs(f))) {
      if (++stall >= 5) {
        rep.converged = true;
        rep.final_grad_norm = norm_inf(grad);
        break;
      }
    } else {
      stall = 0;
    }
    }
  }

  rep.final_grad_norm = norm_inf(grad);
  if (rep.final_grad_norm <= cfg.grad_tol) rep.converged = true;
  rep.beta_opt = std::move(x);
  return rep;
}

}  // namespace ped
