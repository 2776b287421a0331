#include "ped/simulation.hpp"

#include <cmath>
#include <thread>

namespace ped {

Vector default_beta_star(std::size_t p) {
  if (p < 112) throw std::invalid_argument("default signal pattern needs p >= 112");
  Vector b(p, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    b[k] = 0.3;
    b[54 + k] = 0.3;
    b[108 + k] = 0.3;
  }
  return b;
}

void SimulationSpec::validate() const {
  if (n < 2 || p < 1) throw std::invalid_argument("need n >= 2 and p >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho in [0,1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (replicates < 1) throw std::invalid_argument("need at least 1 replicate");
  if (!beta_star.empty() && beta_star.size() != p)
    throw std::invalid_argument("beta_star length must equal p");
}

Vector SimulationSpec::resolved_beta_star() const {
  return beta_star.empty() ? default_beta_star(p) : beta_star;
}

Matrix generate_design(const SimulationSpec& spec, std::uint64_t stream) {
  NormalSampler rng(spec.seed, stream);
  Matrix X(spec.n, spec.p);
  const double carry = spec.rho;
  const double fresh = std::sqrt(1.0 - spec.rho * spec.rho);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double prev = rng.next();
    X(i, 0) = prev;
    for (std::size_t j = 1; j < spec.p; ++j) {
      prev = carry * prev + fresh * rng.next();
      X(i, j) = prev;
    }
  }
  return X;
}

RawDataset generate_replicate(const SimulationSpec& spec, std::size_t replicate) {
  spec.validate();
  RawDataset raw;
  raw.X = generate_design(spec, replicate);
  const Vector bstar = spec.resolved_beta_star();
  raw.y = matvec(raw.X, bstar);
  // Noise stream is offset so it never overlaps a design stream.
  NormalSampler noise(spec.seed, 0x8000000000000000ULL + replicate);
  for (double& v : raw.y) v += spec.sigma * noise.next();
  return raw;
}

MetricsReport run_study(const SimulationSpec& spec, const PedConfig& cfg) {
  spec.validate();
  cfg.validate();
  const Vector bstar = spec.resolved_beta_star();

  MetricsReport report;
  report.per_replicate.resize(spec.replicates);

  auto run_one = [&](std::size_t rep) {
    ReplicateMetrics m;
    m.index = rep;
    try {
      const RawDataset raw = generate_replicate(spec, rep);
      const StandardizedDataset ds = standardize(raw);
      const FitResult fit = ped_fit(ds, cfg);
      const auto [beta_raw, intercept] = destandardize(fit.beta, ds);
      (void)intercept;
      double err2 = 0.0;
      for (std::size_t j = 0; j < spec.p; ++j) {
        const double d = beta_raw[j] - bstar[j];
        err2 += d * d;
        if (beta_raw[j] != 0.0) {
          m.ms += 1.0;
          if (bstar[j] != 0.0) m.tp += 1.0;
        }
      }
      m.err_l2 = std::sqrt(err2);
      m.lambda0 = fit.lambda0;
      m.C = fit.C;
    } catch (const std::exception& e) {
      m.failed = true;
      m.error = e.what();
    }
    report.per_replicate[rep] = std::move(m);
  };

  std::size_t workers = cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads)
                                        : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, spec.replicates));
  if (workers == 1) {
    for (std::size_t rep = 0; rep < spec.replicates; ++rep) run_one(rep);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t rep = w; rep < spec.replicates; rep += workers) run_one(rep);
      });
    for (auto& t : pool) t.join();
  }

  double tp = 0.0, ms = 0.0, err2 = 0.0;
  std::size_t ok = 0;
  for (const auto& m : report.per_replicate) {
    if (m.failed) {
      ++report.failures;
      continue;
    }
    ++ok;
    tp += m.tp;
    ms += m.ms;
    err2 += m.err_l2 * m.err_l2;
  }
  if (report.failures * 10 > spec.replicates)
    throw StudyError("more than 10% of replicates failed");
  if (ok == 0) throw StudyError("no successful replicates");
  report.TP = tp / static_cast<double>(ok);
  report.MS = ms / static_cast<double>(ok);
  report.RMSE = std::sqrt(err2 / static_cast<double>(ok));
  report.RMSE_per_coord = report.RMSE / std::sqrt(static_cast<double>(spec.p));
  return report;
}

}  // namespace ped
