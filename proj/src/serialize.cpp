#include "ped/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace ped {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string serialize_fit_result(const FitResult& fit, const StandardizedDataset& ds) {
  const auto [beta_raw, intercept] = destandardize(fit.beta, ds);
  std::ostringstream os;
  os << "lambda0 = " << num(fit.lambda0) << "\n";
  os << "C = " << num(fit.C) << "\n";
  os << "lambda_F = " << num(fit.lambda_F) << "\n";
  os << "k_hat = " << num(fit.k_hat_final) << "\n";
  os << "residual_norm = " << num(fit.residual_norm) << "\n";
  os << "intercept = " << num(intercept) << "\n";
  os << "active_set_size = " << fit.active_set.size() << "\n";
  os << "degenerate_screen = " << (fit.degenerate_screen ? "true" : "false") << "\n";

  os << "active_set = [";
  for (std::size_t k = 0; k < fit.active_set.size(); ++k) {
    const std::size_t orig = ds.retained_columns[fit.active_set[k]];
    if (k) os << ", ";
    if (!ds.column_names.empty())
      os << ds.column_names[fit.active_set[k]];
    else
      os << orig;
  }
  os << "]\n";

  os << "beta_raw = [";
  for (std::size_t j = 0; j < beta_raw.size(); ++j) {
    if (j) os << ", ";
    os << num(beta_raw[j]);
  }
  os << "]\n";

  os << "screening_history = [";
  for (std::size_t k = 0; k < fit.screening_history.size(); ++k) {
    if (k) os << ", ";
    os << "(" << fit.screening_history[k].first << ", "
       << fit.screening_history[k].second << ")";
  }
  os << "]\n";
  return os.str();
}

std::string metrics_to_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "replicate,tp,ms,err_l2,lambda0,C,failed\n";
  for (const auto& m : report.per_replicate) {
    os << m.index << "," << num(m.tp) << "," << num(m.ms) << "," << num(m.err_l2)
       << "," << num(m.lambda0) << "," << num(m.C) << "," << (m.failed ? 1 : 0)
       << "\n";
  }
  return os.str();
}

std::string metrics_to_table(const SimulationSpec& spec, const MetricsReport& report) {
  char buf[512];
  std::ostringstream os;
  std::snprintf(buf, sizeof buf, "n=%zu p=%zu rho=%g sigma=%g replicates=%zu seed=%llu\n",
                spec.n, spec.p, spec.rho, spec.sigma, spec.replicates,
                static_cast<unsigned long long>(spec.seed));
  os << buf;
  os << "metric        value\n";
  std::snprintf(buf, sizeof buf, "TP         %8.3f\n", report.TP);
  os << buf;
  std::snprintf(buf, sizeof buf, "MS         %8.3f\n", report.MS);
  os << buf;
  std::snprintf(buf, sizeof buf, "RMSE       %8.4f   (sqrt of mean ||beta_hat - beta*||^2)\n",
                report.RMSE);
  os << buf;
  std::snprintf(buf, sizeof buf, "RMSE/coord %8.4f   (per-coordinate normalized)\n",
                report.RMSE_per_coord);
  os << buf;
  std::snprintf(buf, sizeof buf, "failures   %8zu\n", report.failures);
  os << buf;
  return os.str();
}

}  // namespace ped
