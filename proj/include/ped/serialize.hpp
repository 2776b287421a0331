#pragma once

#include <string>

#include "ped/simulation.hpp"

namespace ped {

// Key-value text form of a fit: chosen parameters, active set with
// original column names, raw-scale coefficients and intercept.
std::string serialize_fit_result(const FitResult& fit, const StandardizedDataset& ds);

// Per-replicate metrics as CSV (header + one row per replicate).
std::string metrics_to_csv(const MetricsReport& report);

// Human-readable summary table.
std::string metrics_to_table(const SimulationSpec& spec, const MetricsReport& report);

}  // namespace ped
