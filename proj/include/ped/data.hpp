#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ped/linalg.hpp"

namespace ped {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RawDataset {
  Matrix X;                               // n x p, arbitrary units
  Vector y;                               // length n
  std::vector<std::string> column_names;  // empty or length p

  std::size_t n() const { return X.rows(); }
  std::size_t p() const { return X.cols(); }

  // Throws DataError on dimension mismatch or non-finite entries.
  void validate() const;
};

// Centered design with unit-norm columns and centered response.
// Columns whose centered l2 norm falls below the drop threshold are
// removed and recorded in dropped_columns (original indices).
struct StandardizedDataset {
  Matrix X;       // n x p_retained
  Vector y;       // length n, centered
  Vector col_means;   // length p_retained (means of retained raw columns)
  Vector col_scales;  // length p_retained, positive
  double y_mean = 0.0;
  std::vector<std::size_t> dropped_columns;
  std::vector<std::size_t> retained_columns;  // original indices
  std::vector<std::string> column_names;      // retained, empty if unnamed
  std::size_t p_raw = 0;

  std::size_t n() const { return X.rows(); }
  std::size_t p() const { return X.cols(); }
};

StandardizedDataset standardize(const RawDataset& raw);

// Maps coefficients on the standardized scale back to the raw scale.
// Returns (beta_raw of length p_raw with zeros at dropped columns, intercept).
std::pair<Vector, double> destandardize(const Vector& beta_std,
                                        const StandardizedDataset& ds);

// CSV ingestion: first row is a header, comma-separated numeric cells.
// The response column is selected by name, or by 0-based index when the
// name is an integer not present in the header.
RawDataset load_csv(const std::string& path, const std::string& response_column);

}  // namespace ped
