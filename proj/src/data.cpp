#include "ped/data.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ped {

namespace {
constexpr double kDropTol = 1e-12;
}

void RawDataset::validate() const {
  if (X.rows() < 2) throw DataError("need at least 2 observations");
  if (X.cols() < 1) throw DataError("need at least 1 predictor");
  if (y.size() != X.rows())
    throw DataError("response length does not match design rows");
  if (!column_names.empty() && column_names.size() != X.cols())
    throw DataError("column name count does not match design columns");
  for (double v : X.data())
    if (!std::isfinite(v)) throw DataError("non-finite entry in design matrix");
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("non-finite entry in response");
}

StandardizedDataset standardize(const RawDataset& raw) {
  raw.validate();
  const std::size_t n = raw.n();
  const std::size_t p = raw.p();

  StandardizedDataset ds;
  ds.p_raw = p;
  ds.y_mean = kernels::sum(raw.y) / static_cast<double>(n);
  ds.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) ds.y[i] = raw.y[i] - ds.y_mean;

  // First pass: decide which columns survive.
  std::vector<double> means(p), scales(p);
  for (std::size_t j = 0; j < p; ++j) {
    auto c = raw.X.col(j);
    means[j] = kernels::sum(c) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : c) {
      const double d = v - means[j];
      ss += d * d;
    }
    scales[j] = std::sqrt(ss);
    if (scales[j] < kDropTol)
      ds.dropped_columns.push_back(j);
    else
      ds.retained_columns.push_back(j);
  }
  if (ds.retained_columns.empty()) throw DataError("empty design: all columns dropped");

  ds.X = Matrix(n, ds.retained_columns.size());
  ds.col_means.reserve(ds.retained_columns.size());
  ds.col_scales.reserve(ds.retained_columns.size());
  for (std::size_t k = 0; k < ds.retained_columns.size(); ++k) {
    const std::size_t j = ds.retained_columns[k];
    auto src = raw.X.col(j);
    auto dst = ds.X.col(k);
    const double inv = 1.0 / scales[j];
    for (std::size_t i = 0; i < n; ++i) dst[i] = (src[i] - means[j]) * inv;
    ds.col_means.push_back(means[j]);
    ds.col_scales.push_back(scales[j]);
    if (!raw.column_names.empty()) ds.column_names.push_back(raw.column_names[j]);
  }
  return ds;
}

std::pair<Vector, double> destandardize(const Vector& beta_std,
                                        const StandardizedDataset& ds) {
  if (beta_std.size() != ds.p())
    throw DataError("coefficient length does not match retained columns");
  Vector beta_raw(ds.p_raw, 0.0);
  double intercept = ds.y_mean;
  for (std::size_t k = 0; k < beta_std.size(); ++k) {
    const double b = beta_std[k] / ds.col_scales[k];
    beta_raw[ds.retained_columns[k]] = b;
    intercept -= b * ds.col_means[k];
  }
  return {std::move(beta_raw), intercept};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const std::string t = trim(cell);
  const char* begin = t.data();
  const char* end = begin + t.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    std::ostringstream msg;
    msg << "non-numeric cell '" << t << "' at row " << row << ", column " << col + 1;
    throw DataError(msg.str());
  }
  return v;
}

}  // namespace

RawDataset load_csv(const std::string& path, const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line) || trim(line).empty())
    throw DataError("empty CSV: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  // Resolve response column: by name first, then as a 0-based index.
  std::size_t resp = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (trim(header[j]) == response_column) resp = j;
  if (resp == header.size()) {
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(response_column.data(),
                                     response_column.data() + response_column.size(), idx);
    if (ec == std::errc{} && ptr == response_column.data() + response_column.size() &&
        idx < header.size())
      resp = idx;
  }
  if (resp == header.size())
    throw DataError("response column not found: " + response_column);

  const std::size_t ncols = header.size();
  std::vector<std::vector<double>> rows;
  std::size_t row_no = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != ncols) {
      std::ostringstream msg;
      msg << "ragged row " << row_no << ": expected " << ncols << " fields, got "
          << cells.size();
      throw DataError(msg.str());
    }
    std::vector<double> vals(ncols);
    for (std::size_t j = 0; j < ncols; ++j) vals[j] = parse_cell(cells[j], row_no, j);
    rows.push_back(std::move(vals));
  }
  if (rows.size() < 2) throw DataError("need at least 2 data rows in " + path);

  RawDataset raw;
  const std::size_t n = rows.size();
  const std::size_t p = ncols - 1;
  if (p == 0) throw DataError("no predictor columns in " + path);
  raw.X = Matrix(n, p);
  raw.y.resize(n);
  raw.column_names.reserve(p);
  for (std::size_t j = 0, k = 0; j < ncols; ++j) {
    if (j == resp) continue;
    raw.column_names.push_back(trim(header[j]));
    for (std::size_t i = 0; i < n; ++i) raw.X(i, k) = rows[i][j];
    ++k;
  }
  for (std::size_t i = 0; i < n; ++i) raw.y[i] = rows[i][resp];
  raw.validate();
  return raw;
}

}  // namespace ped
