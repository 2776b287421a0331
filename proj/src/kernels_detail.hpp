#pragma once

#include <cstddef>

namespace ped::kernels::detail {

struct OpsTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
};

const OpsTable& scalar_ops();

#if defined(__x86_64__)
const OpsTable& avx2_ops();
#endif

}  // namespace ped::kernels::detail
