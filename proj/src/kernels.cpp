#include "ped/kernels.hpp"

#include "kernels_detail.hpp"

namespace ped::kernels {
namespace {

const detail::OpsTable* g_ops = nullptr;
Backend g_backend = Backend::scalar;

void init() {
  if (g_ops) return;
#if defined(__x86_64__)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    g_ops = &detail::avx2_ops();
    g_backend = Backend::avx2;
    return;
  }
#endif
  g_ops = &detail::scalar_ops();
  g_backend = Backend::scalar;
}

const detail::OpsTable& ops() {
  init();
  return *g_ops;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  init();
  return g_backend;
}

std::string_view backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

Backend set_backend(Backend b) {
  init();
#if defined(__x86_64__)
  if (b == Backend::avx2 && avx2_supported()) {
    g_ops = &detail::avx2_ops();
    g_backend = Backend::avx2;
    return g_backend;
  }
#endif
  g_ops = &detail::scalar_ops();
  g_backend = Backend::scalar;
  return g_backend;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return ops().dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return ops().sum(x.data(), x.size()); }

double sum_sq(std::span<const double> x) {
  return ops().sum_sq(x.data(), x.size());
}

double sum_abs(std::span<const double> x) {
  return ops().sum_abs(x.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  ops().axpy(a, x.data(), y.data(), x.size());
}

void scal(double a, std::span<double> x) { ops().scal(a, x.data(), x.size()); }

}  // namespace ped::kernels
