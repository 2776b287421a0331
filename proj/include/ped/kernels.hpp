#pragma once

// Data-parallel kernels used by the dense linear algebra layer.
// A scalar reference implementation is always available; an AVX2
// variant is selected at runtime when the CPU supports it.

#include <cstddef>
#include <span>
#include <string_view>

namespace ped::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen at startup (avx2 when the CPU supports it).
Backend active_backend();
std::string_view backend_name();

// Force a backend; requesting avx2 on unsupported hardware keeps scalar.
// Returns the backend actually in effect.
Backend set_backend(Backend b);

bool avx2_supported();

double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double sum_abs(std::span<const double> x);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// x *= a
void scal(double a, std::span<double> x);

}  // namespace ped::kernels
