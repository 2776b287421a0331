#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ped {

// Deterministic standard-normal stream (Marsaglia polar method on top of
// mt19937_64). std::normal_distribution is implementation-defined, so the
// transform is done by hand to keep seeded runs reproducible.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}
  NormalSampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    gen_.seed(seq);
  }

  // Uniform in (-1, 1) excluding the endpoints' ulp region.
  double uniform_pm1() {
    return 2.0 * (static_cast<double>(gen_() >> 11) * 0x1.0p-53) - 1.0;
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform_pm1();
      v = uniform_pm1();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ped
