#pragma once
// Deterministic random numbers for reproducible ensembles. The mt19937_64
// bit stream is pinned by the C++ standard, but the standard library's
// floating-point distributions are not, so uniforms and gaussians are
// produced here by fixed arithmetic (53-bit uniform, Box-Muller pairs).
// Identical seeds therefore give bit-identical fields on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nlsfarf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one spare value is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nlsfarf
