#pragma once

#include <cstdint>
#include <random>

#include "fivenum/normal.hpp"

namespace fivenum {

// splitmix64-style mixing of (seed, stream) into an engine seed. Block
// sub-seeds are a pure function of the master seed and the block index,
// which is what makes parallel reductions reproducible.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. All variate generation is implemented on top
// of uniform_open01 so the draw sequence is fixed by the standard-mandated
// mt19937_64 output, not by library-specific distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal by inversion.
  double normal() { return detail::normal_quantile_raw(uniform_open01()); }

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 handled with the
  // usual boost gamma(shape + 1) * U^(1/shape).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform_open01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fivenum
