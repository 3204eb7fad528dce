#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace landau {

/// Seeded generator with platform-independent output.
///
/// std::mt19937_64 has a fully specified output sequence; the conversions to
/// uniform and normal deviates below are spelled out so that samples (and
/// therefore every reported constant) reproduce bit-exactly from the seed.
class SeededRng
{
 public:
  explicit SeededRng(std::uint64_t seed)
      : engine_(seed)
  {
  }

  /// uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// standard normal via Box–Muller (one deviate per call)
  double normal()
  {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// ±1 with equal probability
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace landau
