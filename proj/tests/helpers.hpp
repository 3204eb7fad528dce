#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>

#include "landau/coefficients.hpp"
#include "landau/hermite.hpp"
#include "landau/random.hpp"

namespace landau::testing {

/// Random expansion with N(0,1) coefficients for |α| ≤ D.
inline SpectralFunction random_function(int degree_cap, std::uint64_t seed)
{
  SeededRng rng(seed);
  SpectralFunction f(degree_cap);
  for (double& c : f.coefficients()) {
    c = rng.normal();
  }
  return f;
}

inline double rel_diff(double a, double b)
{
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline std::filesystem::path cache_dir()
{
  if (const char* env = std::getenv("LANDAU_CACHE_DIR")) {
    return env;
  }
  return std::filesystem::current_path() / "landau_cache";
}

/// Default-settings table per γ, built once per process and cached on disk.
inline const CoefficientField& shared_field(double gamma, TableSettings settings = {})
{
  static std::map<std::string, std::unique_ptr<CoefficientField>> fields;
  auto field = CoefficientField::load_or_build(PotentialConfig(gamma), settings, cache_dir());
  auto& slot = fields[field.cache_key()];
  if (!slot) {
    slot = std::make_unique<CoefficientField>(std::move(field));
  }
  return *slot;
}

/// Uniform point in the ball of radius r.
inline Vec3 random_point(SeededRng& rng, double radius)
{
  while (true) {
    const Vec3 p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= 1.0) {
      return {radius * p[0], radius * p[1], radius * p[2]};
    }
  }
}

}  // namespace landau::testing
