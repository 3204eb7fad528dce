#pragma once

// Independent reference integrals for the coefficient tests.
//
// Full 3-d nested Gauss–Kronrod over spherical coordinates centered at the
// kernel singularity, with a fixed Cartesian polar axis (no alignment with v,
// no azimuthal shortcut, no derivative-on-Gaussian identity). Only shares
// double precision with the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace landau::testing {

using Point = std::array<double, 3>;

struct OracleSettings
{
  double tol = 1e-7;
  unsigned depth = 18;
  double window = 13.0;
};

/// ∫_{ℝ³} k(z) g(v − z) dz for a kernel singular only at z = 0.
///
/// k(z) and g(w) are scalar callables; ρ is cut to |ρ − |v|| ≤ window, which
/// is harmless when g carries a unit-width Gaussian centered at 0.
inline double spherical_convolution(const std::function<double(const Point&)>& k,
                                    const std::function<double(const Point&)>& g, const Point& v,
                                    OracleSettings s = {})
{
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const double lo = std::max(0.0, r - s.window);
  const double hi = r + s.window;
  auto f_rho = [&](double rho) {
    auto f_theta = [&](double th) {
      const double st = std::sin(th);
      const double ct = std::cos(th);
      auto f_phi = [&](double ph) {
        const Point zh{st * std::cos(ph), st * std::sin(ph), ct};
        const Point z{rho * zh[0], rho * zh[1], rho * zh[2]};
        const Point w{v[0] - z[0], v[1] - z[1], v[2] - z[2]};
        return k(zh) * g(w);
      };
      return st * GK::integrate(f_phi, 0.0, 2.0 * std::numbers::pi, s.depth, s.tol * 0.01);
    };
    return rho * rho * GK::integrate(f_theta, 0.0, std::numbers::pi, s.depth, s.tol * 0.1);
  };
  return GK::integrate(f_rho, lo, hi, s.depth, s.tol);
}

inline double maxwellian(const Point& w)
{
  return std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-0.5 * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]));
}

/// (a_ij ∗ g)(v) with a_ij(z) = (δ_ij − ẑ_iẑ_j)|z|^{γ+2}.
///
/// The radial factor ρ^{γ+2} is merged into g's evaluation through the
/// distance |v − w| so that k stays a function of the direction only.
inline double landau_convolution(int i, int j, double gamma, const std::function<double(const Point&)>& g,
                                 const Point& v, OracleSettings s = {})
{
  auto k = [i, j](const Point& zh) { return (i == j ? 1.0 : 0.0) - zh[static_cast<std::size_t>(i)] * zh[static_cast<std::size_t>(j)]; };
  auto gw = [&](const Point& w) {
    const Point z{v[0] - w[0], v[1] - w[1], v[2] - w[2]};
    const double rho = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    return std::pow(rho, gamma + 2.0) * g(w);
  };
  return spherical_convolution(k, gw, v, s);
}

/// ā_ij(v) from the definition.
inline std::array<std::array<double, 3>, 3> abar_oracle(double gamma, const Point& v, OracleSettings s = {})
{
  std::array<std::array<double, 3>, 3> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = landau_convolution(i, j, gamma, maxwellian, v, s);
      out[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

/// Σ_j (a_ij ∗ (w_j μ))(v)
inline Point drift_oracle(double gamma, const Point& v, OracleSettings s = {})
{
  Point out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto g = [j](const Point& w) { return w[static_cast<std::size_t>(j)] * maxwellian(w); };
      out[static_cast<std::size_t>(i)] += landau_convolution(i, j, gamma, g, v, s);
    }
  }
  return out;
}

/// Gaussian moment m_p = ∫|w|^p μ(w) dw = 2^{p/2+1}Γ((p+3)/2)/√π.
inline double gaussian_moment(double p)
{
  return std::pow(2.0, 0.5 * p + 1.0) * std::tgamma(0.5 * (p + 3.0)) / std::sqrt(std::numbers::pi);
}

}  // namespace landau::testing
