#pragma once

#include <array>
#include <span>
#include <vector>

#include "landau/multi_index.hpp"

namespace landau {

using Vec3 = std::array<double, 3>;

enum class Ladder { raise, lower };

// ---------------------------------------------------------------------------
// 1-d Hermite functions ψ_n(x) = 2^{-1/4} φ_n(2^{-1/2} x), orthonormal in L²(ℝ),
// with ψ_0(x) = (2π)^{-1/4} e^{-x²/4}.
// ---------------------------------------------------------------------------

/// ψ_n(x) via x ψ_n = √(n+1) ψ_{n+1} + √n ψ_{n-1}.
double hermite_eval_1d(int n, double x);

/// ψ_0(x), …, ψ_N(x) written to out (size N+1).
void hermite_values_1d(double x, std::span<double> out);

/// Normalized probabilists' polynomials p_n = He_n/√n!, so that ψ_n = p_n ψ_0.
void hermite_polys_1d(double x, std::span<double> out);

/// Ψ_α(v) = Π_j ψ_{α_j}(v_j)
double basis_eval(const MultiIndex& alpha, const Vec3& v);

/// Finite Hermite expansion f = Σ_{|α| ≤ D} c_α Ψ_α.
///
/// Coefficients are stored densely in graded-lex order (see BasisIndex).
class SpectralFunction
{
 public:
  SpectralFunction() = default;
  explicit SpectralFunction(int degree_cap);
  SpectralFunction(int degree_cap, std::vector<double> coefficients);

  static SpectralFunction basis_vector(const MultiIndex& alpha, int degree_cap = -1);

  int degree_cap() const { return cap_; }
  std::size_t size() const { return c_.size(); }

  double coeff(const MultiIndex& alpha) const;
  void set(const MultiIndex& alpha, double value);
  void add(const MultiIndex& alpha, double value);

  std::span<const double> coefficients() const { return c_; }
  std::span<double> coefficients() { return c_; }

  /// Σ c_α² (the squared L² norm)
  double norm2() const;

  /// Drop every coefficient with |α| > new_cap.
  SpectralFunction truncated(int new_cap) const;
  /// Same function with a larger degree cap (zero padded).
  SpectralFunction padded(int new_cap) const;

  SpectralFunction& operator+=(const SpectralFunction& o);
  SpectralFunction& operator-=(const SpectralFunction& o);
  SpectralFunction& operator*=(double s);

 private:
  int cap_ = 0;
  std::vector<double> c_ = {0.0};
};

SpectralFunction operator+(SpectralFunction a, const SpectralFunction& b);
SpectralFunction operator-(SpectralFunction a, const SpectralFunction& b);
SpectralFunction operator*(double s, SpectralFunction f);

/// L² inner product (coefficient dot product).
double inner(const SpectralFunction& f, const SpectralFunction& g);

/// Max |f_α − g_α| over the union of both supports.
double max_coeff_diff(const SpectralFunction& f, const SpectralFunction& g);

/// A_{±,j}: raise gives cap D+1, lower keeps cap D.
///
/// A_{+,j}Ψ_α = √(α_j+1) Ψ_{α+e_j},  A_{−,j}Ψ_α = √α_j Ψ_{α−e_j}.
SpectralFunction ladder(const SpectralFunction& f, int axis, Ladder direction);

/// ∂_j f = (A_{−,j} − A_{+,j})/2, cap D+1.
SpectralFunction derivative(const SpectralFunction& f, int axis);

/// ∂^α f, cap D+|α|.
SpectralFunction derivative(const SpectralFunction& f, const MultiIndex& alpha);

/// v_j f = (A_{+,j} + A_{−,j}) f, cap D+1.
SpectralFunction multiply_v(const SpectralFunction& f, int axis);

/// (−Δ + |v|²/4) f, diagonal with eigenvalue |α| + 3/2.
SpectralFunction harmonic_apply(const SpectralFunction& f);

/// Pointwise evaluation Σ c_α Ψ_α(v).
double evaluate(const SpectralFunction& f, const Vec3& v);

}  // namespace landau
