#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "landau/hermite.hpp"
#include "landau/multi_index.hpp"

namespace landau {

using Mat3 = Eigen::Matrix3d;

/// Interaction exponent γ, restricted to the soft range −3 < γ < 0.
class PotentialConfig
{
 public:
  explicit PotentialConfig(double gamma);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

/// a(v) = (|v|² I − v vᵀ)|v|^γ.
///
/// At v = 0 the zero matrix is returned for γ > −2; for γ ≤ −2 the entries are
/// unbounded there and SingularKernelError is thrown.
Mat3 a_kernel(const Vec3& v, const PotentialConfig& config);

struct ConvolutionSettings
{
  double rel_tol = 1e-9;
  /// per-entry accuracy floor relative to the largest entry of the same call
  double floor_ratio = 1e-3;
  int max_intervals = 2000;
  /// radial window |ρ − |v|| ≤ gaussian_window around the Gaussian's center
  double gaussian_window = 13.0;
  /// exponent cutoff for e^{−|v|ρ(1−cosθ)}
  double angular_cutoff = 70.0;
  /// ρ = u² near the origin when γ is below this value
  double substitution_below = -2.5;
};

/// Which kernel the convolution engine integrates against the Gaussian side.
enum class KernelKind {
  landau,  ///< a_ij(z) = (δ_ij − ẑ_iẑ_j)|z|^{γ+2}
  power,   ///< |z|^γ (scalar, stored in entry (0,0))
};

/// Evaluates ∂^β(k ∗ μ)(v) = (−1)^{|β|}√β! ∫ k(z) √μ(v−z) Ψ_β(v−z) dz for a
/// fixed list of β by nested adaptive quadrature in a frame aligned with v.
///
/// The azimuthal integral is a trigonometric polynomial and is done exactly
/// by the trapezoid rule; the polar (ρ, cos θ) integral is adaptive.
class ConvolutionEngine
{
 public:
  ConvolutionEngine(PotentialConfig config, std::vector<MultiIndex> betas, ConvolutionSettings settings = {},
                    KernelKind kind = KernelKind::landau);

  /// one symmetric 3×3 matrix per β in the constructor's order
  std::vector<Mat3> evaluate(const Vec3& v) const;

  const std::vector<MultiIndex>& betas() const { return betas_; }
  bool substitution_engaged() const;
  int last_evaluations() const { return last_evaluations_; }

 private:
  PotentialConfig config_;
  std::vector<MultiIndex> betas_;
  ConvolutionSettings settings_;
  KernelKind kind_;
  int max_order_;
  int n_phi_;
  mutable int last_evaluations_ = 0;
};

/// ∂^β ā_ij(v), all derivatives on the Gaussian.
Mat3 abar_derivative(const Vec3& v, const MultiIndex& beta, const PotentialConfig& config,
                     const ConvolutionSettings& settings = {});

struct Profiles
{
  double l1;  ///< eigenvalue along v̂
  double l2;  ///< eigenvalue on v̂^⊥
};

/// (ℓ₁, ℓ₂)(r) by direct quadrature, no table.
Profiles abar_profiles(double r, const PotentialConfig& config, const ConvolutionSettings& settings = {});

struct TableSettings
{
  double r_max = 40.0;
  int radii = 512;
  /// r = r_scale·sinh(u) with u uniform: uniform near 0, geometric for r ≫ r_scale
  double r_scale = 1.0;
  ConvolutionSettings quadrature;
};

struct DriftPotential
{
  Vec3 b;        ///< Σ_j a_ij ∗ (v_j μ) = ℓ₁(|v|) v
  double div_b;  ///< Σ_i ∂_i b_i = Σ_ij (∂_i a_ij) ∗ (v_j μ)
  double q;      ///< Σ_ij ā_ij v_i v_j = ℓ₁(|v|)|v|²
};

/// ā = a ∗ μ reconstructed from tabulated radial eigen-profiles.
///
/// ā(v) = ℓ₁(r) v̂v̂ᵀ + ℓ₂(r)(I − v̂v̂ᵀ). The table also carries the drift
/// divergence d(r) = ∇·(ā v). Each profile is stored with its r-derivative
/// (itself a convolution quadrature) and interpolated by cubic Hermite splines.
class CoefficientField
{
 public:
  CoefficientField(PotentialConfig config, TableSettings settings = {});

  const PotentialConfig& config() const { return config_; }
  const TableSettings& settings() const { return settings_; }
  double r_max() const { return settings_.r_max; }
  bool substitution_engaged() const { return substitution_; }

  Profiles profiles(double r) const;
  Profiles profile_slopes(double r) const;
  double drift_divergence(double r) const;

  /// throws CapacityError for |v| > r_max
  Mat3 abar(const Vec3& v) const;
  DriftPotential drift_and_potential(const Vec3& v) const;

  const std::vector<double>& radii() const { return r_; }
  /// minimum of min(ℓ₁, ℓ₂) over the stored table
  double min_eigenvalue() const;

  /// Cache key: γ, r_max, table size and tolerances.
  std::string cache_key() const;
  void save_csv(const std::filesystem::path& path) const;
  static CoefficientField load_csv(const std::filesystem::path& path);
  /// Load from dir/<key>.csv if present with a matching key, else build and store.
  static CoefficientField load_or_build(PotentialConfig config, TableSettings settings,
                                        const std::filesystem::path& dir, bool* cache_hit = nullptr);

  static constexpr int kFormatVersion = 1;

 private:
  CoefficientField() = default;
  void build();
  double interp(const std::vector<double>& f, const std::vector<double>& df, double r, double* slope) const;

  PotentialConfig config_{-1.0};
  TableSettings settings_;
  bool substitution_ = false;
  std::vector<double> u_, r_;
  std::vector<double> l1_, dl1_, l2_, dl2_, drift_, ddrift_;
};

// ---------------------------------------------------------------------------
// Bound probes for the coefficient estimates; constants are measured, never assumed.
// ---------------------------------------------------------------------------

/// Deterministic probe points: radii spread over [0, r_max] along fixed directions.
std::vector<Vec3> probe_points(double r_max, int radii_count);

struct DerivativeBoundRow
{
  int order;          ///< |β|
  double max_ratio;   ///< max over β with that order, entries and points of |∂^βā_ij| / (⟨v⟩^{γ+1}√β!)
  MultiIndex argmax_beta;
  Vec3 argmax_point;
};

/// max |∂^β ā_ij(v)| / (⟨v⟩^{γ+1} √β!) per order 1..max_order.
std::vector<DerivativeBoundRow> probe_derivative_bound(const PotentialConfig& config, int max_order,
                                                       const std::vector<Vec3>& points,
                                                       const ConvolutionSettings& settings = {});

struct RatioRange
{
  double lower;
  double upper;
};

/// range over r of (∫|v−w|^γ μ(w)dw)/⟨v⟩^γ
RatioRange probe_power_moment(const PotentialConfig& config, const std::vector<double>& radii,
                              const ConvolutionSettings& settings = {});

/// range of max_ij|ā_ij(r e₃)| / ⟨r⟩^{γ+2}
RatioRange probe_abar_growth(const CoefficientField& field, const std::vector<double>& radii);

/// range of |q(v)| / ⟨v⟩^{γ+1} and |div b(v)| / ⟨v⟩^{γ+1}
struct DriftBoundProbe
{
  RatioRange potential;
  RatioRange drift;
};
DriftBoundProbe probe_drift_bounds(const CoefficientField& field, const std::vector<double>& radii);

/// ⟨v⟩ = (1 + |v|²)^{1/2}
inline double japanese(const Vec3& v)
{
  return std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace landau
