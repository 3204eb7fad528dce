#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/hermite.hpp"
#include "landau/multi_index.hpp"

namespace landau {

enum class AssemblyPath {
  factorized,  ///< Σ_jk A_{+,j} ā_jk A_{−,k}
  direct,      ///< ā∇f·∇g + ¼ q f g − ½ d f g
};

struct GalerkinSettings
{
  /// Gauss–Hermite points per axis: max(3D + 16, min_points), rounded up to even
  int min_points = 0;
};

/// Dissipative generator 𝓑 on span{Ψ_α : |α| ≤ D}; the evolution is ∂_t f = −𝓑f.
///
/// Basis functions with different coordinate parities (α mod 2) are exactly
/// decoupled, so B is stored dense but is block diagonal over the eight
/// parity classes listed in `blocks`.
struct GalerkinSystem
{
  int degree_cap = 0;
  double gamma = 0.0;
  AssemblyPath path = AssemblyPath::factorized;
  int points_per_axis = 0;
  std::string table_key;
  int ordering_version = BasisIndex::kOrderingVersion;
  Eigen::MatrixXd matrix;
  std::array<std::vector<int>, 8> blocks;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// basis positions of |α| ≤ D grouped by parity class 4(α₁ mod 2) + 2(α₂ mod 2) + (α₃ mod 2)
std::array<std::vector<int>, 8> parity_blocks(int degree_cap);

/// B_{αβ} = Σ_jk √(α_jβ_k) ∫ ā_jk Ψ_{α−e_j} Ψ_{β−e_k} dv
GalerkinSystem assemble(int degree_cap, const CoefficientField& field, GalerkinSettings settings = {});

/// Same operator from ∫ā∇Ψ_α·∇Ψ_β + ¼∫(āv·v)Ψ_αΨ_β − ½∫∇·(āv) Ψ_αΨ_β
GalerkinSystem assemble_direct(int degree_cap, const CoefficientField& field, GalerkinSettings settings = {});

struct InvariantReport
{
  double asymmetry;       ///< max|B − Bᵀ| / max|B|
  double min_eigenvalue;  ///< relative to max|B|
  double kernel_row;      ///< max over row and column α = 0
  bool ok;
};

/// Symmetry (1e−10 relative), PSD (λ_min ≥ −1e−10‖B‖), zero α = 0 row and column.
/// Throws InvariantViolation on failure unless throw_on_failure is false.
InvariantReport check_invariants(const GalerkinSystem& system, bool throw_on_failure = true);

/// Smallest eigenvalue on the orthogonal complement of Ψ₀.
double spectral_gap(const GalerkinSystem& system);

/// xᵀBx for the coefficient vector of f (cap must match).
double quadratic_form(const GalerkinSystem& system, const SpectralFunction& f);

/// Provenance header in text, then the matrix as raw doubles; reload is bit exact.
void save_system(const GalerkinSystem& system, const std::filesystem::path& path);
GalerkinSystem load_system(const std::filesystem::path& path);

inline constexpr int kSystemFormatVersion = 1;

}  // namespace landau
