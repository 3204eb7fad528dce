#pragma once

#include <Eigen/Core>

#include <map>
#include <memory>
#include <mutex>

#include "landau/coefficients.hpp"
#include "landau/hermite.hpp"
#include "landau/quadrature.hpp"

namespace landau {

/// What pv_project returns at v = 0, where the direction of v is undefined.
enum class OriginPolicy {
  zero,      ///< P_0 G = 0
  parallel,  ///< P_0 G = G
};

/// P_v G = (G·v) v / |v|²
Vec3 pv_project(const Vec3& g, const Vec3& v, OriginPolicy policy = OriginPolicy::zero);

struct NormOptions
{
  /// radial nodes beyond polynomial exactness, for the tabulated ā profiles
  int extra_radial = 24;
};

/// ‖f‖²_{A,θ} split into its gradient and multiplication parts.
struct AnormParts
{
  double gradient;   ///< ∫⟨v⟩^{2θ} ā∇f·∇f
  double potential;  ///< ¼∫⟨v⟩^{2θ} (āv·v) f²
  double total() const { return gradient + potential; }
};

struct CoercivityRecord
{
  double lhs;            ///< ‖f‖²_{A,θ}
  double parallel;       ///< ‖P_v∇f‖²_{2,γ/2+θ}
  double perpendicular;  ///< ‖(I−P_v)∇f‖²_{2,1+γ/2+θ}
  double zeroth;         ///< ‖f‖²_{2,1+γ/2+θ}
  double ratio;          ///< lhs / (parallel + perpendicular + zeroth)
  double gradient;       ///< ‖∇f‖_{2,γ/2+θ}
  double ratio_simplified;  ///< ‖f‖_{A,θ} / (‖∇f‖_{2,γ/2+θ} + ‖f‖_{2,1+γ/2+θ})
};

/// Quadrature-based weighted norms for expansions with cap ≤ max_degree.
///
/// One SphericalGrid per weight exponent θ is built on first use and kept;
/// weighted L² norms are exact, ā-weighted ones are accurate to the profile
/// table. Safe for concurrent use.
class NormEvaluator
{
 public:
  NormEvaluator(const CoefficientField& field, int max_degree, NormOptions options = {});

  const CoefficientField& field() const { return *field_; }
  int max_degree() const { return max_degree_; }
  double gamma() const { return field_->config().gamma(); }

  /// ‖⟨v⟩^θ f‖
  double weighted_l2(const SpectralFunction& f, double theta) const;
  /// ‖f‖_{A,θ}
  double anorm(const SpectralFunction& f, double theta) const;
  AnormParts anorm_parts(const SpectralFunction& f, double theta) const;

  CoercivityRecord coercivity_probe(const SpectralFunction& f, double theta) const;

  /// Gram matrices on {Ψ_α : |α| ≤ D}
  Eigen::MatrixXd l2_gram(int degree_cap, double theta) const;
  Eigen::MatrixXd anorm_gram(int degree_cap, double theta) const;
  /// Gram of the coercivity right side (three split terms)
  Eigen::MatrixXd coercivity_gram(int degree_cap, double theta) const;

  /// Grid and per-node coefficient data for weight exponent θ
  struct Layer
  {
    SphericalGrid grid;
    std::vector<double> l1, l2, q, radius;
    std::vector<Vec3> direction;  ///< v̂ (zero at the origin, which is never a node)
  };
  const Layer& layer(double theta) const;

 private:
  void check_cap(const SpectralFunction& f) const;
  /// nodes × basis values of Ψ_α and ∂_jΨ_α
  void basis_tables(const Layer& layer, int cap, Eigen::MatrixXd& psi, std::array<Eigen::MatrixXd, 3>& grad) const;

  const CoefficientField* field_;
  int max_degree_;
  NormOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::unique_ptr<Layer>> layers_;
};

/// Smallest λ with A x = λ R x over the truncated space, R positive definite.
double min_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& r);

}  // namespace landau
