#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/evolution.hpp"
#include "landau/norms.hpp"
#include "landau/quadrature.hpp"
#include "landau/report.hpp"

namespace landau {

/// ∂^βā_ij at every node of a spherical grid for all |β| ≤ max_order.
///
/// The derivative tensors are computed once per radial shell at r e₃ by the
/// convolution engine and rotated onto each node direction.
class AbarDerivativeNodes
{
 public:
  AbarDerivativeNodes(const SphericalGrid& grid, const PotentialConfig& config, int max_order,
                      ConvolutionSettings settings = {});

  int max_order() const { return max_order_; }
  std::size_t size() const { return nodes_; }
  const BasisIndex& betas() const { return betas_; }
  /// β given by its position in BasisIndex(max_order)
  const Mat3& at(std::size_t node, std::size_t beta) const { return data_[node * betas_.size() + beta]; }

 private:
  int max_order_;
  BasisIndex betas_;
  std::size_t nodes_;
  std::vector<Mat3> data_;
};

/// Ψ_α(v_n) for |α| ≤ cap at the nodes of a grid, for batched evaluation.
class NodeTable
{
 public:
  NodeTable(const SphericalGrid& grid, int cap);
  int cap() const { return cap_; }
  /// nodes × count, one column per function (caps ≤ cap)
  Eigen::MatrixXd evaluate(const std::vector<SpectralFunction>& fs) const;

 private:
  int cap_;
  Eigen::MatrixXd phi_;
};

struct EstimateSettings
{
  int degree_cap = 6;
  std::uint64_t seed = 1;
  int samples = 100;
  /// sampled coefficients are N(0,1)·decay^{|α|}
  double decay = 0.5;
  int extra_radial = 24;
  ConvolutionSettings quadrature;
};

/// Sample `index` of a seeded stream; lower caps give a prefix of the same coefficients.
SpectralFunction sample_function(int cap, std::uint64_t seed, std::uint64_t index, double decay);

struct EstimateRow
{
  std::size_t sample;
  std::string label;  ///< which β / α / θ / t the ratio belongs to
  double theta;
  double ratio;
};

struct EstimateReport
{
  std::string inequality;
  Provenance sample_description;
  std::vector<EstimateRow> rows;
  /// empirical constant: max ratio (min for lower bounds such as C₁)
  double constant = 0.0;
  /// further named measurements
  std::vector<std::pair<std::string, double>> measured;

  double value(const std::string& key) const;
};

/// |Σ_ij⟨⟨v⟩^{2θ}∂^βā_ij ∂_jf, ∂_ig⟩| / (√β!‖f‖_{A,θ}‖g‖_{A,θ}) for |β| ≤ beta_max.
EstimateReport validate_lemma22(const CoefficientField& field, const EstimateSettings& settings,
                                const std::vector<double>& thetas, int beta_max);

/// Quantities of the commutator estimate for one f and α (θ = γ|α|/2).
struct CommutatorTerms
{
  double lhs;         ///< (⟨v⟩^{2θ}∂^α(−𝓑f), ∂^αf)
  double anorm2;      ///< ‖∂^αf‖²_{A,θ}
  double first;       ///< ⟨θ⟩‖∂^αf‖_{A,θ}‖∂^αf‖_{2,γ/2+θ}
  double second;      ///< Σ_{|β|≥1} C_α^β√β!‖∂^{α−β}f‖_{A,θ}(‖∂^αf‖_{A,θ} + |θ|‖∂^αf‖_{2,θ+γ/2})
  double third;       ///< Σ_{|β|≥1} C_α^β|β|√β!‖∂^{α−β}f‖_{A,θ}‖∂^αf‖_{2,θ+γ/2}
  double third_beta2; ///< same sum restricted to |β| ≥ 2
  double weighted;    ///< ‖∂^αf‖_{2,γ/2+θ}
  double lower_den; ///< ‖∂^{α−e_{j₀}}f‖_{A,θ}, α_{j₀} = max α_j (|α| ≥ 1)
  double plain_l2;    ///< ‖f‖²_{2,γ/2}, used at α = 0

  /// smallest C₀ making the inequality hold (0 if it holds with C₀ = 0)
  double admissible_c0(bool beta2_variant) const;
};

/// Evaluates CommutatorTerms for every |α| ≤ m_max on a batch of functions.
class CommutatorEvaluator
{
 public:
  /// thetas[m] is the weight exponent for |α| = m; empty means γm/2.
  CommutatorEvaluator(const CoefficientField& field, int degree_cap, int m_max, int extra_radial = 24,
                      ConvolutionSettings settings = {}, std::vector<double> thetas = {});

  int degree_cap() const { return degree_cap_; }
  int m_max() const { return m_max_; }
  /// rows follow BasisIndex(m_max) order of α
  std::vector<CommutatorTerms> evaluate(const SpectralFunction& f) const;
  const BasisIndex& alphas() const { return alphas_; }

 private:
  struct Layer;
  const CoefficientField* field_;
  int degree_cap_;
  int m_max_;
  BasisIndex alphas_;
  std::vector<std::shared_ptr<Layer>> layers_;  // one per |α|
};

struct CommutatorReports
{
  EstimateReport c0;           ///< third sum over |β| ≥ 1
  EstimateReport c0_beta2;     ///< third sum over |β| ≥ 2
  EstimateReport zero_order;   ///< α = 0: (𝓛f, f) ≤ −½‖f‖²_A + C₀‖f‖²_{2,γ/2}
  EstimateReport lower_order;  ///< ‖∂^αf‖_{2,γ/2+θ} / ‖∂^{α−e_{j₀}}f‖_{A,θ}
};

CommutatorReports validate_prop31(const CoefficientField& field, const EstimateSettings& settings, int m_max);

/// C₁: min over samples of ‖f‖²_{A,θ} / (split right side); the truncated
/// infimum from the generalized eigenproblem is recorded as a measurement.
EstimateReport validate_coercivity(const CoefficientField& field, const EstimateSettings& settings,
                                   const std::vector<double>& thetas);

/// ‖f(t)‖² + ∫₀ᵗ‖f(s)‖²_A ds ≤ e^{2C₀T}‖f₀‖² along the trace, T its last time.
/// The time integral is closed form from the A-norm Gram matrix.
EstimateReport validate_energy(const Propagator& propagator, const EvolutionTrace& trace,
                               const NormEvaluator& evaluator, double c0);

std::string estimate_csv(const EstimateReport& report, const Provenance& provenance);
nlohmann::ordered_json estimate_json(const EstimateReport& report, const Provenance& provenance);

}  // namespace landau
