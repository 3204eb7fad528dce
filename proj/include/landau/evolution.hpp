#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <vector>

#include "landau/galerkin.hpp"
#include "landau/hermite.hpp"
#include "landau/report.hpp"

namespace landau {

/// e^{−tB} from one symmetric eigendecomposition per parity block.
///
/// Keeps a pointer to the system, which must outlive the propagator.
class Propagator
{
 public:
  /// Throws InvariantViolation if B is not symmetric to 1e−10.
  explicit Propagator(const GalerkinSystem& system);

  const GalerkinSystem& system() const { return *system_; }
  int degree_cap() const { return system_->degree_cap; }

  /// e^{−tB} f; f may have a smaller cap and is padded.
  SpectralFunction apply(const SpectralFunction& f, double t) const;

  /// ‖f(t)‖² and 2∫₀ᵗ f(s)ᵀBf(s) ds, both in closed form over the modes.
  double norm2_at(const SpectralFunction& f0, double t) const;
  double dissipation(const SpectralFunction& f0, double t) const;

  /// ∫₀ᵗ f(s)ᵀ G f(s) ds in closed form; G must not couple parity classes
  /// (its entries across classes are ignored).
  double form_integral(const Eigen::MatrixXd& gram, const SpectralFunction& f0, double t) const;

  /// all eigenvalues, block by block
  std::vector<double> eigenvalues() const;

 private:
  struct Block
  {
    std::vector<int> index;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;
  };
  Eigen::VectorXd coefficients(const SpectralFunction& f) const;

  const GalerkinSystem* system_;
  std::vector<Block> blocks_;
};

struct EvolutionTrace
{
  const GalerkinSystem* system = nullptr;
  SpectralFunction initial;
  std::vector<double> times;
  std::vector<SpectralFunction> snapshots;
  std::vector<double> norm2;        ///< ‖f(t)‖² from the snapshot coefficients
  std::vector<double> form;         ///< f(t)ᵀBf(t)
  std::vector<double> dissipation;  ///< 2∫₀ᵗ fᵀBf ds, closed form

  std::size_t size() const { return times.size(); }
  /// |‖f(t)‖² + 2∫₀ᵗ fᵀBf ds − ‖f₀‖²|
  double energy_residual(std::size_t i) const;
  double max_energy_residual() const;
  /// ‖f(t)‖ non-increasing over consecutive snapshots, up to rounding
  bool monotone() const;
};

/// Snapshots at the given times (ascending, ≥ 0).
EvolutionTrace evolve_exact(const Propagator& propagator, const SpectralFunction& f0, const std::vector<double>& times);
EvolutionTrace evolve_exact(const GalerkinSystem& system, const SpectralFunction& f0, const std::vector<double>& times);

/// count points geometrically spaced over [t_min, t_max]
std::vector<double> geometric_times(double t_min, double t_max, int count);

enum class Scheme {
  backward_euler,
  trapezoidal,
};

/// Implicit one-step scheme with its factorization kept for repeated steps.
class Stepper
{
 public:
  Stepper(const GalerkinSystem& system, double dt, Scheme scheme);

  SpectralFunction step(const SpectralFunction& f) const;
  SpectralFunction advance(SpectralFunction f, int steps) const;

  double dt() const { return dt_; }

 private:
  const GalerkinSystem* system_;
  double dt_;
  Scheme scheme_;
  Eigen::MatrixXd lhs_factor_;  // lower Cholesky factor of I + c·dt·B
};

SpectralFunction evolve_step(const GalerkinSystem& system, const SpectralFunction& f, double dt, Scheme scheme);

/// Truncate-then-evolve versus evolve-then-truncate to a smaller cap.
///
/// The two agree only if B does not couple degrees ≤ D' to higher ones; the
/// harness reports the mismatch so that mode decoupling is never assumed.
struct CommutationCheck
{
  int coarse_cap;
  double t;
  double mismatch;  ///< relative L² difference of the two coarse results
  bool flagged;     ///< mismatch above tolerance
};

CommutationCheck projection_commutation(const GalerkinSystem& system, const SpectralFunction& f0, int coarse_cap,
                                        double t, double tolerance = 1e-10);

/// Columns t, norm2, form, dissipation, energy_residual after the provenance header.
std::string trace_csv(const EvolutionTrace& trace, const Provenance& provenance);
nlohmann::ordered_json trace_manifest(const EvolutionTrace& trace, const Provenance& provenance);

}  // namespace landau
