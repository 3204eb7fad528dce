#pragma once

#include <vector>

#include "landau/evolution.hpp"
#include "landau/multi_index.hpp"
#include "landau/norms.hpp"
#include "landau/report.hpp"

namespace landau {

/// t̃ = min{t, 1}
inline double time_factor(double t) { return t < 1.0 ? t : 1.0; }

/// ‖⟨v⟩^{γ|α|/2} ∂^α f‖, the spatial part of N_α.
/// Throws CapacityError unless cap(f) + |α| ≤ evaluator.max_degree().
double weighted_derivative_raw(const NormEvaluator& evaluator, const SpectralFunction& f, const MultiIndex& alpha);

/// N_α(t) = t̃^{|α|/2} ‖⟨v⟩^{γ|α|/2} ∂^α f‖
double weighted_derivative_norm(const NormEvaluator& evaluator, const SpectralFunction& f, const MultiIndex& alpha,
                                double t);

struct SmoothingOptions
{
  /// a cell is resolved when doubling D changes N_α by less than this (relative)
  double resolve_tolerance = 0.05;
  /// slopes use resolved snapshots with t in [lo, hi]
  double slope_t_min = 0.0;
  double slope_t_max = 1.0;
  /// time at which C_fit is compared across m
  double reference_time = 0.5;
};

struct SmoothingReport
{
  double gamma = 0.0;
  double horizon = 0.0;
  int degree_cap = 0;
  int refined_cap = 0;
  int m_max = 0;
  SmoothingOptions options;
  std::vector<double> times;

  /// every α with 1 ≤ |α| ≤ m_max, graded order
  std::vector<MultiIndex> alphas;
  /// [α][t]: ‖⟨v⟩^{γ|α|/2}∂^αf(t)‖ on the coarse and refined runs
  std::vector<std::vector<double>> raw, raw_refined;
  std::vector<std::vector<char>> resolved;
  /// [α]: short-time slope on the resolved window, NaN when fewer than four points
  std::vector<double> slope;

  /// [m−1][t], m = 1..m_max
  std::vector<std::vector<double>> c_fit;       ///< max_{|α|=m}(N_α/α!)^{1/(m+1)}
  std::vector<std::vector<double>> aggregate;   ///< A_m = (Σ_{|α|=m}(m!/α!)²N_α²)^{1/2}
  std::vector<std::vector<char>> m_resolved;    ///< all α of order m resolved
  /// [t]: Ĉ(t) = max_m C_fit(m, t)
  std::vector<double> c_hat;

  double n(std::size_t a, std::size_t t) const;
  std::size_t reference_index() const;  ///< snapshot nearest reference_time
  double resolved_fraction(double t_min) const;

  /// A_m(t) ≤ (3Ĉ(t))^{m+1} m! on every resolved (m, t)
  bool aggregate_bound_holds() const;
  /// C_fit(m, t_ref) ≤ 3·C_fit(2, t_ref) for m = 1..m_max
  bool c_fit_bounded() const;
  /// mean and extreme slopes over the α of a given order
  double min_slope(int order) const;
  double max_slope(int order) const;
};

/// Tabulates N_α on the snapshots of a D run and its 2D refinement (same times).
///
/// The evaluators need headroom cap + m_max on their respective runs.
SmoothingReport fit_analytic_constant(const EvolutionTrace& trace, const EvolutionTrace& refined,
                                      const NormEvaluator& evaluator, const NormEvaluator& refined_evaluator,
                                      int m_max, SmoothingOptions options = {});

/// Least-squares slope of log‖⟨v⟩^{γ|α|/2}∂^αf‖ against log t over resolved
/// snapshots in [t_min, t_max]; InsufficientDataError below four points.
double shorttime_slope(const SmoothingReport& report, const MultiIndex& alpha, double t_min, double t_max);

/// log-log least squares, at least two points
double loglog_slope(const std::vector<double>& t, const std::vector<double>& y);

/// max over snapshots of (t‖⟨v⟩^{γ/2}∂^αf(t)‖² + ∫₀ᵗ τ‖∂^αf‖²_{A,0} dτ) / ‖f₀‖² for |α| = 1,
/// the time integral by the trapezoid rule on the snapshots (with t = 0 prepended)
double first_derivative_energy_constant(const EvolutionTrace& trace, const NormEvaluator& evaluator);

/// CSV columns gamma,T,D,m,alpha,t,N,N_refined,C_fit,slope,resolved
std::string smoothing_csv(const SmoothingReport& report, const Provenance& provenance);
nlohmann::ordered_json smoothing_summary(const SmoothingReport& report, const Provenance& provenance);

}  // namespace landau
