#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "landau/errors.hpp"
#include "landau/smoothing.hpp"

using namespace landau;
using landau::testing::rel_diff;

namespace {

// |v|² Ψ₀ expanded exactly: Σ_j v_j² Ψ₀
SpectralFunction radial_datum(int cap)
{
  SpectralFunction f(cap);
  const auto psi0 = SpectralFunction::basis_vector(MultiIndex{}, 0);
  for (int j = 0; j < 3; ++j) {
    f += multiply_v(multiply_v(psi0, j), j).padded(cap);
  }
  return f;
}

}  // namespace

TEST_SUITE("smoothing")
{
  TEST_CASE("weighted derivative norm")
  {
    const double g = -1.0;
    const auto& field = testing::shared_field(g);
    const NormEvaluator ne(field, 8);
    const auto f = testing::random_function(5, 71);
    CHECK(rel_diff(weighted_derivative_norm(ne, f, MultiIndex{}, 0.3), std::sqrt(f.norm2())) < 1e-13);

    // ∂₁Ψ₀ = −½Ψ_{e₁}; ‖⟨v⟩^{γ/2}Ψ_{e₁}‖² = ⅓∫(1+r²)^{γ/2} r² μ dv
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto radial = [&](double r) {
      return 4.0 * std::numbers::pi * r * r * std::pow(1 + r * r, 0.5 * g) * r * r / 3.0
             * std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-0.5 * r * r);
    };
    const double oracle = 0.5 * std::sqrt(GK::integrate(radial, 0.0, 40.0, 20, 1e-14));
    const auto psi0 = SpectralFunction::basis_vector(MultiIndex{}, 0);
    CHECK(rel_diff(weighted_derivative_norm(ne, psi0, MultiIndex::unit(0), 1.0), oracle) < 1e-12);
    // t̃ = min{t, 1}
    CHECK(rel_diff(weighted_derivative_norm(ne, psi0, MultiIndex::unit(0), 4.0), oracle) < 1e-12);
    CHECK(rel_diff(weighted_derivative_norm(ne, psi0, MultiIndex(1, 1, 0), 0.25),
                   0.25 * weighted_derivative_raw(ne, psi0, MultiIndex(1, 1, 0)))
          < 1e-14);

    CHECK_THROWS_AS(weighted_derivative_raw(ne, f, MultiIndex(2, 1, 1)), CapacityError);
  }

  TEST_CASE("permutation symmetry for radial data")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem sys = assemble(6, field);
    const NormEvaluator ne(field, 9);
    const Propagator p(sys);
    const auto f = p.apply(radial_datum(6), 0.2);
    const double a = weighted_derivative_raw(ne, f, MultiIndex(2, 1, 0));
    for (const MultiIndex& b : {MultiIndex(0, 1, 2), MultiIndex(1, 0, 2), MultiIndex(2, 0, 1), MultiIndex(1, 2, 0)}) {
      CHECK(rel_diff(weighted_derivative_raw(ne, f, b), a) < 1e-11);
    }
  }

  TEST_CASE("log-log slope")
  {
    std::vector<double> t, y;
    for (double s : {0.01, 0.02, 0.05, 0.1, 0.3}) {
      t.push_back(s);
      y.push_back(3.0 * std::pow(s, -0.75));
    }
    CHECK(loglog_slope(t, y) == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), InsufficientDataError);
  }

  TEST_CASE("stationary state report")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem coarse = assemble(4, field);
    const GalerkinSystem fine = assemble(8, field);
    const NormEvaluator nc(field, 7);
    const NormEvaluator nf(field, 11);
    const auto psi0 = SpectralFunction::basis_vector(MultiIndex{}, 0);
    const std::vector<double> times = {0.01, 0.03, 0.1, 0.3, 1.0, 1.5, 2.0};
    const auto rep = fit_analytic_constant(evolve_exact(coarse, psi0, times), evolve_exact(fine, psi0, times), nc, nf, 3);
    CHECK(rep.alphas.size() == basis_size(3) - 1);
    CHECK(rep.resolved_fraction(0.0) == 1.0);
    for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
      for (std::size_t t = 1; t < times.size(); ++t) {
        CHECK(rel_diff(rep.raw[a][t], rep.raw[a][0]) < 1e-12);
      }
      CHECK(std::abs(rep.slope[a]) < 1e-10);
    }
    for (int m = 1; m <= 3; ++m) {
      // t-flat once t̃ = 1
      CHECK(std::isfinite(rep.c_fit[static_cast<std::size_t>(m - 1)].back()));
      CHECK(rel_diff(rep.c_fit[static_cast<std::size_t>(m - 1)].back(),
                     rep.c_fit[static_cast<std::size_t>(m - 1)][times.size() - 2])
            < 1e-12);
    }
    CHECK(rep.aggregate_bound_holds());
    CHECK_THROWS_AS(shorttime_slope(rep, MultiIndex::unit(0), 0.5, 1.0), InsufficientDataError);
    CHECK_THROWS_AS(shorttime_slope(rep, MultiIndex(4, 0, 0), 0.0, 1.0), CapacityError);
  }

  TEST_CASE("rough datum report")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem coarse = assemble(4, field);
    const GalerkinSystem fine = assemble(8, field);
    const NormEvaluator nc(field, 7);
    const NormEvaluator nf(field, 11);
    SeededRng rng(5);
    SpectralFunction f0(8);
    for (double& c : f0.coefficients()) {
      c = rng.sign();
    }
    const auto times = geometric_times(0.01, 2.0, 10);
    const EvolutionTrace tc = evolve_exact(coarse, f0.truncated(4), times);
    const EvolutionTrace tf = evolve_exact(fine, f0, times);
    const auto rep = fit_analytic_constant(tc, tf, nc, nf, 3);
    for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
      for (std::size_t t = 0; t < times.size(); ++t) {
        CHECK(rep.n(a, t) >= 0.0);
      }
    }
    // the A_m bound follows from the definition of Ĉ
    CHECK(rep.aggregate_bound_holds());
    // homogeneity
    const auto rep2 = fit_analytic_constant(evolve_exact(coarse, 2.0 * f0.truncated(4), times),
                                            evolve_exact(fine, 2.0 * f0, times), nc, nf, 3);
    CHECK(rel_diff(rep2.raw[0][3], 2.0 * rep.raw[0][3]) < 1e-13);
    CHECK(rep2.resolved == rep.resolved);

    Provenance prov;
    prov.add("config_hash", fnv1a_hex("x"));
    const std::string csv = smoothing_csv(rep, prov);
    CHECK(csv == smoothing_csv(rep, prov));
    CHECK(csv.find("gamma,T,D,m,alpha,t,N,N_refined,C_fit,slope,resolved\n") != std::string::npos);
    const auto j = smoothing_summary(rep, prov);
    CHECK(j["orders"].size() == 3);
    CHECK(j["D"] == 4);
    CHECK(j["D_refined"] == 8);

    const double c = first_derivative_energy_constant(tc, nc);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
    CHECK_THROWS_AS(first_derivative_energy_constant(tf, nc), CapacityError);
    CHECK_THROWS_AS(fit_analytic_constant(tc, evolve_exact(fine, f0, {0.5}), nc, nf, 3), ConfigError);
  }
}
