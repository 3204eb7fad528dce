#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "landau/errors.hpp"
#include "landau/galerkin.hpp"
#include "landau/norms.hpp"

using namespace landau;
using landau::testing::rel_diff;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// ∫ Σ_jk ā_jk (A_{−,j}f)(A_{−,k}f) on the spherical rule, with A_{−,j} = ∂_j + v_j/2 applied pointwise
double ladder_form(const NormEvaluator& ne, const SpectralFunction& f)
{
  const auto& layer = ne.layer(0.0);
  const auto vals = layer.grid.evaluate(f);
  std::array<std::vector<double>, 3> grad;
  for (int j = 0; j < 3; ++j) {
    grad[static_cast<std::size_t>(j)] = layer.grid.evaluate(derivative(f, j));
  }
  std::vector<double> integrand(vals.size());
  for (std::size_t n = 0; n < vals.size(); ++n) {
    const Vec3 v = layer.grid.node(n);
    Vec3 am{};
    for (std::size_t j = 0; j < 3; ++j) {
      am[j] = grad[j][n] + 0.5 * v[j] * vals[n];
    }
    const Vec3& e = layer.direction[n];
    const double par = e[0] * am[0] + e[1] * am[1] + e[2] * am[2];
    const double all = am[0] * am[0] + am[1] * am[1] + am[2] * am[2];
    integrand[n] = layer.l1[n] * par * par + layer.l2[n] * (all - par * par);
  }
  return layer.grid.integrate(integrand);
}

// ½∫∇·(āv) f² on the same rule
double drift_term(const NormEvaluator& ne, const SpectralFunction& f)
{
  const auto& layer = ne.layer(0.0);
  const auto vals = layer.grid.evaluate(f);
  std::vector<double> integrand(vals.size());
  for (std::size_t n = 0; n < vals.size(); ++n) {
    integrand[n] = ne.field().drift_divergence(layer.radius[n]) * vals[n] * vals[n];
  }
  return 0.5 * layer.grid.integrate(integrand);
}

}  // namespace

TEST_SUITE("galerkin")
{
  TEST_CASE("parity blocks partition the basis")
  {
    const auto blocks = parity_blocks(5);
    std::size_t total = 0;
    for (const auto& b : blocks) {
      total += b.size();
    }
    CHECK(total == basis_size(5));
    CHECK(blocks[0].front() == 0);
  }

  TEST_CASE("kernel and first-order block")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem sys = assemble(1, field);
    // B Ψ₀ = 0
    CHECK(max_abs(sys.matrix.col(0)) < 1e-14);
    CHECK(max_abs(sys.matrix.row(0)) < 1e-14);
    // ⟨Ψ_{e_i}, B Ψ_{e_j}⟩ = ∫ā_ij μ = δ_ij ∫(ℓ₁ + 2ℓ₂)/3 μ
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto radial = [&](double r) {
      const Profiles p = field.profiles(r);
      return 4.0 * std::numbers::pi * r * r * (p.l1 + 2.0 * p.l2) / 3.0 * std::pow(2.0 * std::numbers::pi, -1.5)
             * std::exp(-0.5 * r * r);
    };
    const double mean = GK::integrate(radial, 0.0, 39.0, 25, 1e-14);
    const Eigen::MatrixXd block = sys.matrix.bottomRightCorner(3, 3);
    CHECK(max_abs(block - mean * Eigen::Matrix3d::Identity()) < 1e-10 * mean);
  }

  TEST_CASE("quadratic form against pointwise quadrature")
  {
    const auto& field = testing::shared_field(-1.0);
    const int d = 6;
    const GalerkinSystem sys = assemble(d, field);
    const NormEvaluator ne(field, d);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto f = testing::random_function(d, 1000 + seed);
      const double form = quadratic_form(sys, f);
      CAPTURE(seed);
      CHECK(rel_diff(form, ladder_form(ne, f)) < 1e-8);
      // energy form: ‖f‖²_{A,0} − ½∫∇·(āv) f²
      CHECK(rel_diff(form, ne.anorm_parts(f, 0.0).total() - drift_term(ne, f)) < 1e-7);
    }
    CHECK_THROWS_AS(quadratic_form(sys, testing::random_function(d + 1, 1)), CapacityError);
  }

  TEST_CASE("factorized and direct assembly agree")
  {
    for (double g : {-0.5, -1.0, -2.0}) {
      const auto& field = testing::shared_field(g);
      const GalerkinSystem a = assemble(6, field);
      const GalerkinSystem b = assemble_direct(6, field);
      CAPTURE(g);
      CHECK(max_abs(a.matrix - b.matrix) < 1e-7 * max_abs(a.matrix));
      CHECK(check_invariants(a).ok);
      CHECK(check_invariants(b, false).asymmetry < 1e-12);
    }
  }

  TEST_CASE("invariants")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem sys = assemble(8, field);
    const InvariantReport rep = check_invariants(sys);
    CHECK(rep.ok);
    CHECK(rep.asymmetry == 0.0);
    CHECK(rep.kernel_row < 1e-10);
    CHECK(rep.min_eigenvalue > -1e-10);
    // different parity classes never couple
    const BasisIndex basis(8);
    double cross = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        bool same = true;
        for (int k = 0; k < 3; ++k) {
          same = same && (basis[i][k] - basis[j][k]) % 2 == 0;
        }
        if (!same) {
          cross = std::max(cross, std::abs(sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
      }
    }
    CHECK(cross == 0.0);

    GalerkinSystem broken = sys;
    broken.matrix(1, 2) += 1.0;
    CHECK_THROWS_AS(check_invariants(broken), InvariantViolation);
    CHECK_FALSE(check_invariants(broken, false).ok);
  }

  TEST_CASE("refinement of the tensor rule")
  {
    const auto& field = testing::shared_field(-1.0);
    for (int d : {4, 10}) {
      const GalerkinSystem a = assemble(d, field);
      const GalerkinSystem b = assemble(d, field, {.min_points = 2 * a.points_per_axis});
      CAPTURE(d);
      CHECK(max_abs(a.matrix - b.matrix) < 1e-8 * max_abs(b.matrix));
    }
  }

  TEST_CASE("spectral gap and persistence")
  {
    const auto& field = testing::shared_field(-1.0);
    const GalerkinSystem sys = assemble(6, field);
    const double gap = spectral_gap(sys);
    CHECK(gap > 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.matrix, Eigen::EigenvaluesOnly);
    CHECK(gap == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-10));

    const auto path = std::filesystem::temp_directory_path() / "landau_galerkin_roundtrip.bin";
    save_system(sys, path);
    const GalerkinSystem back = load_system(path);
    std::filesystem::remove(path);
    CHECK(back.degree_cap == sys.degree_cap);
    CHECK(back.gamma == sys.gamma);
    CHECK(back.table_key == sys.table_key);
    CHECK(back.points_per_axis == sys.points_per_axis);
    CHECK((back.matrix.array() == sys.matrix.array()).all());
    CHECK(back.blocks == sys.blocks);
  }
}
