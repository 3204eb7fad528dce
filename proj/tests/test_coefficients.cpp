#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"
#include "landau/coefficients.hpp"
#include "landau/errors.hpp"
#include "oracles.hpp"

using namespace landau;
using landau::testing::rel_diff;

namespace {

Mat3 to_mat(const std::array<std::array<double, 3>, 3>& a)
{
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

double mat_rel(const Mat3& a, const Mat3& b)
{
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

Mat3 random_rotation(SeededRng& rng)
{
  Mat3 g;
  for (int i = 0; i < 9; ++i) {
    g(i / 3, i % 3) = rng.normal();
  }
  Mat3 q = Eigen::HouseholderQR<Mat3>(g).householderQ();
  if (q.determinant() < 0) {
    q.col(0) *= -1.0;
  }
  return q;
}

Vec3 apply(const Mat3& r, const Vec3& v)
{
  const Eigen::Vector3d w = r * Eigen::Vector3d(v[0], v[1], v[2]);
  return {w[0], w[1], w[2]};
}

testing::Point pt(const Vec3& v) { return {v[0], v[1], v[2]}; }

}  // namespace

TEST_SUITE("coefficients")
{
  TEST_CASE("potential range guard")
  {
    CHECK_THROWS_AS(PotentialConfig(0.5), ConfigError);
    CHECK_THROWS_AS(PotentialConfig(0.0), ConfigError);
    CHECK_THROWS_AS(PotentialConfig(-3.0), ConfigError);
    CHECK_NOTHROW(PotentialConfig(-2.99));
  }

  TEST_CASE("a_kernel")
  {
    const PotentialConfig c(-1.0);
    const Mat3 a = a_kernel({1.0, 0.0, 0.0}, c);
    CHECK((a - Eigen::Vector3d(0, 1, 1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() == 0.0);

    SeededRng rng(11);
    for (int k = 0; k < 20; ++k) {
      const Vec3 v = testing::random_point(rng, 5.0);
      const Mat3 m = a_kernel(v, c);
      const Eigen::Vector3d av = m * Eigen::Vector3d(v[0], v[1], v[2]);
      CHECK(av.norm() <= 1e-13 * m.norm() * std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
      CHECK((m - m.transpose()).norm() == 0.0);
    }

    Eigen::SelfAdjointEigenSolver<Mat3> es(a_kernel({0.0, 2.0, 0.0}, c));
    CHECK(std::abs(es.eigenvalues()[0]) < 1e-14);
    CHECK(es.eigenvalues()[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(es.eigenvalues()[2] == doctest::Approx(2.0).epsilon(1e-14));

    CHECK(a_kernel({0, 0, 0}, PotentialConfig(-1.5)).norm() == 0.0);
    CHECK_THROWS_AS(a_kernel({0, 0, 0}, PotentialConfig(-2.0)), SingularKernelError);
    CHECK_THROWS_AS(a_kernel({0, 0, 0}, PotentialConfig(-2.7)), SingularKernelError);
  }

  TEST_CASE("origin value matches the Gaussian moment")
  {
    for (double g : {-0.5, -1.0, -1.7, -2.0, -2.5, -2.9}) {
      const Profiles p = abar_profiles(0.0, PotentialConfig(g));
      const double expect = 2.0 / 3.0 * testing::gaussian_moment(g + 2.0);
      CAPTURE(g);
      CHECK(rel_diff(p.l1, expect) < 1e-9);
      CHECK(rel_diff(p.l2, expect) < 1e-9);
    }
  }

  TEST_CASE("engine agrees with the 3-d oracle")
  {
    const testing::OracleSettings os{.tol = 1e-8};
    for (double g : {-1.0, -2.7}) {
      const PotentialConfig c(g);
      SeededRng rng(17);
      for (int k = 0; k < 2; ++k) {
        const Vec3 v = testing::random_point(rng, 4.0);
        const Mat3 m = abar_derivative(v, MultiIndex{}, c);
        CAPTURE(g);
        CHECK(mat_rel(m, to_mat(testing::abar_oracle(g, pt(v), os))) < 1e-9);
      }
    }
  }

  TEST_CASE("table invariants")
  {
    const auto& field = testing::shared_field(-1.0);
    CHECK(field.min_eigenvalue() > 0.0);
    const Profiles p0 = field.profiles(0.0);
    CHECK(p0.l1 == p0.l2);
    CHECK((field.abar({0, 0, 0}) - p0.l1 * Mat3::Identity()).norm() == 0.0);
    CHECK_THROWS_AS(field.abar({0.0, 0.0, 40.5}), CapacityError);

    SeededRng rng(23);
    for (int k = 0; k < 20; ++k) {
      const Vec3 v = testing::random_point(rng, 20.0);
      const Mat3 a = field.abar(v);
      CHECK((a - a.transpose()).norm() == 0.0);
      const Mat3 r = random_rotation(rng);
      const Mat3 lhs = field.abar(apply(r, v));
      const Mat3 rhs = r * a * r.transpose();
      CHECK(mat_rel(lhs, rhs) < 1e-12);
    }
  }

  TEST_CASE("table reconstruction vs 3-d oracle")
  {
    const double g = -1.0;
    const auto& field = testing::shared_field(g);
    const testing::OracleSettings os{.tol = 1e-6};
    SeededRng rng(29);
    for (int k = 0; k < 5; ++k) {
      const Vec3 v = testing::random_point(rng, 8.0);
      CHECK(mat_rel(field.abar(v), to_mat(testing::abar_oracle(g, pt(v), os))) < 1e-6);
    }
  }

  TEST_CASE("asymptotic slopes at r = 30")
  {
    const double g = -1.0;
    const PotentialConfig c(g);
    const auto& field = testing::shared_field(g);
    const double r = 30.0;
    const Profiles p = field.profiles(r);
    const Profiles s = field.profile_slopes(r);
    CHECK(std::abs(r * s.l1 / p.l1 - g) < 0.05);
    CHECK(std::abs(r * s.l2 / p.l2 - (g + 2.0)) < 0.05);

    // two-radius log slopes from direct quadrature
    const Profiles lo = abar_profiles(29.0, c);
    const Profiles hi = abar_profiles(31.0, c);
    const double k = std::log(31.0 / 29.0);
    CHECK(std::abs(std::log(hi.l1 / lo.l1) / k - g) < 0.05);
    CHECK(std::abs(std::log(hi.l2 / lo.l2) / k - (g + 2.0)) < 0.05);
  }

  TEST_CASE("profile derivatives are consistent")
  {
    const double g = -1.0;
    const auto& field = testing::shared_field(g);
    for (double r : {0.3, 1.7, 6.0, 15.0}) {
      const double h = 1e-3 * std::max(1.0, r);
      auto fd = [&](auto f) { return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h); };
      const Profiles s = field.profile_slopes(r);
      CAPTURE(r);
      CHECK(rel_diff(s.l1, fd([&](double x) { return field.profiles(x).l1; })) < 1e-6);
      CHECK(rel_diff(s.l2, fd([&](double x) { return field.profiles(x).l2; })) < 1e-6);
      // d = ∇·(ℓ₁(|v|) v) = 3ℓ₁ + rℓ₁'
      const double d = field.drift_divergence(r);
      CHECK(rel_diff(d, 3.0 * field.profiles(r).l1 + r * s.l1) < 1e-7);
    }
  }

  TEST_CASE("derivative convolutions")
  {
    const double g = -1.0;
    const PotentialConfig c(g);
    const auto& field = testing::shared_field(g);
    SeededRng rng(31);
    for (int k = 0; k < 4; ++k) {
      const Vec3 v = testing::random_point(rng, 6.0);
      CHECK(mat_rel(abar_derivative(v, MultiIndex{}, c), field.abar(v)) < 1e-8);

      const double h = 1e-2;
      auto at = [&](double dx) { return field.abar({v[0] + dx, v[1], v[2]}); };
      const Mat3 fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      CHECK(mat_rel(abar_derivative(v, MultiIndex::unit(0), c), fd) < 1e-4);
    }
  }

  TEST_CASE("drift identity and potential")
  {
    const double g = -1.0;
    const auto& field = testing::shared_field(g);
    const testing::OracleSettings os{.tol = 1e-6};
    SeededRng rng(37);
    for (int k = 0; k < 3; ++k) {
      const Vec3 v = testing::random_point(rng, 5.0);
      const auto b = testing::drift_oracle(g, pt(v), os);
      const auto dp = field.drift_and_potential(v);
      const double scale = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(dp.b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) < 1e-6 * scale);
      }
      const Eigen::Vector3d w(v[0], v[1], v[2]);
      CHECK(rel_diff(dp.q, w.dot(field.abar(v) * w)) < 1e-13);
    }
    CHECK(field.drift_and_potential({0, 0, 0}).q == 0.0);
  }

  TEST_CASE("cache round trip is bit exact")
  {
    const auto& field = testing::shared_field(-1.0);
    const auto path = std::filesystem::temp_directory_path() / "landau_roundtrip_test.csv";
    field.save_csv(path);
    const CoefficientField back = CoefficientField::load_csv(path);
    CHECK(back.cache_key() == field.cache_key());
    SeededRng rng(41);
    bool same = true;
    for (int k = 0; k < 50; ++k) {
      const Vec3 v = testing::random_point(rng, 39.0);
      same = same && (back.abar(v) - field.abar(v)).cwiseAbs().maxCoeff() == 0.0;
      same = same && back.drift_divergence(v[0] < 0 ? -v[0] : v[0]) == field.drift_divergence(v[0] < 0 ? -v[0] : v[0]);
    }
    CHECK(same);
    std::filesystem::remove(path);

    bool hit = false;
    const auto again = CoefficientField::load_or_build(PotentialConfig(-1.0), {}, testing::cache_dir(), &hit);
    CHECK(hit);
    CHECK(again.cache_key() == field.cache_key());
  }

  TEST_CASE("halving the table spacing")
  {
    const double g = -1.0;
    const auto& coarse = testing::shared_field(g);
    TableSettings fine_settings;
    fine_settings.radii = 2 * fine_settings.radii - 1;
    const auto& fine = testing::shared_field(g, fine_settings);
    double worst = 0.0;
    for (const Vec3& v : probe_points(39.0, 40)) {
      worst = std::max(worst, mat_rel(coarse.abar(v), fine.abar(v)));
    }
    CHECK(worst < 1e-7);
  }

  TEST_CASE("substitution path")
  {
    CHECK(ConvolutionEngine(PotentialConfig(-2.9), {MultiIndex{}}).substitution_engaged());
    CHECK_FALSE(ConvolutionEngine(PotentialConfig(-1.0), {MultiIndex{}}).substitution_engaged());
    const Profiles p = abar_profiles(0.5, PotentialConfig(-2.9));
    CHECK(p.l1 > 0.0);
    CHECK(p.l2 > 0.0);
  }

  TEST_CASE("bound probes")
  {
    const PotentialConfig c(-1.0);
    const auto rows = probe_derivative_bound(c, 3, probe_points(10.0, 4));
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
      CHECK(std::isfinite(row.max_ratio));
      CHECK(row.max_ratio > 0.0);
      CHECK(row.argmax_beta.order() == row.order);
    }
    const RatioRange pm = probe_power_moment(c, {0.0, 1.0, 5.0, 15.0, 30.0});
    CHECK(pm.lower > 0.0);
    CHECK(pm.upper < 10.0);
    // large-r limit of the ratio is 1
    const RatioRange far = probe_power_moment(c, {30.0});
    CHECK(std::abs(far.lower - 1.0) < 0.01);

    const auto& field = testing::shared_field(-1.0);
    const RatioRange growth = probe_abar_growth(field, {0.0, 1.0, 5.0, 20.0, 39.0});
    CHECK(growth.lower > 0.0);
    CHECK(growth.upper < 10.0);
  }
}
