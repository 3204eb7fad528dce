#include "landau/norms.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "landau/errors.hpp"

namespace landau {

Vec3 pv_project(const Vec3& g, const Vec3& v, OriginPolicy policy)
{
  const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  if (r2 == 0.0) {
    return policy == OriginPolicy::parallel ? g : Vec3{0.0, 0.0, 0.0};
  }
  const double s = (g[0] * v[0] + g[1] * v[1] + g[2] * v[2]) / r2;
  return {s * v[0], s * v[1], s * v[2]};
}

NormEvaluator::NormEvaluator(const CoefficientField& field, int max_degree, NormOptions options)
    : field_(&field)
    , max_degree_(max_degree)
    , options_(options)
{
  if (max_degree < 0) {
    throw std::invalid_argument("NormEvaluator: negative max degree");
  }
}

const NormEvaluator::Layer& NormEvaluator::layer(double theta) const
{
  std::lock_guard lock(mutex_);
  auto& slot = layers_[theta];
  if (!slot) {
    // gradients raise the cap by one; ā adds angular degree two
    SphericalGrid grid(max_degree_ + 1, theta, options_.extra_radial, 2);
    auto l = std::make_unique<Layer>(Layer{std::move(grid), {}, {}, {}, {}, {}});
    const auto n = l->grid.size();
    l->l1.resize(n);
    l->l2.resize(n);
    l->q.resize(n);
    l->radius.resize(n);
    l->direction.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& v = l->grid.node(i);
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      const Profiles p = field_->profiles(r);
      l->l1[i] = p.l1;
      l->l2[i] = p.l2;
      l->q[i] = p.l1 * r * r;
      l->radius[i] = r;
      l->direction[i] = r > 0.0 ? Vec3{v[0] / r, v[1] / r, v[2] / r} : Vec3{0.0, 0.0, 0.0};
    }
    slot = std::move(l);
  }
  return *slot;
}

void NormEvaluator::check_cap(const SpectralFunction& f) const
{
  if (f.degree_cap() > max_degree_) {
    throw CapacityError("NormEvaluator: degree cap " + std::to_string(f.degree_cap()) + " exceeds "
                        + std::to_string(max_degree_));
  }
}

double NormEvaluator::weighted_l2(const SpectralFunction& f, double theta) const
{
  check_cap(f);
  const Layer& l = layer(theta);
  const auto fv = l.grid.evaluate(f);
  const auto w = l.grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    s += w[i] * fv[i] * fv[i];
  }
  return std::sqrt(s);
}

AnormParts NormEvaluator::anorm_parts(const SpectralFunction& f, double theta) const
{
  check_cap(f);
  const Layer& l = layer(theta);
  const auto fv = l.grid.evaluate(f);
  const std::array<std::vector<double>, 3> g = {l.grid.evaluate(derivative(f, 0)), l.grid.evaluate(derivative(f, 1)),
                                                l.grid.evaluate(derivative(f, 2))};
  const auto w = l.grid.weights();
  AnormParts out{0.0, 0.0};
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const Vec3& e = l.direction[i];
    const double par = e[0] * g[0][i] + e[1] * g[1][i] + e[2] * g[2][i];
    const double all = g[0][i] * g[0][i] + g[1][i] * g[1][i] + g[2][i] * g[2][i];
    out.gradient += w[i] * (l.l2[i] * all + (l.l1[i] - l.l2[i]) * par * par);
    out.potential += 0.25 * w[i] * l.q[i] * fv[i] * fv[i];
  }
  return out;
}

double NormEvaluator::anorm(const SpectralFunction& f, double theta) const
{
  return std::sqrt(anorm_parts(f, theta).total());
}

CoercivityRecord NormEvaluator::coercivity_probe(const SpectralFunction& f, double theta) const
{
  check_cap(f);
  const double g = gamma();
  CoercivityRecord rec{};
  rec.lhs = anorm_parts(f, theta).total();

  const std::array<SpectralFunction, 3> grad = {derivative(f, 0), derivative(f, 1), derivative(f, 2)};
  auto split = [&](double weight_exponent, double& par_out, double& perp_out) {
    const Layer& l = layer(weight_exponent);
    const std::array<std::vector<double>, 3> gv = {l.grid.evaluate(grad[0]), l.grid.evaluate(grad[1]),
                                                   l.grid.evaluate(grad[2])};
    const auto w = l.grid.weights();
    par_out = 0.0;
    perp_out = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Vec3& e = l.direction[i];
      const double par = e[0] * gv[0][i] + e[1] * gv[1][i] + e[2] * gv[2][i];
      const double all = gv[0][i] * gv[0][i] + gv[1][i] * gv[1][i] + gv[2][i] * gv[2][i];
      par_out += w[i] * par * par;
      perp_out += w[i] * (all - par * par);
    }
  };
  double par_lo = 0.0;
  double perp_lo = 0.0;
  split(0.5 * g + theta, par_lo, perp_lo);
  double par_hi = 0.0;
  double perp_hi = 0.0;
  split(1.0 + 0.5 * g + theta, par_hi, perp_hi);
  rec.parallel = par_lo;
  rec.perpendicular = perp_hi;
  const double z = weighted_l2(f, 1.0 + 0.5 * g + theta);
  rec.zeroth = z * z;
  rec.ratio = rec.lhs / (rec.parallel + rec.perpendicular + rec.zeroth);
  rec.gradient = std::sqrt(par_lo + perp_lo);
  rec.ratio_simplified = std::sqrt(rec.lhs) / (rec.gradient + z);
  return rec;
}

void NormEvaluator::basis_tables(const Layer& l, int cap, Eigen::MatrixXd& psi,
                                 std::array<Eigen::MatrixXd, 3>& grad) const
{
  if (cap > max_degree_) {
    throw CapacityError("NormEvaluator: Gram degree cap exceeds " + std::to_string(max_degree_));
  }
  const BasisIndex basis(cap);
  const auto n = static_cast<Eigen::Index>(l.grid.size());
  const auto m = static_cast<Eigen::Index>(basis.size());
  psi.resize(n, m);
  for (auto& gm : grad) {
    gm.resize(n, m);
  }
  const auto side = static_cast<std::size_t>(cap) + 2;
  std::array<std::vector<double>, 3> p, dp;
  for (int j = 0; j < 3; ++j) {
    p[static_cast<std::size_t>(j)].resize(side);
    dp[static_cast<std::size_t>(j)].resize(side - 1);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& v = l.grid.node(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < 3; ++j) {
      hermite_values_1d(v[j], p[j]);
      for (std::size_t k = 0; k + 1 < side; ++k) {
        // ψ_k' = (√k ψ_{k−1} − √(k+1) ψ_{k+1}) / 2
        const double lower = k > 0 ? std::sqrt(static_cast<double>(k)) * p[j][k - 1] : 0.0;
        dp[j][k] = 0.5 * (lower - std::sqrt(static_cast<double>(k + 1)) * p[j][k + 1]);
      }
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      const auto& a = basis[static_cast<std::size_t>(c)];
      const auto a0 = static_cast<std::size_t>(a[0]);
      const auto a1 = static_cast<std::size_t>(a[1]);
      const auto a2 = static_cast<std::size_t>(a[2]);
      psi(i, c) = p[0][a0] * p[1][a1] * p[2][a2];
      grad[0](i, c) = dp[0][a0] * p[1][a1] * p[2][a2];
      grad[1](i, c) = p[0][a0] * dp[1][a1] * p[2][a2];
      grad[2](i, c) = p[0][a0] * p[1][a1] * dp[2][a2];
    }
  }
}

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s)
{
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

}  // namespace

Eigen::MatrixXd NormEvaluator::l2_gram(int degree_cap, double theta) const
{
  const Layer& l = layer(theta);
  Eigen::MatrixXd psi;
  std::array<Eigen::MatrixXd, 3> grad;
  basis_tables(l, degree_cap, psi, grad);
  return psi.transpose() * as_vector(l.grid.weights()).asDiagonal() * psi;
}

Eigen::MatrixXd NormEvaluator::anorm_gram(int degree_cap, double theta) const
{
  const Layer& l = layer(theta);
  Eigen::MatrixXd psi;
  std::array<Eigen::MatrixXd, 3> grad;
  basis_tables(l, degree_cap, psi, grad);
  const auto n = static_cast<Eigen::Index>(l.grid.size());
  const auto w = l.grid.weights();
  Eigen::VectorXd wq(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    wq[i] = 0.25 * w[static_cast<std::size_t>(i)] * l.q[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd g = psi.transpose() * wq.asDiagonal() * psi;
  Eigen::VectorXd wjk(n);
  for (int j = 0; j < 3; ++j) {
    for (int k = j; k < 3; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const Vec3& e = l.direction[ii];
        const double a = (j == k ? l.l2[ii] : 0.0)
                         + (l.l1[ii] - l.l2[ii]) * e[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(k)];
        wjk[i] = w[ii] * a;
      }
      const Eigen::MatrixXd t = grad[static_cast<std::size_t>(j)].transpose() * wjk.asDiagonal()
                                * grad[static_cast<std::size_t>(k)];
      g += t;
      if (j != k) {
        g += t.transpose();
      }
    }
  }
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd NormEvaluator::coercivity_gram(int degree_cap, double theta) const
{
  const double g = gamma();
  Eigen::MatrixXd out;
  // ‖P_v∇f‖² at weight exponent γ/2+θ, the rest at 1+γ/2+θ
  for (int part = 0; part < 2; ++part) {
    const Layer& l = layer(part == 0 ? 0.5 * g + theta : 1.0 + 0.5 * g + theta);
    Eigen::MatrixXd psi;
    std::array<Eigen::MatrixXd, 3> grad;
    basis_tables(l, degree_cap, psi, grad);
    const auto n = static_cast<Eigen::Index>(l.grid.size());
    const auto w = as_vector(l.grid.weights());
    Eigen::MatrixXd radial_part = grad[0];
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3& e = l.direction[static_cast<std::size_t>(i)];
      radial_part.row(i) = e[0] * grad[0].row(i) + e[1] * grad[1].row(i) + e[2] * grad[2].row(i);
    }
    const Eigen::MatrixXd par = radial_part.transpose() * w.asDiagonal() * radial_part;
    if (part == 0) {
      out = par;
    } else {
      Eigen::MatrixXd all = psi.transpose() * w.asDiagonal() * psi;
      for (const auto& gm : grad) {
        all += gm.transpose() * w.asDiagonal() * gm;
      }
      out += all - par;
    }
  }
  return 0.5 * (out + out.transpose());
}

double min_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& r)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, r, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw InvariantViolation("min_generalized_eigenvalue: right-hand Gram matrix is not positive definite");
  }
  return es.eigenvalues()[0];
}

}  // namespace landau
