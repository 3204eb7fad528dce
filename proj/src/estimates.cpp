#include "landau/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/random.hpp"

namespace landau {

namespace {

std::string alpha_label(const char* name, const MultiIndex& a)
{
  return std::string(name) + "=" + std::to_string(a[0]) + ":" + std::to_string(a[1]) + ":" + std::to_string(a[2]);
}

// columns c0, c1, n̂ of a rotation taking e₃ to n̂
Mat3 frame_for(const Vec3& n)
{
  Vec3 a = std::abs(n[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const double d = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
  Vec3 c0{a[0] - d * n[0], a[1] - d * n[1], a[2] - d * n[2]};
  const double len = std::sqrt(c0[0] * c0[0] + c0[1] * c0[1] + c0[2] * c0[2]);
  for (auto& x : c0) {
    x /= len;
  }
  const Vec3 c1{n[1] * c0[2] - n[2] * c0[1], n[2] * c0[0] - n[0] * c0[2], n[0] * c0[1] - n[1] * c0[0]};
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    r(i, 0) = c0[static_cast<std::size_t>(i)];
    r(i, 1) = c1[static_cast<std::size_t>(i)];
    r(i, 2) = n[static_cast<std::size_t>(i)];
  }
  return r;
}

template <class F>
void for_each_below(const MultiIndex& alpha, F&& f)
{
  for (int b0 = 0; b0 <= alpha[0]; ++b0) {
    for (int b1 = 0; b1 <= alpha[1]; ++b1) {
      for (int b2 = 0; b2 <= alpha[2]; ++b2) {
        f(MultiIndex(b0, b1, b2));
      }
    }
  }
}

// ∫⟨v⟩^{2θ}[ā∇g·∇g + ¼(āv·v)g²] with gradient columns gx, gy, gz and value column g
double anorm2_at_nodes(const SphericalGrid& grid, const AbarDerivativeNodes& an, const Eigen::MatrixXd& vals,
                       Eigen::Index g, const std::array<Eigen::Index, 3>& grad)
{
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    const Mat3& a = an.at(n, 0);
    const Vec3& v = grid.node(n);
    double quad = 0.0;
    double pot = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        quad += a(j, k) * vals(i, grad[static_cast<std::size_t>(j)]) * vals(i, grad[static_cast<std::size_t>(k)]);
        pot += a(j, k) * v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
      }
    }
    s += w[n] * (quad + 0.25 * pot * vals(i, g) * vals(i, g));
  }
  return s;
}

void finish_max(EstimateReport& rep)
{
  rep.constant = 0.0;
  for (const auto& r : rep.rows) {
    rep.constant = std::max(rep.constant, r.ratio);
  }
}

Provenance describe(const CoefficientField& field, const EstimateSettings& s, int cap)
{
  Provenance p;
  p.add("gamma", field.config().gamma());
  p.add("D", cap);
  p.add("seed", static_cast<long long>(s.seed));
  p.add("samples", s.samples);
  p.add("decay", s.decay);
  p.add("extra_radial", s.extra_radial);
  p.add("table_key", fnv1a_hex(field.cache_key()));
  p.add("quadrature_rel_tol", s.quadrature.rel_tol);
  return p;
}

}  // namespace

AbarDerivativeNodes::AbarDerivativeNodes(const SphericalGrid& grid, const PotentialConfig& config, int max_order,
                                         ConvolutionSettings settings)
    : max_order_(max_order)
    , betas_(max_order)
    , nodes_(grid.size())
{
  if (max_order < 0) {
    throw std::invalid_argument("AbarDerivativeNodes: negative order");
  }
  const ConvolutionEngine engine(config, betas_.indices(), settings);
  const std::size_t nb = betas_.size();
  data_.resize(nodes_ * nb);
  const std::size_t per_radius = nodes_ / static_cast<std::size_t>(grid.radial_points());
  // Π_s (R_{l_s}·ξ) expanded in monomials ξ^γ, indexed by graded position
  std::vector<double> poly(nb), next(nb);
  for (std::size_t shell = 0; shell < static_cast<std::size_t>(grid.radial_points()); ++shell) {
    const Vec3& v0 = grid.node(shell * per_radius);
    const double r = std::sqrt(v0[0] * v0[0] + v0[1] * v0[1] + v0[2] * v0[2]);
    const std::vector<Mat3> t = engine.evaluate({0.0, 0.0, r});
    for (std::size_t n = shell * per_radius; n < (shell + 1) * per_radius; ++n) {
      const Vec3& v = grid.node(n);
      const Mat3 rot = frame_for({v[0] / r, v[1] / r, v[2] / r});
      for (std::size_t b = 0; b < nb; ++b) {
        const MultiIndex& beta = betas_[b];
        std::fill(poly.begin(), poly.end(), 0.0);
        poly[0] = 1.0;
        int order = 0;
        for (int l = 0; l < 3; ++l) {
          for (int rep = 0; rep < beta[l]; ++rep) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t p = graded_position(MultiIndex{}); p < basis_size(order); ++p) {
              if (poly[p] == 0.0) {
                continue;
              }
              const MultiIndex& g = betas_[p];
              for (int m = 0; m < 3; ++m) {
                next[graded_position(g.raised(m))] += poly[p] * rot(l, m);
              }
            }
            std::swap(poly, next);
            ++order;
          }
        }
        Mat3 s = Mat3::Zero();
        const std::size_t lo = order == 0 ? 0 : basis_size(order - 1);
        for (std::size_t p = lo; p < basis_size(order); ++p) {
          s += poly[p] * t[p];
        }
        data_[n * nb + b] = rot * s * rot.transpose();
      }
    }
  }
}

NodeTable::NodeTable(const SphericalGrid& grid, int cap)
    : cap_(cap)
{
  const BasisIndex basis(cap);
  phi_.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(basis.size()));
  const auto side = static_cast<std::size_t>(cap) + 1;
  std::array<std::vector<double>, 3> p;
  for (auto& x : p) {
    x.resize(side);
  }
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Vec3& v = grid.node(n);
    for (std::size_t j = 0; j < 3; ++j) {
      hermite_values_1d(v[j], p[j]);
    }
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto& a = basis[c];
      phi_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
          p[0][static_cast<std::size_t>(a[0])] * p[1][static_cast<std::size_t>(a[1])]
          * p[2][static_cast<std::size_t>(a[2])];
    }
  }
}

Eigen::MatrixXd NodeTable::evaluate(const std::vector<SpectralFunction>& fs) const
{
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(phi_.cols(), static_cast<Eigen::Index>(fs.size()));
  for (std::size_t k = 0; k < fs.size(); ++k) {
    if (fs[k].degree_cap() > cap_) {
      throw CapacityError("NodeTable: degree cap " + std::to_string(fs[k].degree_cap()) + " exceeds "
                          + std::to_string(cap_));
    }
    // graded order: a smaller cap is a prefix
    const auto co = fs[k].coefficients();
    for (std::size_t i = 0; i < co.size(); ++i) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = co[i];
    }
  }
  return phi_ * c;
}

SpectralFunction sample_function(int cap, std::uint64_t seed, std::uint64_t index, double decay)
{
  SeededRng rng(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
  SpectralFunction f(cap);
  const BasisIndex basis(cap);
  auto c = f.coefficients();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c[i] = rng.normal() * std::pow(decay, basis[i].order());
  }
  return f;
}

double EstimateReport::value(const std::string& key) const
{
  for (const auto& [k, v] : measured) {
    if (k == key) {
      return v;
    }
  }
  throw std::out_of_range("EstimateReport: no measurement named " + key);
}

EstimateReport validate_lemma22(const CoefficientField& field, const EstimateSettings& settings,
                                const std::vector<double>& thetas, int beta_max)
{
  const int cap = settings.degree_cap;
  EstimateReport rep;
  rep.inequality = "trilinear";
  rep.sample_description = describe(field, settings, cap);
  rep.sample_description.add("beta_max", beta_max);

  std::vector<SpectralFunction> fs;
  for (int s = 0; s < settings.samples; ++s) {
    const auto f = sample_function(cap, settings.seed, 2 * static_cast<std::uint64_t>(s), settings.decay);
    const auto g = sample_function(cap, settings.seed, 2 * static_cast<std::uint64_t>(s) + 1, settings.decay);
    for (const auto* h : {&f, &g}) {
      for (int j = 0; j < 3; ++j) {
        fs.push_back(derivative(*h, j));
      }
      fs.push_back(*h);
    }
  }
  std::vector<double> per_order(static_cast<std::size_t>(beta_max) + 1, 0.0);
  for (double theta : thetas) {
    const SphericalGrid grid(cap + 1, theta, settings.extra_radial, 2 + beta_max);
    const AbarDerivativeNodes an(grid, field.config(), beta_max, settings.quadrature);
    const NodeTable table(grid, cap + 1);
    const Eigen::MatrixXd vals = table.evaluate(fs);
    const auto w = grid.weights();
    double worst = 0.0;
    for (int s = 0; s < settings.samples; ++s) {
      const auto base = static_cast<Eigen::Index>(8 * s);
      const double af = std::sqrt(anorm2_at_nodes(grid, an, vals, base + 3, {base, base + 1, base + 2}));
      const double ag = std::sqrt(anorm2_at_nodes(grid, an, vals, base + 7, {base + 4, base + 5, base + 6}));
      for (std::size_t b = 0; b < an.betas().size(); ++b) {
        double sum = 0.0;
        for (std::size_t n = 0; n < grid.size(); ++n) {
          const auto i = static_cast<Eigen::Index>(n);
          const Mat3& d = an.at(n, b);
          double loc = 0.0;
          for (int ii = 0; ii < 3; ++ii) {
            for (int jj = 0; jj < 3; ++jj) {
              loc += d(ii, jj) * vals(i, base + jj) * vals(i, base + 4 + ii);
            }
          }
          sum += w[n] * loc;
        }
        const MultiIndex& beta = an.betas()[b];
        const double ratio = std::abs(sum) / (sqrt_factorial(beta) * af * ag);
        rep.rows.push_back({static_cast<std::size_t>(s), alpha_label("beta", beta), theta, ratio});
        worst = std::max(worst, ratio);
        auto& po = per_order[static_cast<std::size_t>(beta.order())];
        po = std::max(po, ratio);
      }
    }
    rep.measured.emplace_back("max_ratio_theta=" + fmt17(theta), worst);
  }
  for (int k = 0; k <= beta_max; ++k) {
    rep.measured.emplace_back("max_ratio_order=" + std::to_string(k), per_order[static_cast<std::size_t>(k)]);
  }
  finish_max(rep);
  return rep;
}

double CommutatorTerms::admissible_c0(bool beta2_variant) const
{
  const double num = lhs + anorm2;
  if (!(num > 0.0)) {
    return 0.0;
  }
  const double den = first + second + (beta2_variant ? third_beta2 : third);
  if (!(den > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return num / den;
}

struct CommutatorEvaluator::Layer
{
  int order;
  double theta;
  SphericalGrid grid;
  NodeTable table;
  AbarDerivativeNodes abar;
  BasisIndex up;    // |γ| ≤ order + 1
  BasisIndex down;  // |γ| ≤ order
  std::vector<double> drift;      // 2θ/(1+r²)
  std::vector<double> l2_weight;  // ⟨v⟩^γ
};

CommutatorEvaluator::CommutatorEvaluator(const CoefficientField& field, int degree_cap, int m_max, int extra_radial,
                                         ConvolutionSettings settings, std::vector<double> thetas)
    : field_(&field)
    , degree_cap_(degree_cap)
    , m_max_(m_max)
    , alphas_(m_max)
{
  if (m_max < 0 || degree_cap < 0) {
    throw std::invalid_argument("CommutatorEvaluator: negative degree");
  }
  if (!thetas.empty() && thetas.size() != static_cast<std::size_t>(m_max) + 1) {
    throw std::invalid_argument("CommutatorEvaluator: need one θ per derivative order");
  }
  const double g = field.config().gamma();
  for (int m = 0; m <= m_max; ++m) {
    const double theta = thetas.empty() ? 0.5 * g * m : thetas[static_cast<std::size_t>(m)];
    SphericalGrid grid(degree_cap + m + 1, theta, extra_radial, 2 + m);
    NodeTable table(grid, degree_cap + m + 1);
    AbarDerivativeNodes abar(grid, field.config(), m, settings);
    auto l = std::make_shared<Layer>(
        Layer{m, theta, std::move(grid), std::move(table), std::move(abar), BasisIndex(m + 1), BasisIndex(m), {}, {}});
    for (std::size_t n = 0; n < l->grid.size(); ++n) {
      const Vec3& v = l->grid.node(n);
      const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      l->drift.push_back(2.0 * theta / (1.0 + r2));
      l->l2_weight.push_back(std::pow(1.0 + r2, 0.5 * g));
    }
    layers_.push_back(std::move(l));
  }
}

std::vector<CommutatorTerms> CommutatorEvaluator::evaluate(const SpectralFunction& f) const
{
  if (f.degree_cap() > degree_cap_) {
    throw CapacityError("CommutatorEvaluator: degree cap " + std::to_string(f.degree_cap()) + " exceeds "
                        + std::to_string(degree_cap_));
  }
  std::vector<CommutatorTerms> out(alphas_.size());
  const std::array<SpectralFunction, 3> u = {ladder(f, 0, Ladder::lower), ladder(f, 1, Ladder::lower),
                                             ladder(f, 2, Ladder::lower)};
  for (const auto& lp : layers_) {
    const Layer& l = *lp;
    const auto n1 = static_cast<Eigen::Index>(l.up.size());
    const auto n0 = static_cast<Eigen::Index>(l.down.size());
    std::vector<SpectralFunction> fs;
    for (const auto& g : l.up.indices()) {
      fs.push_back(derivative(f, g));
    }
    for (int k = 0; k < 3; ++k) {
      for (const auto& g : l.down.indices()) {
        fs.push_back(derivative(u[static_cast<std::size_t>(k)], g));
      }
    }
    const Eigen::MatrixXd vals = l.table.evaluate(fs);
    auto dcol = [&](const MultiIndex& g) { return static_cast<Eigen::Index>(l.up.position(g)); };
    auto ucol = [&](int k, const MultiIndex& g) {
      return n1 + k * n0 + static_cast<Eigen::Index>(l.down.position(g));
    };
    const auto w = l.grid.weights();
    const std::size_t nn = l.grid.size();

    // ‖∂^γf‖²_{A,θ} for |γ| ≤ order
    std::vector<double> an2(l.down.size());
    for (std::size_t p = 0; p < l.down.size(); ++p) {
      const MultiIndex& g = l.down[p];
      an2[p] = anorm2_at_nodes(l.grid, l.abar, vals, dcol(g), {dcol(g.raised(0)), dcol(g.raised(1)), dcol(g.raised(2))});
    }

    // h_j^{(γ)} = Σ_k Σ_{β≤γ} C(γ,β) ∂^βā_jk ∂^{γ−β}u_k at every node
    auto h_at = [&](std::size_t n, const MultiIndex& gamma, Eigen::Vector3d& hv) {
      hv.setZero();
      const auto i = static_cast<Eigen::Index>(n);
      for_each_below(gamma, [&](const MultiIndex& beta) {
        const double c = binomial(gamma, beta);
        const Mat3& d = l.abar.at(n, l.abar.betas().position(beta));
        const MultiIndex rest = gamma - beta;
        for (int k = 0; k < 3; ++k) {
          const double uk = c * vals(i, ucol(k, rest));
          for (int j = 0; j < 3; ++j) {
            hv[j] += d(j, k) * uk;
          }
        }
      });
    };

    for (const auto& alpha : indices_of_order(l.order)) {
      const Eigen::Index fa = dcol(alpha);
      double form = 0.0;
      double wt2 = 0.0;
      Eigen::Vector3d ha, hl;
      for (std::size_t n = 0; n < nn; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const Vec3& v = l.grid.node(n);
        const double fv = vals(i, fa);
        h_at(n, alpha, ha);
        double loc = 0.0;
        for (int j = 0; j < 3; ++j) {
          const auto js = static_cast<std::size_t>(j);
          // A_{−,j}∂^αf = v_j/2·∂^αf + ∂^{α+e_j}f
          const double am = 0.5 * v[js] * fv + vals(i, dcol(alpha.raised(j)));
          loc += ha[j] * (am + l.drift[n] * v[js] * fv);
          if (alpha[j] > 0) {
            h_at(n, alpha.lowered(j), hl);
            loc += 0.5 * alpha[j] * hl[j] * fv;
          }
        }
        form += w[n] * loc;
        wt2 += w[n] * l.l2_weight[n] * fv * fv;
      }

      CommutatorTerms t{};
      t.lhs = -form;
      t.anorm2 = an2[l.down.position(alpha)];
      t.weighted = std::sqrt(wt2);
      const double a_norm = std::sqrt(t.anorm2);
      t.first = std::sqrt(1.0 + l.theta * l.theta) * a_norm * t.weighted;
      t.second = 0.0;
      t.third = 0.0;
      t.third_beta2 = 0.0;
      for_each_below(alpha, [&](const MultiIndex& beta) {
        const int b = beta.order();
        if (b == 0) {
          return;
        }
        const double c = binomial(alpha, beta) * sqrt_factorial(beta) * std::sqrt(an2[l.down.position(alpha - beta)]);
        t.second += c * (a_norm + std::abs(l.theta) * t.weighted);
        t.third += c * b * t.weighted;
        if (b >= 2) {
          t.third_beta2 += c * b * t.weighted;
        }
      });
      t.lower_den = 0.0;
      if (l.order >= 1) {
        int j0 = 0;
        for (int j = 1; j < 3; ++j) {
          if (alpha[j] > alpha[j0]) {
            j0 = j;
          }
        }
        t.lower_den = std::sqrt(an2[l.down.position(alpha.lowered(j0))]);
      }
      t.plain_l2 = l.order == 0 ? wt2 : 0.0;
      out[alphas_.position(alpha)] = t;
    }
  }
  return out;
}

CommutatorReports validate_prop31(const CoefficientField& field, const EstimateSettings& settings, int m_max)
{
  const int cap = settings.degree_cap;
  const CommutatorEvaluator ev(field, cap, m_max, settings.extra_radial, settings.quadrature);
  CommutatorReports r;
  r.c0.inequality = "commutator";
  r.c0_beta2.inequality = "commutator_beta2";
  r.zero_order.inequality = "zero_order";
  r.lower_order.inequality = "lower_order";
  for (auto* rep : {&r.c0, &r.c0_beta2, &r.zero_order, &r.lower_order}) {
    rep->sample_description = describe(field, settings, cap);
    rep->sample_description.add("m_max", m_max);
    rep->sample_description.add("theta", "gamma*|alpha|/2");
  }
  const double g = field.config().gamma();
  std::vector<double> per_order(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (int s = 0; s < settings.samples; ++s) {
    const auto f = sample_function(cap, settings.seed, static_cast<std::uint64_t>(s), settings.decay);
    const auto terms = ev.evaluate(f);
    for (std::size_t a = 0; a < terms.size(); ++a) {
      const MultiIndex& alpha = ev.alphas()[a];
      const CommutatorTerms& t = terms[a];
      const double theta = 0.5 * g * alpha.order();
      const auto sample = static_cast<std::size_t>(s);
      const std::string label = alpha_label("alpha", alpha);
      const double c0 = t.admissible_c0(false);
      r.c0.rows.push_back({sample, label, theta, c0});
      r.c0_beta2.rows.push_back({sample, label, theta, t.admissible_c0(true)});
      per_order[static_cast<std::size_t>(alpha.order())] =
          std::max(per_order[static_cast<std::size_t>(alpha.order())], c0);
      if (alpha.order() == 0) {
        r.zero_order.rows.push_back({sample, label, theta, std::max(0.0, (t.lhs + 0.5 * t.anorm2) / t.plain_l2)});
      } else {
        r.lower_order.rows.push_back({sample, label, theta, t.weighted / t.lower_den});
      }
    }
  }
  for (auto* rep : {&r.c0, &r.c0_beta2, &r.zero_order, &r.lower_order}) {
    finish_max(*rep);
  }
  for (int m = 0; m <= m_max; ++m) {
    r.c0.measured.emplace_back("max_c0_order=" + std::to_string(m), per_order[static_cast<std::size_t>(m)]);
  }
  r.c0.measured.emplace_back("C0", r.c0.constant);
  r.c0_beta2.measured.emplace_back("C0", r.c0_beta2.constant);
  r.zero_order.measured.emplace_back("C0", r.zero_order.constant);
  return r;
}

EstimateReport validate_coercivity(const CoefficientField& field, const EstimateSettings& settings,
                                   const std::vector<double>& thetas)
{
  const int cap = settings.degree_cap;
  const NormEvaluator ne(field, cap, {settings.extra_radial});
  EstimateReport rep;
  rep.inequality = "coercivity";
  rep.sample_description = describe(field, settings, cap);
  rep.constant = std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    double lo = std::numeric_limits<double>::infinity();
    for (int s = 0; s < settings.samples; ++s) {
      const auto f = sample_function(cap, settings.seed, static_cast<std::uint64_t>(s), settings.decay);
      const double ratio = ne.coercivity_probe(f, theta).ratio;
      rep.rows.push_back({static_cast<std::size_t>(s), "theta=" + fmt17(theta), theta, ratio});
      lo = std::min(lo, ratio);
    }
    rep.constant = std::min(rep.constant, lo);
    rep.measured.emplace_back("min_ratio_theta=" + fmt17(theta), lo);
    rep.measured.emplace_back("infimum_theta=" + fmt17(theta),
                              min_generalized_eigenvalue(ne.anorm_gram(cap, theta), ne.coercivity_gram(cap, theta)));
  }
  rep.measured.emplace_back("C1", rep.constant);
  return rep;
}

EstimateReport validate_energy(const Propagator& propagator, const EvolutionTrace& trace, const NormEvaluator& evaluator,
                               double c0)
{
  if (trace.size() == 0) {
    throw ConfigError("validate_energy: empty trace");
  }
  if (!std::isfinite(c0) || c0 < 0.0) {
    throw ConfigError("validate_energy: C0 must be finite and nonnegative");
  }
  const int cap = propagator.degree_cap();
  const Eigen::MatrixXd gram = evaluator.anorm_gram(cap, 0.0);
  const double horizon = trace.times.back();
  const double rhs = std::exp(2.0 * c0 * horizon) * trace.initial.norm2();
  EstimateReport rep;
  rep.inequality = "energy";
  rep.sample_description.add("gamma", evaluator.gamma());
  rep.sample_description.add("D", cap);
  rep.sample_description.add("T", horizon);
  rep.sample_description.add("C0", c0);
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double lhs = trace.norm2[i] + propagator.form_integral(gram, trace.initial, trace.times[i]);
    const double ratio = lhs / rhs;
    rep.rows.push_back({0, "t=" + fmt17(trace.times[i]), 0.0, ratio});
    worst = std::max(worst, ratio);
  }
  rep.constant = worst;
  rep.measured.emplace_back("margin", 1.0 - worst);
  rep.measured.emplace_back("identity_residual", trace.max_energy_residual());
  rep.measured.emplace_back("C0", c0);
  return rep;
}

std::string estimate_csv(const EstimateReport& report, const Provenance& provenance)
{
  std::ostringstream os;
  provenance.write_comment_header(os);
  report.sample_description.write_comment_header(os);
  os << "inequality,sample,label,theta,ratio\n";
  for (const auto& r : report.rows) {
    os << report.inequality << ',' << r.sample << ',' << r.label << ',' << fmt17(r.theta) << ',' << fmt17(r.ratio)
       << '\n';
  }
  return os.str();
}

nlohmann::ordered_json estimate_json(const EstimateReport& report, const Provenance& provenance)
{
  nlohmann::ordered_json j;
  j["inequality"] = report.inequality;
  j["provenance"] = provenance.to_json();
  j["samples"] = report.sample_description.to_json();
  j["constant"] = report.constant;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.measured) {
    m[k] = v;
  }
  j["measured"] = m;
  std::vector<double> r;
  for (const auto& row : report.rows) {
    r.push_back(row.ratio);
  }
  std::sort(r.begin(), r.end());
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  d["count"] = r.size();
  if (!r.empty()) {
    auto q = [&r](double p) { return r[static_cast<std::size_t>(p * static_cast<double>(r.size() - 1))]; };
    d["min"] = r.front();
    d["p50"] = q(0.5);
    d["p90"] = q(0.9);
    d["max"] = r.back();
  }
  j["distribution"] = d;
  return j;
}

}  // namespace landau
