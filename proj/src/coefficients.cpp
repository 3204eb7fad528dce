#include "landau/coefficients.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/quadrature.hpp"
#include "landau/report.hpp"

namespace landau {

PotentialConfig::PotentialConfig(double gamma)
    : gamma_(gamma)
{
  if (!(gamma > -3.0 && gamma < 0.0)) {
    throw ConfigError("gamma = " + std::to_string(gamma) + " is outside the soft-potential range -3 < gamma < 0");
  }
}

Mat3 a_kernel(const Vec3& v, const PotentialConfig& config)
{
  const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  if (r2 == 0.0) {
    if (config.gamma() <= -2.0) {
      throw SingularKernelError("a_kernel: unbounded at v = 0 for gamma <= -2");
    }
    return Mat3::Zero();
  }
  const double scale = std::pow(r2, 0.5 * config.gamma());
  Mat3 a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      a(i, j) = ((i == j ? r2 : 0.0) - v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)]) * scale;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::pair<int, int>, 6> kEntries = {{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

// orthonormal frame with third axis along v (e₃ if v = 0)
std::array<Vec3, 3> aligned_frame(const Vec3& v)
{
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  Vec3 e3 = r > 0.0 ? Vec3{v[0] / r, v[1] / r, v[2] / r} : Vec3{0.0, 0.0, 1.0};
  // pick the coordinate axis least aligned with e3
  Vec3 seed{0.0, 0.0, 0.0};
  int k = 0;
  for (int j = 1; j < 3; ++j) {
    if (std::abs(e3[static_cast<std::size_t>(j)]) < std::abs(e3[static_cast<std::size_t>(k)])) {
      k = j;
    }
  }
  seed[static_cast<std::size_t>(k)] = 1.0;
  const double d = seed[0] * e3[0] + seed[1] * e3[1] + seed[2] * e3[2];
  Vec3 e1{seed[0] - d * e3[0], seed[1] - d * e3[1], seed[2] - d * e3[2]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& x : e1) {
    x /= n1;
  }
  const Vec3 e2{e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2], e3[0] * e1[1] - e3[1] * e1[0]};
  return {e1, e2, e3};
}

}  // namespace

ConvolutionEngine::ConvolutionEngine(PotentialConfig config, std::vector<MultiIndex> betas,
                                     ConvolutionSettings settings, KernelKind kind)
    : config_(config)
    , betas_(std::move(betas))
    , settings_(settings)
    , kind_(kind)
    , max_order_(0)
{
  if (betas_.empty()) {
    throw std::invalid_argument("ConvolutionEngine: empty derivative list");
  }
  for (const auto& b : betas_) {
    max_order_ = std::max({max_order_, b[0], b[1], b[2]});
  }
  int total = 0;
  for (const auto& b : betas_) {
    total = std::max(total, b.order());
  }
  // azimuthal trigonometric degree ≤ |β| + 2
  n_phi_ = total + 3;
}

bool ConvolutionEngine::substitution_engaged() const
{
  return config_.gamma() < settings_.substitution_below;
}

std::vector<Mat3> ConvolutionEngine::evaluate(const Vec3& v) const
{
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const auto frame = aligned_frame(v);
  const int stride = kind_ == KernelKind::landau ? 6 : 1;
  const auto nb = betas_.size();
  const auto width = static_cast<Eigen::Index>(nb) * stride;
  const auto np = static_cast<std::size_t>(max_order_) + 1;

  std::vector<double> cphi(static_cast<std::size_t>(n_phi_)), sphi(static_cast<std::size_t>(n_phi_));
  for (int k = 0; k < n_phi_; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_phi_;
    cphi[static_cast<std::size_t>(k)] = std::cos(phi);
    sphi[static_cast<std::size_t>(k)] = std::sin(phi);
  }
  const double phi_weight = 2.0 * std::numbers::pi / n_phi_;

  int evaluations = 0;
  std::vector<double> p0(np), p1(np), p2(np);

  auto angular = [&](double rho, double s) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(width);
    ++evaluations;
    const double c = 1.0 - s;
    const double st = std::sqrt(std::max(0.0, s * (2.0 - s)));
    for (int k = 0; k < n_phi_; ++k) {
      const double a1 = st * cphi[static_cast<std::size_t>(k)];
      const double a2 = st * sphi[static_cast<std::size_t>(k)];
      Vec3 zh;
      for (std::size_t j = 0; j < 3; ++j) {
        zh[j] = a1 * frame[0][j] + a2 * frame[1][j] + c * frame[2][j];
      }
      hermite_polys_1d(v[0] - rho * zh[0], p0);
      hermite_polys_1d(v[1] - rho * zh[1], p1);
      hermite_polys_1d(v[2] - rho * zh[2], p2);
      if (kind_ == KernelKind::landau) {
        std::array<double, 6> kern;
        for (std::size_t e = 0; e < 6; ++e) {
          const auto [i, j] = kEntries[e];
          kern[e] = (i == j ? 1.0 : 0.0) - zh[static_cast<std::size_t>(i)] * zh[static_cast<std::size_t>(j)];
        }
        for (std::size_t b = 0; b < nb; ++b) {
          const auto& beta = betas_[b];
          const double pb = p0[static_cast<std::size_t>(beta[0])] * p1[static_cast<std::size_t>(beta[1])]
                            * p2[static_cast<std::size_t>(beta[2])];
          for (std::size_t e = 0; e < 6; ++e) {
            acc[static_cast<Eigen::Index>(b * 6 + e)] += pb * kern[e];
          }
        }
      } else {
        for (std::size_t b = 0; b < nb; ++b) {
          const auto& beta = betas_[b];
          acc[static_cast<Eigen::Index>(b)] += p0[static_cast<std::size_t>(beta[0])]
                                               * p1[static_cast<std::size_t>(beta[1])]
                                               * p2[static_cast<std::size_t>(beta[2])];
        }
      }
    }
    return Eigen::ArrayXd(acc * (phi_weight * std::exp(-r * rho * s)));
  };

  AdaptiveOptions inner_opt{.rel_tol = settings_.rel_tol * 0.1,
                            .abs_tol = 0.0,
                            .max_intervals = settings_.max_intervals,
                            .floor_ratio = settings_.floor_ratio,
                            .throw_on_failure = true,
                            .label = "convolution (polar)"};
  auto radial = [&](double rho) {
    const double x = r * rho;
    const double s_max = x > 0.0 ? std::min(2.0, settings_.angular_cutoff / x) : 2.0;
    auto f = [&](double s) { return angular(rho, s); };
    Eigen::ArrayXd val = integrate_adaptive(f, 0.0, s_max, inner_opt).value;
    const double power = kind_ == KernelKind::landau ? config_.gamma() + 4.0 : config_.gamma() + 2.0;
    const double dr = rho - r;
    return Eigen::ArrayXd(val * (std::pow(rho, power) * std::exp(-0.5 * dr * dr)));
  };

  AdaptiveOptions outer_opt{.rel_tol = settings_.rel_tol,
                            .abs_tol = 0.0,
                            .max_intervals = settings_.max_intervals,
                            .floor_ratio = settings_.floor_ratio,
                            .throw_on_failure = true,
                            .label = "convolution (radial)"};
  const double lo = std::max(0.0, r - settings_.gaussian_window);
  const double hi = r + settings_.gaussian_window;
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(width);
  if (lo == 0.0 && substitution_engaged()) {
    // ρ = u²: ρ^{γ+4} dρ = 2u^{2γ+9} du keeps the endpoint smooth for γ near −3
    auto g = [&](double u) { return Eigen::ArrayXd(radial(u * u) * (2.0 * u)); };
    const double split = std::sqrt(std::max(r, 1.0));
    total += integrate_adaptive(g, 0.0, split, outer_opt).value;
    total += integrate_adaptive(g, split, std::sqrt(hi), outer_opt).value;
  } else {
    const double split = std::clamp(r, lo + 1e-3, hi - 1e-3);
    total += integrate_adaptive(radial, lo, split, outer_opt).value;
    total += integrate_adaptive(radial, split, hi, outer_opt).value;
  }
  last_evaluations_ = evaluations;

  const double mu_norm = std::pow(2.0 * std::numbers::pi, -1.5);
  std::vector<Mat3> out(nb, Mat3::Zero());
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& beta = betas_[b];
    const double sign = beta.order() % 2 == 0 ? 1.0 : -1.0;
    const double pref = sign * sqrt_factorial(beta) * mu_norm;
    if (kind_ == KernelKind::landau) {
      for (std::size_t e = 0; e < 6; ++e) {
        const auto [i, j] = kEntries[e];
        const double val = pref * total[static_cast<Eigen::Index>(b * 6 + e)];
        out[b](i, j) = val;
        out[b](j, i) = val;
      }
    } else {
      out[b](0, 0) = pref * total[static_cast<Eigen::Index>(b)];
    }
  }
  return out;
}

Mat3 abar_derivative(const Vec3& v, const MultiIndex& beta, const PotentialConfig& config,
                     const ConvolutionSettings& settings)
{
  const ConvolutionEngine engine(config, {beta}, settings);
  return engine.evaluate(v).front();
}

Profiles abar_profiles(double r, const PotentialConfig& config, const ConvolutionSettings& settings)
{
  if (r < 0.0) {
    throw std::invalid_argument("abar_profiles: negative radius");
  }
  const ConvolutionEngine engine(config, {MultiIndex{0, 0, 0}}, settings);
  const Mat3 m = engine.evaluate({0.0, 0.0, r}).front();
  return {m(2, 2), m(0, 0)};
}

// ---------------------------------------------------------------------------

CoefficientField::CoefficientField(PotentialConfig config, TableSettings settings)
    : config_(config)
    , settings_(settings)
{
  if (settings_.radii < 4 || settings_.r_max <= 0.0 || settings_.r_scale <= 0.0) {
    throw ConfigError("CoefficientField: invalid table settings");
  }
  build();
}

void CoefficientField::build()
{
  const auto n = static_cast<std::size_t>(settings_.radii);
  const double u_max = std::asinh(settings_.r_max / settings_.r_scale);
  u_.resize(n);
  r_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    u_[i] = u_max * static_cast<double>(i) / static_cast<double>(n - 1);
    r_[i] = settings_.r_scale * std::sinh(u_[i]);
  }
  r_.back() = settings_.r_max;
  l1_.resize(n);
  dl1_.resize(n);
  l2_.resize(n);
  dl2_.resize(n);
  drift_.resize(n);
  ddrift_.resize(n);

  const std::vector<MultiIndex> betas = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  const ConvolutionEngine engine(config_, betas, settings_.quadrature);
  substitution_ = engine.substitution_engaged();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = r_[i];
    const auto m = engine.evaluate({0.0, 0.0, r});
    const Mat3& m0 = m[0];
    l1_[i] = m0(2, 2);
    l2_[i] = m0(0, 0);
    dl1_[i] = m[3](2, 2);
    dl2_[i] = m[3](0, 0);
    const double g = m[1](0, 2) + m[2](1, 2) + m[3](2, 2);
    drift_[i] = m0.trace() + r * g;
    ddrift_[i] = m[3].trace() + g + r * (m[4](0, 2) + m[5](1, 2) + m[6](2, 2));
  }
  // even functions of r: exact zero slope at the origin
  dl1_[0] = 0.0;
  dl2_[0] = 0.0;
  ddrift_[0] = 0.0;
}

double CoefficientField::interp(const std::vector<double>& f, const std::vector<double>& df, double r,
                                double* slope) const
{
  if (r < 0.0 || r > settings_.r_max) {
    throw CapacityError("CoefficientField: radius " + std::to_string(r) + " outside the table range [0, "
                        + std::to_string(settings_.r_max) + "]");
  }
  const double u = std::asinh(r / settings_.r_scale);
  const double du = u_[1] - u_[0];
  auto i = static_cast<std::size_t>(std::floor(u / du));
  i = std::min(i, u_.size() - 2);
  const double t = (u - u_[i]) / du;
  const double rs = settings_.r_scale;
  const double fu0 = df[i] * rs * std::cosh(u_[i]) * du;
  const double fu1 = df[i + 1] * rs * std::cosh(u_[i + 1]) * du;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  if (slope != nullptr) {
    const double d00 = 6 * t2 - 6 * t;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = -6 * t2 + 6 * t;
    const double d11 = 3 * t2 - 2 * t;
    const double dfdt = d00 * f[i] + d10 * fu0 + d01 * f[i + 1] + d11 * fu1;
    *slope = dfdt / (du * rs * std::cosh(u));
  }
  return h00 * f[i] + h10 * fu0 + h01 * f[i + 1] + h11 * fu1;
}

Profiles CoefficientField::profiles(double r) const
{
  return {interp(l1_, dl1_, r, nullptr), interp(l2_, dl2_, r, nullptr)};
}

Profiles CoefficientField::profile_slopes(double r) const
{
  Profiles s{};
  interp(l1_, dl1_, r, &s.l1);
  interp(l2_, dl2_, r, &s.l2);
  return s;
}

double CoefficientField::drift_divergence(double r) const
{
  return interp(drift_, ddrift_, r, nullptr);
}

Mat3 CoefficientField::abar(const Vec3& v) const
{
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const Profiles p = profiles(r);
  if (r == 0.0) {
    return p.l1 * Mat3::Identity();
  }
  const Vec3 vh{v[0] / r, v[1] / r, v[2] / r};
  const double gap = p.l1 - p.l2;
  Mat3 a;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      a(i, j) = (i == j ? p.l2 : 0.0) + gap * vh[static_cast<std::size_t>(i)] * vh[static_cast<std::size_t>(j)];
      a(j, i) = a(i, j);
    }
  }
  return a;
}

DriftPotential CoefficientField::drift_and_potential(const Vec3& v) const
{
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const Profiles p = profiles(r);
  return {{p.l1 * v[0], p.l1 * v[1], p.l1 * v[2]}, drift_divergence(r), p.l1 * r * r};
}

double CoefficientField::min_eigenvalue() const
{
  double m = l1_.front();
  for (std::size_t i = 0; i < l1_.size(); ++i) {
    m = std::min({m, l1_[i], l2_[i]});
  }
  return m;
}

// ---------------------------------------------------------------------------
// cache

std::string CoefficientField::cache_key() const
{
  const auto& q = settings_.quadrature;
  return "v" + std::to_string(kFormatVersion) + ";gamma=" + fmt17(config_.gamma()) + ";r_max=" + fmt17(settings_.r_max)
         + ";radii=" + std::to_string(settings_.radii) + ";r_scale=" + fmt17(settings_.r_scale)
         + ";rel_tol=" + fmt17(q.rel_tol) + ";floor_ratio=" + fmt17(q.floor_ratio)
         + ";window=" + fmt17(q.gaussian_window) + ";cutoff=" + fmt17(q.angular_cutoff)
         + ";subst_below=" + fmt17(q.substitution_below) + ";max_intervals=" + std::to_string(q.max_intervals);
}

void CoefficientField::save_csv(const std::filesystem::path& path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write coefficient cache " + path.string());
  }
  const auto& q = settings_.quadrature;
  out << "# landau coefficient table\n";
  out << "# key=" << cache_key() << "\n";
  out << "# gamma=" << fmt17(config_.gamma()) << " r_max=" << fmt17(settings_.r_max) << " radii=" << settings_.radii
      << " r_scale=" << fmt17(settings_.r_scale) << " rel_tol=" << fmt17(q.rel_tol)
      << " floor_ratio=" << fmt17(q.floor_ratio) << " window=" << fmt17(q.gaussian_window)
      << " cutoff=" << fmt17(q.angular_cutoff) << " subst_below=" << fmt17(q.substitution_below)
      << " max_intervals=" << q.max_intervals << " substitution=" << (substitution_ ? 1 : 0) << "\n";
  out << "u,r,l1,dl1,l2,dl2,drift,ddrift\n";
  for (std::size_t i = 0; i < r_.size(); ++i) {
    out << fmt17(u_[i]) << ',' << fmt17(r_[i]) << ',' << fmt17(l1_[i]) << ',' << fmt17(dl1_[i]) << ','
        << fmt17(l2_[i]) << ',' << fmt17(dl2_[i]) << ',' << fmt17(drift_[i]) << ',' << fmt17(ddrift_[i]) << '\n';
  }
}

CoefficientField CoefficientField::load_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read coefficient cache " + path.string());
  }
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  CoefficientField f;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      const std::string k = tok.substr(0, eq);
      const std::string v = tok.substr(eq + 1);
      auto& q = f.settings_.quadrature;
      if (k == "gamma") {
        f.config_ = PotentialConfig(std::strtod(v.c_str(), nullptr));
      } else if (k == "r_max") {
        f.settings_.r_max = std::strtod(v.c_str(), nullptr);
      } else if (k == "radii") {
        f.settings_.radii = std::stoi(v);
      } else if (k == "r_scale") {
        f.settings_.r_scale = std::strtod(v.c_str(), nullptr);
      } else if (k == "rel_tol") {
        q.rel_tol = std::strtod(v.c_str(), nullptr);
      } else if (k == "floor_ratio") {
        q.floor_ratio = std::strtod(v.c_str(), nullptr);
      } else if (k == "window") {
        q.gaussian_window = std::strtod(v.c_str(), nullptr);
      } else if (k == "cutoff") {
        q.angular_cutoff = std::strtod(v.c_str(), nullptr);
      } else if (k == "subst_below") {
        q.substitution_below = std::strtod(v.c_str(), nullptr);
      } else if (k == "max_intervals") {
        q.max_intervals = std::stoi(v);
      } else if (k == "substitution") {
        f.substitution_ = v == "1";
      }
    }
  }
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::array<double, 8> row{};
    const char* p = line.c_str();
    for (double& x : row) {
      char* end = nullptr;
      x = std::strtod(p, &end);
      p = *end == ',' ? end + 1 : end;
    }
    f.u_.push_back(row[0]);
    f.r_.push_back(row[1]);
    f.l1_.push_back(row[2]);
    f.dl1_.push_back(row[3]);
    f.l2_.push_back(row[4]);
    f.dl2_.push_back(row[5]);
    f.drift_.push_back(row[6]);
    f.ddrift_.push_back(row[7]);
  }
  if (static_cast<int>(f.r_.size()) != f.settings_.radii) {
    throw std::runtime_error("coefficient cache " + path.string() + " is truncated");
  }
  return f;
}

CoefficientField CoefficientField::load_or_build(PotentialConfig config, TableSettings settings,
                                                 const std::filesystem::path& dir, bool* cache_hit)
{
  CoefficientField probe;
  probe.config_ = config;
  probe.settings_ = settings;
  const std::string key = probe.cache_key();
  char name[64];
  std::snprintf(name, sizeof name, "abar_%016" PRIx64 ".csv", fnv1a(key));
  const auto path = dir / name;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    if (line == "# key=" + key) {
      if (cache_hit != nullptr) {
        *cache_hit = true;
      }
      return load_csv(path);
    }
  }
  if (cache_hit != nullptr) {
    *cache_hit = false;
  }
  CoefficientField field(config, settings);
  std::filesystem::create_directories(dir);
  field.save_csv(path);
  return field;
}

// ---------------------------------------------------------------------------
// probes

std::vector<Vec3> probe_points(double r_max, int radii_count)
{
  const std::array<Vec3, 3> dirs = {Vec3{1.0, 0.0, 0.0}, Vec3{0.57735026918962573, 0.57735026918962573, 0.57735026918962573},
                                    Vec3{0.29134281, -0.77691416, 0.55814393}};
  std::vector<Vec3> pts;
  for (int k = 0; k < radii_count; ++k) {
    const double t = radii_count > 1 ? static_cast<double>(k) / (radii_count - 1) : 0.0;
    const double r = r_max * t * t;
    for (const auto& d : dirs) {
      const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      pts.push_back({r * d[0] / n, r * d[1] / n, r * d[2] / n});
    }
  }
  return pts;
}

std::vector<DerivativeBoundRow> probe_derivative_bound(const PotentialConfig& config, int max_order,
                                                       const std::vector<Vec3>& points,
                                                       const ConvolutionSettings& settings)
{
  std::vector<MultiIndex> betas;
  for (int m = 1; m <= max_order; ++m) {
    for (const auto& b : indices_of_order(m)) {
      betas.push_back(b);
    }
  }
  const ConvolutionEngine engine(config, betas, settings);
  std::vector<DerivativeBoundRow> rows;
  for (int m = 1; m <= max_order; ++m) {
    rows.push_back({m, 0.0, {}, {}});
  }
  for (const auto& v : points) {
    const auto mats = engine.evaluate(v);
    const double w = std::pow(japanese(v), config.gamma() + 1.0);
    for (std::size_t b = 0; b < betas.size(); ++b) {
      const double ratio = mats[b].cwiseAbs().maxCoeff() / (w * sqrt_factorial(betas[b]));
      auto& row = rows[static_cast<std::size_t>(betas[b].order() - 1)];
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.argmax_beta = betas[b];
        row.argmax_point = v;
      }
    }
  }
  return rows;
}

RatioRange probe_power_moment(const PotentialConfig& config, const std::vector<double>& radii,
                              const ConvolutionSettings& settings)
{
  const ConvolutionEngine engine(config, {MultiIndex{0, 0, 0}}, settings, KernelKind::power);
  // the engine includes the (2π)^{-3/2} of μ; the probe uses μ as the Gaussian
  RatioRange out{1e300, 0.0};
  for (double r : radii) {
    const double val = engine.evaluate({0.0, 0.0, r}).front()(0, 0);
    const double ratio = val / std::pow(1.0 + r * r, 0.5 * config.gamma());
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
  }
  return out;
}

RatioRange probe_abar_growth(const CoefficientField& field, const std::vector<double>& radii)
{
  RatioRange out{1e300, 0.0};
  for (double r : radii) {
    const Mat3 a = field.abar({0.0, 0.0, r});
    const double ratio = a.cwiseAbs().maxCoeff() / std::pow(1.0 + r * r, 0.5 * (field.config().gamma() + 2.0));
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
  }
  return out;
}

DriftBoundProbe probe_drift_bounds(const CoefficientField& field, const std::vector<double>& radii)
{
  DriftBoundProbe out{{1e300, 0.0}, {1e300, 0.0}};
  for (double r : radii) {
    const auto dp = field.drift_and_potential({0.0, 0.0, r});
    const double w = std::pow(1.0 + r * r, 0.5 * (field.config().gamma() + 1.0));
    out.potential.lower = std::min(out.potential.lower, std::abs(dp.q) / w);
    out.potential.upper = std::max(out.potential.upper, std::abs(dp.q) / w);
    out.drift.lower = std::min(out.drift.lower, std::abs(dp.div_b) / w);
    out.drift.upper = std::max(out.drift.upper, std::abs(dp.div_b) / w);
  }
  return out;
}

}  // namespace landau
