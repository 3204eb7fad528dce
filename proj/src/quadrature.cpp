#include "landau/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace landau {

GaussHermiteRule::GaussHermiteRule(int points)
{
  if (points < 1) {
    throw std::invalid_argument("GaussHermiteRule: need at least one point");
  }
  const int q = points;
  // Golub–Welsch for the monic probabilists' recurrence: off-diagonal √k
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd sub(std::max(q - 1, 0));
  for (int k = 1; k < q; ++k) {
    sub[k - 1] = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + q);

  // Newton polish on p_Q = He_Q/√Q! using p_Q' = √Q p_{Q−1}
  std::vector<double> p(static_cast<std::size_t>(q) + 1);
  for (double& xi : x) {
    for (int it = 0; it < 4; ++it) {
      hermite_polys_1d(xi, p);
      const double dp = std::sqrt(static_cast<double>(q)) * p[static_cast<std::size_t>(q) - 1];
      if (dp == 0.0) {
        break;
      }
      xi -= p[static_cast<std::size_t>(q)] / dp;
    }
  }
  std::sort(x.begin(), x.end());
  // exact mirror symmetry
  for (int i = 0; i < q / 2; ++i) {
    const double m = 0.5 * (x[static_cast<std::size_t>(q - 1 - i)] - x[static_cast<std::size_t>(i)]);
    x[static_cast<std::size_t>(i)] = -m;
    x[static_cast<std::size_t>(q - 1 - i)] = m;
  }
  if (q % 2 == 1) {
    x[static_cast<std::size_t>(q / 2)] = 0.0;
  }

  nodes_ = x;
  weights_.resize(x.size());
  std::vector<double> psi(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < x.size(); ++i) {
    hermite_values_1d(x[i], psi);
    double s = 0.0;
    for (double v : psi) {
      s += v * v;
    }
    weights_[i] = 1.0 / s;
  }
  for (int i = 0; i < q / 2; ++i) {
    const double w = 0.5 * (weights_[static_cast<std::size_t>(i)] + weights_[static_cast<std::size_t>(q - 1 - i)]);
    weights_[static_cast<std::size_t>(i)] = w;
    weights_[static_cast<std::size_t>(q - 1 - i)] = w;
  }
}

namespace {

int grid_points(int max_degree, int min_points)
{
  int q = std::max(min_points, max_degree + 8);
  if (q % 2 == 1) {
    ++q;
  }
  return q;
}

}  // namespace

TensorGrid::TensorGrid(int max_degree, int min_points)
    : max_degree_(max_degree)
    , q_(grid_points(max_degree, min_points))
    , rule_(q_)
    , psi_cols_(static_cast<std::size_t>(max_degree) + 2)
{
  if (max_degree < 0) {
    throw std::invalid_argument("TensorGrid: negative max degree");
  }
  psi_.resize(static_cast<std::size_t>(q_) * psi_cols_);
  for (int i = 0; i < q_; ++i) {
    hermite_values_1d(rule_.nodes()[static_cast<std::size_t>(i)],
                      std::span<double>(psi_.data() + static_cast<std::size_t>(i) * psi_cols_, psi_cols_));
  }
  w3_.resize(size());
  const auto w = rule_.weights();
  std::size_t n = 0;
  for (int i = 0; i < q_; ++i) {
    for (int j = 0; j < q_; ++j) {
      for (int k = 0; k < q_; ++k) {
        w3_[n++] = w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k)];
      }
    }
  }
}

Vec3 TensorGrid::node(std::size_t n) const
{
  const auto q = static_cast<std::size_t>(q_);
  const auto x = rule_.nodes();
  return {x[n / (q * q)], x[(n / q) % q], x[n % q]};
}

double TensorGrid::weight(std::size_t n) const
{
  return w3_[n];
}

std::vector<double> TensorGrid::evaluate(const SpectralFunction& f) const
{
  const int cap = f.degree_cap();
  if (cap > max_degree_) {
    throw CapacityError("TensorGrid::evaluate: degree cap " + std::to_string(cap) + " exceeds grid capacity "
                        + std::to_string(max_degree_));
  }
  const auto side = static_cast<std::size_t>(cap + 1);
  const auto q = static_cast<std::size_t>(q_);
  // dense coefficient cube C[a][b][c]
  std::vector<double> cube(side * side * side, 0.0);
  const BasisIndex basis(cap);
  const auto coeffs = f.coefficients();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& a = basis[i];
    cube[(static_cast<std::size_t>(a[0]) * side + static_cast<std::size_t>(a[1])) * side
         + static_cast<std::size_t>(a[2])] = coeffs[i];
  }
  // contract axis 1: T1[i][b][c]
  std::vector<double> t1(q * side * side, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t a = 0; a < side; ++a) {
      const double pa = psi(static_cast<int>(i), static_cast<int>(a));
      for (std::size_t b = 0; a + b < side; ++b) {
        const double* src = &cube[(a * side + b) * side];
        double* dst = &t1[(i * side + b) * side];
        for (std::size_t c = 0; a + b + c < side; ++c) {
          dst[c] += pa * src[c];
        }
      }
    }
  }
  // contract axis 2: T2[i][j][c]
  std::vector<double> t2(q * q * side, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      double* dst = &t2[(i * q + j) * side];
      for (std::size_t b = 0; b < side; ++b) {
        const double pb = psi(static_cast<int>(j), static_cast<int>(b));
        const double* src = &t1[(i * side + b) * side];
        for (std::size_t c = 0; b + c < side; ++c) {
          dst[c] += pb * src[c];
        }
      }
    }
  }
  // contract axis 3
  std::vector<double> out(q * q * q, 0.0);
  for (std::size_t ij = 0; ij < q * q; ++ij) {
    const double* src = &t2[ij * side];
    for (std::size_t k = 0; k < q; ++k) {
      const double* row = &psi_[k * psi_cols_];
      double s = 0.0;
      for (std::size_t c = 0; c < side; ++c) {
        s += row[c] * src[c];
      }
      out[ij * q + k] = s;
    }
  }
  return out;
}

double TensorGrid::integrate(std::span<const double> values) const
{
  double s = 0.0;
  for (std::size_t n = 0; n < w3_.size(); ++n) {
    s += w3_[n] * values[n];
  }
  return s;
}

// ---------------------------------------------------------------------------

LegendreRule gauss_legendre(int points)
{
  if (points < 1) {
    throw std::invalid_argument("gauss_legendre: need at least one point");
  }
  const int n = points;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  LegendreRule rule;
  rule.nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  rule.weights.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double& x = rule.nodes[i];
    double dp = 1.0;
    for (int it = 0; it < 4; ++it) {
      // P_n and P_n' by the three-term recurrence
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      x -= pn / dp;
    }
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < n / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    const double m = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    rule.nodes[lo] = -m;
    rule.nodes[hi] = m;
    const double w = 0.5 * (rule.weights[lo] + rule.weights[hi]);
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
  return rule;
}

RadialRule radial_gauss_rule(int points, double theta)
{
  if (points < 1) {
    throw std::invalid_argument("radial_gauss_rule: need at least one point");
  }
  // discrete measure: 20-point Gauss–Legendre on 320 panels of [0, 40]
  const LegendreRule gl = gauss_legendre(20);
  const int panels = 320;
  const double width = 40.0 / panels;
  const auto m = static_cast<Eigen::Index>(panels * 20);
  Eigen::VectorXd x(m), sw(m);
  Eigen::Index idx = 0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double r = width * (p + 0.5 * (gl.nodes[i] + 1.0));
      const double w = 0.5 * width * gl.weights[i] * r * r * std::exp(-0.5 * r * r) * std::pow(1.0 + r * r, theta);
      x[idx] = r;
      sw[idx] = std::sqrt(w);
      ++idx;
    }
  }
  const double mass = sw.squaredNorm();
  // Lanczos on diag(x) from √w with full reorthogonalization
  const int n = points;
  Eigen::MatrixXd q(m, n);
  Eigen::VectorXd alpha(n), beta(std::max(n - 1, 0));
  q.col(0) = sw / sw.norm();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd z = x.cwiseProduct(q.col(k));
    alpha[k] = q.col(k).dot(z);
    if (k + 1 == n) {
      break;
    }
    for (int pass = 0; pass < 2; ++pass) {
      z -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * z);
    }
    beta[k] = z.norm();
    q.col(k + 1) = z / beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha, beta, Eigen::ComputeEigenvectors);
  RadialRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mass * v0 * v0;
  }
  return rule;
}

SphericalGrid::SphericalGrid(int max_degree, double theta, int extra_radial, int extra_angular)
    : max_degree_(max_degree)
    , theta_(theta)
{
  if (max_degree < 0 || extra_radial < 0 || extra_angular < 0) {
    throw std::invalid_argument("SphericalGrid: negative degree");
  }
  const int degree = 2 * max_degree + extra_angular;
  n_r_ = degree / 2 + 1 + extra_radial;
  n_theta_ = degree / 2 + 1;
  n_theta_ += n_theta_ % 2;
  n_phi_ = 4 * (degree / 4 + 1);

  const RadialRule radial = radial_gauss_rule(n_r_, theta);
  const LegendreRule polar = gauss_legendre(n_theta_);
  const double dphi = 2.0 * std::numbers::pi / n_phi_;
  for (int ir = 0; ir < n_r_; ++ir) {
    const double r = radial.nodes[static_cast<std::size_t>(ir)];
    const double wr = radial.weights[static_cast<std::size_t>(ir)] * std::exp(0.5 * r * r);
    for (int it = n_theta_ / 2; it < n_theta_; ++it) {
      const double c = polar.nodes[static_cast<std::size_t>(it)];
      const double s = std::sqrt((1.0 - c) * (1.0 + c));
      const double wt = wr * polar.weights[static_cast<std::size_t>(it)] * dphi;
      for (int ip = 0; ip < n_phi_ / 4; ++ip) {
        const double phi = (ip + 0.5) * dphi;
        const Vec3 v{r * s * std::cos(phi), r * s * std::sin(phi), r * c};
        for (int b = 0; b < 8; ++b) {
          nodes_.push_back({(b & 1) ? -v[0] : v[0], (b & 2) ? -v[1] : v[1], (b & 4) ? -v[2] : v[2]});
          weights_.push_back(wt);
        }
      }
    }
  }
}

std::vector<double> SphericalGrid::evaluate(const SpectralFunction& f) const
{
  const int cap = f.degree_cap();
  if (cap > max_degree_) {
    throw CapacityError("SphericalGrid::evaluate: degree cap " + std::to_string(cap) + " exceeds grid capacity "
                        + std::to_string(max_degree_));
  }
  const auto side = static_cast<std::size_t>(cap + 1);
  std::vector<double> cube(side * side * side, 0.0);
  const BasisIndex basis(cap);
  const auto coeffs = f.coefficients();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& a = basis[i];
    cube[(static_cast<std::size_t>(a[0]) * side + static_cast<std::size_t>(a[1])) * side
         + static_cast<std::size_t>(a[2])] = coeffs[i];
  }
  std::vector<double> out(nodes_.size());
  std::vector<double> px(side), py(side), pz(side);
  for (std::size_t o = 0; o < nodes_.size(); o += 8) {
    const Vec3& v = nodes_[o];
    hermite_values_1d(v[0], px);
    hermite_values_1d(v[1], py);
    hermite_values_1d(v[2], pz);
    // parity-class partial sums S[p1][p2][p3]
    std::array<double, 8> s{};
    for (std::size_t a = 0; a < side; ++a) {
      std::array<double, 4> t{};  // [p2][p3]
      for (std::size_t b = 0; a + b < side; ++b) {
        const double* row = &cube[(a * side + b) * side];
        double e0 = 0.0;
        double e1 = 0.0;
        for (std::size_t c = 0; a + b + c < side; c += 2) {
          e0 += row[c] * pz[c];
        }
        for (std::size_t c = 1; a + b + c < side; c += 2) {
          e1 += row[c] * pz[c];
        }
        t[(b % 2) * 2] += py[b] * e0;
        t[(b % 2) * 2 + 1] += py[b] * e1;
      }
      for (std::size_t k = 0; k < 4; ++k) {
        s[(a % 2) * 4 + k] += px[a] * t[k];
      }
    }
    for (int b = 0; b < 8; ++b) {
      double val = 0.0;
      for (int cls = 0; cls < 8; ++cls) {
        // class bits: 4 → x parity, 2 → y, 1 → z; image bits: 1 → x, 2 → y, 4 → z
        const int flips = (((cls >> 2) & 1) & (b & 1)) + (((cls >> 1) & 1) & ((b >> 1) & 1)) + ((cls & 1) & ((b >> 2) & 1));
        val += (flips % 2 == 0 ? 1.0 : -1.0) * s[static_cast<std::size_t>(cls)];
      }
      out[o + static_cast<std::size_t>(b)] = val;
    }
  }
  return out;
}

double SphericalGrid::integrate(std::span<const double> values) const
{
  double s = 0.0;
  for (std::size_t n = 0; n < weights_.size(); ++n) {
    s += weights_[n] * values[n];
  }
  return s;
}

}  // namespace landau
