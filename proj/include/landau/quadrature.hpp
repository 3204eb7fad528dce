#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "landau/errors.hpp"
#include "landau/hermite.hpp"

namespace landau {

// ---------------------------------------------------------------------------
// Adaptive Gauss–Kronrod (7/15) for vector-valued integrands.
// ---------------------------------------------------------------------------

struct AdaptiveOptions
{
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 4000;
  /// Component c must reach rel_tol·max(|I_c|, floor_ratio·‖I‖_∞); 1 gives a plain max-norm test.
  double floor_ratio = 1.0;
  bool throw_on_failure = true;
  std::string label = "adaptive quadrature";
};

struct AdaptiveResult
{
  Eigen::ArrayXd value;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod abscissae kXgk[1], kXgk[3], kXgk[5], kXgk[7]
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
  double a;
  double b;
  Eigen::ArrayXd value;
  Eigen::ArrayXd error;
  double priority = 0.0;
};

template <class F>
Segment gk15(F& f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Eigen::ArrayXd fc = f(center);
  Eigen::ArrayXd resk = fc * kWgk[7];
  Eigen::ArrayXd resg = fc * kWg[3];
  Eigen::ArrayXd resabs = resk.abs();
  std::array<Eigen::ArrayXd, 7> f1, f2;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    f1[static_cast<std::size_t>(j)] = f(center - dx);
    f2[static_cast<std::size_t>(j)] = f(center + dx);
    const auto& lo = f1[static_cast<std::size_t>(j)];
    const auto& hi = f2[static_cast<std::size_t>(j)];
    resk += kWgk[static_cast<std::size_t>(j)] * (lo + hi);
    resabs += kWgk[static_cast<std::size_t>(j)] * (lo.abs() + hi.abs());
    if (j % 2 == 1) {
      resg += kWg[static_cast<std::size_t>(j / 2)] * (lo + hi);
    }
  }
  const Eigen::ArrayXd mean = resk * 0.5;
  Eigen::ArrayXd resasc = kWgk[7] * (fc - mean).abs();
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[static_cast<std::size_t>(j)]
              * ((f1[static_cast<std::size_t>(j)] - mean).abs() + (f2[static_cast<std::size_t>(j)] - mean).abs());
  }
  const double ah = std::abs(half);
  Eigen::ArrayXd err(resk.size());
  for (Eigen::Index c = 0; c < resk.size(); ++c) {
    double e = std::abs((resk[c] - resg[c]) * half);
    const double asc = resasc[c] * ah;
    if (asc != 0.0 && e != 0.0) {
      e = asc * std::min(1.0, std::pow(200.0 * e / asc, 1.5));
    }
    const double abs_c = resabs[c] * ah;
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_c;
    err[c] = std::max(e, floor);
  }
  return Segment{a, b, resk * half, err};
}

}  // namespace detail

/// Integrate f over [a, b]; see AdaptiveOptions for the per-component stopping test.
///
/// f maps a double to an Eigen::ArrayXd of fixed length. Throws
/// NumericalToleranceError carrying the achieved error unless
/// throw_on_failure is false.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {})
{
  AdaptiveResult res;
  if (a == b) {
    res.value = f(a) * 0.0;
    res.converged = true;
    return res;
  }
  std::vector<detail::Segment> segs;
  segs.push_back(detail::gk15(f, a, b));
  res.evaluations = 15;
  Eigen::ArrayXd total = segs.front().value;
  Eigen::ArrayXd total_err = segs.front().error;

  // per-component scales fixed from the first estimate drive the bisection order
  const double tiny = std::numeric_limits<double>::min();
  const Eigen::ArrayXd scale =
      total.abs().max(opt.floor_ratio * total.abs().maxCoeff()).max(tiny);
  auto prio = [&scale](detail::Segment& s) { s.priority = (s.error / scale).maxCoeff(); };
  auto by_priority = [](const detail::Segment& x, const detail::Segment& y) { return x.priority < y.priority; };
  prio(segs.front());

  auto target_of = [&opt](const Eigen::ArrayXd& tot) {
    const double m = tot.abs().maxCoeff();
    return Eigen::ArrayXd(
        (opt.rel_tol * tot.abs().max(opt.floor_ratio * m)).max(opt.abs_tol));
  };
  while (true) {
    if ((total_err <= target_of(total)).all()) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(segs.size()) >= opt.max_intervals) {
      break;
    }
    std::pop_heap(segs.begin(), segs.end(), by_priority);
    const detail::Segment worst = segs.back();
    segs.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      segs.push_back(worst);
      std::push_heap(segs.begin(), segs.end(), by_priority);
      break;  // interval exhausted at machine resolution
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    prio(left);
    prio(right);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    segs.push_back(std::move(left));
    std::push_heap(segs.begin(), segs.end(), by_priority);
    segs.push_back(std::move(right));
    std::push_heap(segs.begin(), segs.end(), by_priority);
    total_err.setZero();
    for (const auto& s : segs) {
      total_err += s.error;
    }
  }
  // re-sum from the segments to shed accumulated update roundoff
  total.setZero();
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    total += s.value;
  }
  res.value = total;
  const Eigen::ArrayXd target = target_of(total);
  res.error = total_err.maxCoeff();
  res.intervals = static_cast<int>(segs.size());
  if (!res.converged && opt.throw_on_failure) {
    Eigen::Index worst_c = 0;
    (total_err / target.max(tiny)).maxCoeff(&worst_c);
    throw NumericalToleranceError(opt.label + " did not converge", total_err[worst_c], target[worst_c]);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Gauss rule for the weight e^{-x²/2} stored in "function weight" form:
// ∫ g(x) dx ≈ Σ W_i g(x_i), exact for g = polynomial of degree ≤ 2Q−1 times e^{-x²/2}.
// ---------------------------------------------------------------------------

class GaussHermiteRule
{
 public:
  explicit GaussHermiteRule(int points);

  int points() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  /// W_i = 1 / Σ_{k<Q} ψ_k(x_i)², so that Σ W_i ψ_m ψ_n = δ_mn for m+n ≤ 2Q−1
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Tensor product of a 1-d GaussHermiteRule with Q (even) points per axis.
///
/// Node n ↔ (i, j, k) with n = (i·Q + j)·Q + k. Even Q keeps v = 0 off the grid.
class TensorGrid
{
 public:
  /// Q = max(min_points, max_degree + 8) rounded up to even.
  explicit TensorGrid(int max_degree, int min_points = 0);

  int points_per_axis() const { return q_; }
  std::size_t size() const { return static_cast<std::size_t>(q_) * q_ * q_; }
  int max_degree() const { return max_degree_; }

  const GaussHermiteRule& rule() const { return rule_; }
  Vec3 node(std::size_t n) const;
  double weight(std::size_t n) const;
  std::span<const double> weights() const { return w3_; }

  /// ψ_m(x_i) table (row i, column m), m ≤ max_degree + 1
  double psi(int i, int m) const { return psi_[static_cast<std::size_t>(i) * psi_cols_ + static_cast<std::size_t>(m)]; }

  /// f at every node via sum factorization; throws CapacityError if cap > max_degree.
  std::vector<double> evaluate(const SpectralFunction& f) const;

  /// Σ_n W_n g_n
  double integrate(std::span<const double> values) const;

 private:
  int max_degree_;
  int q_;
  GaussHermiteRule rule_;
  std::size_t psi_cols_;
  std::vector<double> psi_;
  std::vector<double> w3_;
};

// ---------------------------------------------------------------------------
// Spherical product rule with the radial weight ⟨v⟩^{2θ} built in.
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on [−1, 1], ascending.
struct LegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
LegendreRule gauss_legendre(int points);

/// Gauss rule on [0, ∞) for the weight r² e^{−r²/2} (1 + r²)^θ.
///
/// Recurrence from a Lanczos pass over a fine composite Gauss–Legendre
/// discretization of [0, 40]; exact for polynomials of degree ≤ 2·points − 1.
struct RadialRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
RadialRule radial_gauss_rule(int points, double theta);

/// ∫ ⟨v⟩^{2θ} g(v) dv ≈ Σ W_n g(v_n) over a product of a RadialRule, Gauss–Legendre
/// in cos ϑ and the trapezoid rule in φ.
///
/// Exact when g = P·e^{−|v|²/2} with deg P ≤ 2·max_degree + extra_angular, so the
/// weighted L² norm of any expansion with cap ≤ max_degree is computed exactly.
/// extra_radial adds radial nodes for smooth non-polynomial radial factors.
/// Nodes come in octant orbits: n = 8·o + b, bit j of b flips the sign of v_j.
class SphericalGrid
{
 public:
  SphericalGrid(int max_degree, double theta, int extra_radial = 0, int extra_angular = 0);

  int max_degree() const { return max_degree_; }
  double theta() const { return theta_; }
  std::size_t size() const { return nodes_.size(); }
  const Vec3& node(std::size_t n) const { return nodes_[n]; }
  std::span<const double> weights() const { return weights_; }
  int radial_points() const { return n_r_; }
  int polar_points() const { return n_theta_; }
  int azimuth_points() const { return n_phi_; }

  /// f at every node; throws CapacityError if cap > max_degree.
  std::vector<double> evaluate(const SpectralFunction& f) const;
  double integrate(std::span<const double> values) const;

 private:
  int max_degree_;
  double theta_;
  int n_r_, n_theta_, n_phi_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

}  // namespace landau
