#include "landau/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace landau {

namespace {

// (2π)^{-1/4}
const double kPsi0Norm = std::pow(2.0 * std::numbers::pi, -0.25);

}  // namespace

double hermite_eval_1d(int n, double x)
{
  if (n < 0) {
    throw std::invalid_argument("hermite_eval_1d: negative order " + std::to_string(n));
  }
  double prev = 0.0;
  double cur = kPsi0Norm * std::exp(-0.25 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_values_1d(double x, std::span<double> out)
{
  if (out.empty()) {
    return;
  }
  out[0] = kPsi0Norm * std::exp(-0.25 * x * x);
  if (out.size() > 1) {
    out[1] = x * out[0];
  }
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) / std::sqrt(k + 1.0);
  }
}

void hermite_polys_1d(double x, std::span<double> out)
{
  if (out.empty()) {
    return;
  }
  out[0] = 1.0;
  if (out.size() > 1) {
    out[1] = x;
  }
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) / std::sqrt(k + 1.0);
  }
}

double basis_eval(const MultiIndex& alpha, const Vec3& v)
{
  return hermite_eval_1d(alpha[0], v[0]) * hermite_eval_1d(alpha[1], v[1]) * hermite_eval_1d(alpha[2], v[2]);
}

// ---------------------------------------------------------------------------

SpectralFunction::SpectralFunction(int degree_cap)
    : cap_(degree_cap)
    , c_(basis_size(degree_cap), 0.0)
{
  if (degree_cap < 0) {
    throw std::invalid_argument("SpectralFunction: negative degree cap");
  }
}

SpectralFunction::SpectralFunction(int degree_cap, std::vector<double> coefficients)
    : cap_(degree_cap)
    , c_(std::move(coefficients))
{
  if (degree_cap < 0 || c_.size() != basis_size(degree_cap)) {
    throw std::invalid_argument("SpectralFunction: coefficient count does not match degree cap");
  }
}

SpectralFunction SpectralFunction::basis_vector(const MultiIndex& alpha, int degree_cap)
{
  SpectralFunction f(std::max(degree_cap, alpha.order()));
  f.set(alpha, 1.0);
  return f;
}

double SpectralFunction::coeff(const MultiIndex& alpha) const
{
  if (alpha.order() > cap_) {
    return 0.0;
  }
  return c_[graded_position(alpha)];
}

void SpectralFunction::set(const MultiIndex& alpha, double value)
{
  if (alpha.order() > cap_) {
    throw std::out_of_range("SpectralFunction::set: " + alpha.str() + " beyond degree cap");
  }
  c_[graded_position(alpha)] = value;
}

void SpectralFunction::add(const MultiIndex& alpha, double value)
{
  if (alpha.order() > cap_) {
    throw std::out_of_range("SpectralFunction::add: " + alpha.str() + " beyond degree cap");
  }
  c_[graded_position(alpha)] += value;
}

double SpectralFunction::norm2() const
{
  double s = 0.0;
  for (double x : c_) {
    s += x * x;
  }
  return s;
}

SpectralFunction SpectralFunction::truncated(int new_cap) const
{
  if (new_cap >= cap_) {
    return padded(new_cap);
  }
  std::vector<double> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(basis_size(new_cap)));
  return SpectralFunction(new_cap, std::move(c));
}

SpectralFunction SpectralFunction::padded(int new_cap) const
{
  if (new_cap < cap_) {
    throw std::invalid_argument("SpectralFunction::padded: cap would shrink; use truncated()");
  }
  std::vector<double> c(c_);
  c.resize(basis_size(new_cap), 0.0);
  return SpectralFunction(new_cap, std::move(c));
}

SpectralFunction& SpectralFunction::operator+=(const SpectralFunction& o)
{
  if (o.cap_ > cap_) {
    *this = padded(o.cap_);
  }
  for (std::size_t i = 0; i < o.c_.size(); ++i) {
    c_[i] += o.c_[i];
  }
  return *this;
}

SpectralFunction& SpectralFunction::operator-=(const SpectralFunction& o)
{
  if (o.cap_ > cap_) {
    *this = padded(o.cap_);
  }
  for (std::size_t i = 0; i < o.c_.size(); ++i) {
    c_[i] -= o.c_[i];
  }
  return *this;
}

SpectralFunction& SpectralFunction::operator*=(double s)
{
  for (double& x : c_) {
    x *= s;
  }
  return *this;
}

SpectralFunction operator+(SpectralFunction a, const SpectralFunction& b)
{
  a += b;
  return a;
}

SpectralFunction operator-(SpectralFunction a, const SpectralFunction& b)
{
  a -= b;
  return a;
}

SpectralFunction operator*(double s, SpectralFunction f)
{
  f *= s;
  return f;
}

double inner(const SpectralFunction& f, const SpectralFunction& g)
{
  const auto n = std::min(f.size(), g.size());
  const auto fc = f.coefficients();
  const auto gc = g.coefficients();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += fc[i] * gc[i];
  }
  return s;
}

double max_coeff_diff(const SpectralFunction& f, const SpectralFunction& g)
{
  const auto fc = f.coefficients();
  const auto gc = g.coefficients();
  const auto n = std::max(fc.size(), gc.size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < fc.size() ? fc[i] : 0.0;
    const double b = i < gc.size() ? gc[i] : 0.0;
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

// ---------------------------------------------------------------------------

SpectralFunction ladder(const SpectralFunction& f, int axis, Ladder direction)
{
  if (axis < 0 || axis > 2) {
    throw std::invalid_argument("ladder: axis must be 0, 1 or 2");
  }
  const int cap = f.degree_cap();
  const BasisIndex basis(cap);
  const auto c = f.coefficients();
  if (direction == Ladder::raise) {
    SpectralFunction out(cap + 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& alpha = basis[i];
      out.add(alpha.raised(axis), std::sqrt(alpha[axis] + 1.0) * c[i]);
    }
    return out;
  }
  SpectralFunction out(cap);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& alpha = basis[i];
    if (alpha[axis] == 0) {
      continue;
    }
    out.add(alpha.lowered(axis), std::sqrt(static_cast<double>(alpha[axis])) * c[i]);
  }
  return out;
}

SpectralFunction derivative(const SpectralFunction& f, int axis)
{
  auto out = ladder(f, axis, Ladder::lower).padded(f.degree_cap() + 1);
  out -= ladder(f, axis, Ladder::raise);
  out *= 0.5;
  return out;
}

SpectralFunction derivative(const SpectralFunction& f, const MultiIndex& alpha)
{
  SpectralFunction out = f;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < alpha[j]; ++k) {
      out = derivative(out, j);
    }
  }
  return out;
}

SpectralFunction multiply_v(const SpectralFunction& f, int axis)
{
  auto out = ladder(f, axis, Ladder::raise);
  out += ladder(f, axis, Ladder::lower);
  return out;
}

SpectralFunction harmonic_apply(const SpectralFunction& f)
{
  SpectralFunction out = f;
  const BasisIndex basis(f.degree_cap());
  auto c = out.coefficients();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c[i] *= basis[i].order() + 1.5;
  }
  return out;
}

double evaluate(const SpectralFunction& f, const Vec3& v)
{
  const int cap = f.degree_cap();
  const auto n = static_cast<std::size_t>(cap + 1);
  std::vector<double> h0(n), h1(n), h2(n);
  hermite_values_1d(v[0], h0);
  hermite_values_1d(v[1], h1);
  hermite_values_1d(v[2], h2);
  const BasisIndex basis(cap);
  const auto c = f.coefficients();
  double s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& a = basis[i];
    s += c[i] * h0[static_cast<std::size_t>(a[0])] * h1[static_cast<std::size_t>(a[1])]
         * h2[static_cast<std::size_t>(a[2])];
  }
  return s;
}

}  // namespace landau
