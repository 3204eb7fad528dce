#include "landau/multi_index.hpp"

#include <cmath>

namespace landau {

std::string MultiIndex::str() const
{
  return "(" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + ")";
}

namespace {

double fact(int n)
{
  double r = 1.0;
  for (int k = 2; k <= n; ++k) {
    r *= k;
  }
  return r;
}

double choose(int n, int k)
{
  if (k < 0 || k > n) {
    return 0.0;
  }
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return std::round(r);
}

}  // namespace

double factorial(const MultiIndex& alpha)
{
  return fact(alpha[0]) * fact(alpha[1]) * fact(alpha[2]);
}

double sqrt_factorial(const MultiIndex& alpha)
{
  return std::sqrt(factorial(alpha));
}

double binomial(const MultiIndex& alpha, const MultiIndex& beta)
{
  return choose(alpha[0], beta[0]) * choose(alpha[1], beta[1]) * choose(alpha[2], beta[2]);
}

std::vector<MultiIndex> indices_of_order(int m)
{
  std::vector<MultiIndex> out;
  for (int a1 = m; a1 >= 0; --a1) {
    for (int a2 = m - a1; a2 >= 0; --a2) {
      out.emplace_back(a1, a2, m - a1 - a2);
    }
  }
  return out;
}

BasisIndex::BasisIndex(int degree_cap)
    : cap_(degree_cap)
{
  if (degree_cap < 0) {
    throw std::invalid_argument("BasisIndex: negative degree cap");
  }
  list_.reserve(basis_size(cap_));
  for (int k = 0; k <= cap_; ++k) {
    for (const auto& alpha : indices_of_order(k)) {
      list_.push_back(alpha);
    }
  }
}

std::size_t BasisIndex::position(const MultiIndex& alpha) const
{
  if (alpha.order() > cap_) {
    throw std::out_of_range("BasisIndex: " + alpha.str() + " exceeds degree cap " + std::to_string(cap_));
  }
  return graded_position(alpha);
}

}  // namespace landau
