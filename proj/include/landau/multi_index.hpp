#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

/// Multi-index α = (α₁, α₂, α₃) of nonnegative integers.
struct MultiIndex
{
  std::array<int, 3> a{0, 0, 0};

  constexpr MultiIndex() = default;
  constexpr MultiIndex(int a1, int a2, int a3)
      : a{a1, a2, a3}
  {
    if (a1 < 0 || a2 < 0 || a3 < 0) {
      throw std::invalid_argument("MultiIndex: negative component");
    }
  }

  constexpr int operator[](int j) const { return a[static_cast<std::size_t>(j)]; }
  constexpr int order() const { return a[0] + a[1] + a[2]; }

  static constexpr MultiIndex unit(int j)
  {
    MultiIndex e;
    e.a[static_cast<std::size_t>(j)] = 1;
    return e;
  }

  /// α + e_j
  constexpr MultiIndex raised(int j) const
  {
    MultiIndex r = *this;
    ++r.a[static_cast<std::size_t>(j)];
    return r;
  }

  /// α − e_j; only valid when α_j ≥ 1.
  constexpr MultiIndex lowered(int j) const
  {
    if (a[static_cast<std::size_t>(j)] < 1) {
      throw std::domain_error("MultiIndex: lowering a zero component");
    }
    MultiIndex r = *this;
    --r.a[static_cast<std::size_t>(j)];
    return r;
  }

  /// componentwise β ≤ α
  constexpr bool dominated_by(const MultiIndex& other) const
  {
    return a[0] <= other.a[0] && a[1] <= other.a[1] && a[2] <= other.a[2];
  }

  constexpr MultiIndex operator+(const MultiIndex& o) const
  {
    return {a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2]};
  }
  constexpr MultiIndex operator-(const MultiIndex& o) const
  {
    return {a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2]};
  }

  /// parity class in {0..7}: bit j set when α_j is odd
  constexpr int parity() const { return (a[0] & 1) | ((a[1] & 1) << 1) | ((a[2] & 1) << 2); }

  constexpr auto operator<=>(const MultiIndex&) const = default;

  std::string str() const;
};

/// α! = α₁!α₂!α₃!
double factorial(const MultiIndex& alpha);

/// √(α!)
double sqrt_factorial(const MultiIndex& alpha);

/// multinomial-style binomial C(α, β) = Π C(α_j, β_j)
double binomial(const MultiIndex& alpha, const MultiIndex& beta);

/// number of multi-indices with |α| ≤ D
constexpr std::size_t basis_size(int degree_cap)
{
  if (degree_cap < 0) {
    return 0;
  }
  const auto d = static_cast<std::size_t>(degree_cap);
  return (d + 1) * (d + 2) * (d + 3) / 6;
}

/// Position of α in the graded-lex order below (independent of any cap).
constexpr std::size_t graded_position(const MultiIndex& alpha)
{
  const auto k = static_cast<std::size_t>(alpha.order());
  const auto rest = k - static_cast<std::size_t>(alpha[0]);
  return k * (k + 1) * (k + 2) / 6 + rest * (rest + 1) / 2 + static_cast<std::size_t>(alpha[2]);
}

/// Graded lexicographic enumeration of {α : |α| ≤ D}.
///
/// Order: by |α| ascending, then α₁ descending, then α₂ descending. Index 0 is
/// always (0,0,0). The ordering is part of the on-disk matrix format.
class BasisIndex
{
 public:
  explicit BasisIndex(int degree_cap);

  int degree_cap() const { return cap_; }
  std::size_t size() const { return list_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return list_[i]; }
  const std::vector<MultiIndex>& indices() const { return list_; }

  /// position of α; α must satisfy |α| ≤ D
  std::size_t position(const MultiIndex& alpha) const;
  bool contains(const MultiIndex& alpha) const { return alpha.order() <= cap_; }

  static constexpr int kOrderingVersion = 1;

 private:
  int cap_;
  std::vector<MultiIndex> list_;
};

/// All multi-indices with |α| = m in graded-lex order.
std::vector<MultiIndex> indices_of_order(int m);

}  // namespace landau
