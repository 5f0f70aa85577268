#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "intertwine/rational.hpp"

namespace intertwine {

inline constexpr int kMaxEnumeration = 12;

// Set partition of {0..n-1} stored as a restricted growth string.
class SetPartition {
 public:
  SetPartition() = default;
  SetPartition(int n, const std::array<std::uint8_t, kMaxEnumeration>& labels);

  int size() const { return n_; }
  int num_blocks() const { return blocks_; }
  int block_of(int i) const { return labels_[i]; }
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;

 private:
  std::array<std::uint8_t, kMaxEnumeration> labels_{};
  std::uint8_t n_ = 0;
  std::uint8_t blocks_ = 0;
};

using Composition = std::vector<int>;

std::vector<SetPartition> set_partitions(int n);
void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit);
std::vector<Composition> compositions(int n);

template <class T>
T rising(const T& a, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= a + T(i);
  return r;
}

template <class T>
T falling(const T& a, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= a - T(i);
  return r;
}

std::uint64_t factorial_u64(int n);
Rational factorial_exact(int n);
Rational binomial_exact(int n, int k);
double binomial(int n, int k);

// Rate theta(i:j) = (theta/2) B(i, j), the moments of the uniform characteristic
// measure (theta/2) Leb on [0,1].
double howitt_warren_rate(int i, int j, double theta);
Rational howitt_warren_rate_exact(int i, int j, const Rational& theta);

// beta_+(m) = 1 + 1/2 + ... + 1/(m-1), beta_+(1) = 0. Exact for m <= 64.
Rational beta_plus_exact(int m);
double beta_plus(int m);

}  // namespace intertwine
