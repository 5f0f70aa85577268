#include "intertwine/combinatorics.hpp"

#include <cmath>
#include <string>

#include "intertwine/errors.hpp"

namespace intertwine {

SetPartition::SetPartition(int n, const std::array<std::uint8_t, kMaxEnumeration>& labels)
    : labels_(labels), n_(static_cast<std::uint8_t>(n)) {
  int b = 0;
  for (int i = 0; i < n; ++i) b = std::max(b, labels_[i] + 1);
  blocks_ = static_cast<std::uint8_t>(b);
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(blocks_);
  for (int i = 0; i < n_; ++i) out[labels_[i]].push_back(i);
  return out;
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> s(blocks_, 0);
  for (int i = 0; i < n_; ++i) ++s[labels_[i]];
  return s;
}

namespace {

void check_bounds(int n) {
  if (n < 1 || n > kMaxEnumeration)
    throw CapacityError("enumeration size " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxEnumeration) + "]");
}

}  // namespace

void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit) {
  check_bounds(n);
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::array<std::uint8_t, kMaxEnumeration> a{};
  std::array<std::uint8_t, kMaxEnumeration> prefix_max{};
  while (true) {
    visit(SetPartition(n, a));
    int i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](const SetPartition& s) { out.push_back(s); });
  return out;
}

std::vector<Composition> compositions(int n) {
  check_bounds(n);
  std::vector<Composition> out;
  // Bit i of the mask set means a cut after position i.
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    Composition c;
    int part = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (mask & (1u << i)) {
        c.push_back(part);
        part = 1;
      } else {
        ++part;
      }
    }
    c.push_back(part);
    out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw CapacityError("factorial argument outside [0, 20]");
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

Rational factorial_exact(int n) {
  if (n < 0) throw InvalidInput("negative factorial argument");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}

Rational binomial_exact(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

double binomial(int n, int k) { return to_double(binomial_exact(n, k)); }

double howitt_warren_rate(int i, int j, double theta) {
  if (i < 1 || j < 1) throw InvalidInput("rate indices must be positive");
  if (!(theta > 0.0)) throw InvalidInput("stickiness must be positive");
  if (i + j > 20) {
    return 0.5 * theta *
           std::exp(std::lgamma(i) + std::lgamma(j) - std::lgamma(i + j));
  }
  return 0.5 * theta * static_cast<double>(factorial_u64(i - 1)) *
         static_cast<double>(factorial_u64(j - 1)) /
         static_cast<double>(factorial_u64(i + j - 1));
}

Rational howitt_warren_rate_exact(int i, int j, const Rational& theta) {
  if (i < 1 || j < 1) throw InvalidInput("rate indices must be positive");
  if (theta <= 0) throw InvalidInput("stickiness must be positive");
  Rational r = theta / 2;
  r *= factorial_exact(i - 1) * factorial_exact(j - 1) / factorial_exact(i + j - 1);
  return r;
}

Rational beta_plus_exact(int m) {
  if (m < 1 || m > 64) throw CapacityError("beta_plus argument outside [1, 64]");
  Rational s = 0;
  for (int j = 1; j < m; ++j) s += Rational(1, j);
  return s;
}

double beta_plus(int m) {
  static const auto table = [] {
    std::array<double, 65> t{};
    for (int m = 1; m <= 64; ++m) t[m] = to_double(beta_plus_exact(m));
    return t;
  }();
  if (m < 1 || m > 64) throw CapacityError("beta_plus argument outside [1, 64]");
  return table[m];
}

}  // namespace intertwine
