#include "intertwine/orthopolys.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"

namespace intertwine {

namespace {

constexpr int kMaxExactDegree = 4;

template <class T>
T pow_signed(const T& x, int k) {
  T r = 1;
  if (k >= 0) {
    for (int i = 0; i < k; ++i) r *= x;
  } else {
    for (int i = 0; i < -k; ++i) r /= x;
  }
  return r;
}

template <class T>
T binom_as(int n, int k) {
  if constexpr (std::is_same_v<T, Rational>) return binomial_exact(n, k);
  else return binomial(n, k);
}

int total(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

void check_degree(int n) {
  if (n > kMaxExactDegree) throw CapacityError("polynomial degree above 4");
}

// Visits every vector c with 0 <= c[k] <= dims[k].
template <class Fn>
void for_each_sub_count(const std::vector<int>& dims, Fn&& fn) {
  std::vector<int> c(dims.size(), 0);
  while (true) {
    fn(c);
    std::size_t i = 0;
    while (i < c.size() && ++c[i] > dims[i]) c[i++] = 0;
    if (i == c.size()) return;
  }
}

}  // namespace

void PascalParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("Pascal parameter p must lie in (0, 1)");
  alpha.validate();
  if (!(alpha.rate > 0.0)) throw InvalidInput("Pascal intensity must be positive");
}

const IntensitySpec& family_intensity(const PolyFamily& family) {
  if (const auto* poisson = std::get_if<PoissonFamily>(&family)) return poisson->lambda;
  return std::get<MeixnerFamily>(family).params.alpha;
}

template <class T>
T meixner_uni(int n, const T& x, const T& p, const T& a) {
  if (n < 0) throw InvalidInput("negative degree");
  const T q = T(1) - T(1) / p;
  T sum = 0;
  for (int k = 0; k <= n; ++k) {
    T term = binom_as<T>(n, k);
    term *= pow_signed(q, k - n);
    term *= rising(T(a + T(k)), n - k);
    term *= falling(x, k);
    sum += term;
  }
  return sum;
}

template <class T>
T charlier_monic(int n, const T& x, const T& a) {
  if (n < 0) throw InvalidInput("negative degree");
  T sum = 0;
  for (int k = 0; k <= n; ++k) {
    T term = binom_as<T>(n, k);
    term *= pow_signed(T(-a), n - k);
    term *= falling(x, k);
    sum += term;
  }
  return sum;
}

template <class T>
T meixner_kernel_sum(const std::vector<int>& dims, const std::vector<T>& alphas,
                     const std::vector<int>& counts, const T& p) {
  const int n = total(dims);
  check_degree(n);
  if (dims.size() != alphas.size() || dims.size() != counts.size())
    throw InvalidInput("block data differ in length");
  const T q = T(1) - T(1) / p;
  T sum = 0;
  for_each_sub_count(dims, [&](const std::vector<int>& c) {
    const int k = total(c);
    // Ordered k-tuples of distinct particles with c[i] of them in block i.
    T tuples = T(static_cast<double>(factorial_u64(k)));
    for (std::size_t i = 0; i < c.size(); ++i) {
      tuples /= T(static_cast<double>(factorial_u64(c[i])));
      tuples *= falling(T(counts[i]), c[i]);
    }
    if (tuples == 0) return;
    T coef = T(static_cast<double>(factorial_u64(n)));
    coef /= T(static_cast<double>(factorial_u64(k) * factorial_u64(n - k)));
    coef *= pow_signed(q, k - n);
    sum += coef * tuples * symmetrized_kappa_closed_form(dims, alphas, c);
  });
  return sum;
}

template <class T>
T meixner_product_formula(const std::vector<int>& dims, const std::vector<T>& alphas,
                          const std::vector<int>& counts, const T& p) {
  T r = 1;
  for (std::size_t k = 0; k < dims.size(); ++k)
    r *= meixner_uni(dims[k], T(counts[k]), p, alphas[k]);
  return r;
}

template <class T>
T meixner_kernel_sum_enumerated(const std::vector<int>& dims, const std::vector<T>& alphas,
                                const std::vector<int>& point_blocks, const T& p) {
  const int n = total(dims);
  check_degree(n);
  const T q = T(1) - T(1) / p;
  const int np = static_cast<int>(point_blocks.size());
  T sum = 0;
  std::vector<int> chosen;
  std::vector<bool> used(np, false);
  std::function<void()> visit = [&]() {
    const int k = static_cast<int>(chosen.size());
    std::vector<int> z;
    for (int i : chosen) z.push_back(point_blocks[i]);
    T coef = T(static_cast<double>(factorial_u64(n)));
    coef /= T(static_cast<double>(factorial_u64(k) * factorial_u64(n - k)));
    coef *= pow_signed(q, k - n);
    sum += coef * symmetrized_kappa_recursive(dims, alphas, z);
    if (k == n) return;
    for (int i = 0; i < np; ++i) {
      if (used[i]) continue;
      used[i] = true;
      chosen.push_back(i);
      visit();
      chosen.pop_back();
      used[i] = false;
    }
  };
  visit();
  return sum;
}

template <class T>
T wiener_ito_counts(const std::vector<int>& dims, const std::vector<T>& masses,
                    const std::vector<int>& counts) {
  const int n = total(dims);
  check_degree(n);
  if (dims.size() != masses.size() || dims.size() != counts.size())
    throw InvalidInput("block data differ in length");
  T w = 1;
  for (int d : dims) w *= T(static_cast<double>(factorial_u64(d)));
  w /= T(static_cast<double>(factorial_u64(n)));
  T sum = 0;
  for_each_sub_count(dims, [&](const std::vector<int>& c) {
    const int k = total(c);
    T tuples = T(static_cast<double>(factorial_u64(k)));
    T inner = T(static_cast<double>(factorial_u64(n - k)));
    for (std::size_t i = 0; i < c.size(); ++i) {
      tuples /= T(static_cast<double>(factorial_u64(c[i])));
      tuples *= falling(T(counts[i]), c[i]);
      inner /= T(static_cast<double>(factorial_u64(dims[i] - c[i])));
      inner *= pow_signed(masses[i], dims[i] - c[i]);
    }
    if (tuples == 0) return;
    T coef = T(static_cast<double>(factorial_u64(n)));
    coef /= T(static_cast<double>(factorial_u64(k) * factorial_u64(n - k)));
    if ((n - k) % 2 != 0) coef = -coef;
    sum += coef * tuples * w * inner;
  });
  return sum;
}

#define INTERTWINE_INSTANTIATE(T)                                                              \
  template T meixner_uni<T>(int, const T&, const T&, const T&);                                \
  template T charlier_monic<T>(int, const T&, const T&);                                       \
  template T meixner_kernel_sum<T>(const std::vector<int>&, const std::vector<T>&,             \
                                   const std::vector<int>&, const T&);                         \
  template T meixner_product_formula<T>(const std::vector<int>&, const std::vector<T>&,        \
                                        const std::vector<int>&, const T&);                    \
  template T meixner_kernel_sum_enumerated<T>(const std::vector<int>&, const std::vector<T>&,  \
                                              const std::vector<int>&, const T&);              \
  template T wiener_ito_counts<T>(const std::vector<int>&, const std::vector<T>&,              \
                                  const std::vector<int>&);

INTERTWINE_INSTANTIATE(double)
INTERTWINE_INSTANTIATE(Rational)
#undef INTERTWINE_INSTANTIATE

namespace {

std::vector<int> block_counts(const Configuration& mu, const BoxFunction& f) {
  std::vector<int> c;
  for (const auto& b : f.blocks()) c.push_back(mu.count(b.box));
  return c;
}

template <class T>
std::vector<T> block_masses(const BoxFunction& f, const IntensitySpec& m) {
  std::vector<T> out;
  for (const auto& b : f.blocks()) {
    if constexpr (std::is_same_v<T, Rational>) out.push_back(m.measure_exact(b.box));
    else out.push_back(m.measure(b.box));
  }
  return out;
}

}  // namespace

double wiener_ito(const Configuration& mu, const BoxFunction& f, const IntensitySpec& lambda) {
  lambda.validate();
  return wiener_ito_counts(f.multiplicities(), block_masses<double>(f, lambda),
                           block_counts(mu, f));
}

Rational wiener_ito_exact(const Configuration& mu, const BoxFunction& f,
                          const IntensitySpec& lambda) {
  lambda.validate();
  return wiener_ito_counts(f.multiplicities(), block_masses<Rational>(f, lambda),
                           block_counts(mu, f));
}

double meixner_inf(const Configuration& mu, const BoxFunction& f, const PascalParams& params) {
  params.validate();
  return meixner_kernel_sum(f.multiplicities(), block_masses<double>(f, params.alpha),
                            block_counts(mu, f), params.p);
}

Rational meixner_inf_exact(const Configuration& mu, const BoxFunction& f,
                           const PascalParams& params) {
  params.validate();
  return meixner_kernel_sum(f.multiplicities(), block_masses<Rational>(f, params.alpha),
                            block_counts(mu, f), to_rational(params.p));
}

double poly_eval(const Configuration& mu, const BoxFunction& f, const PolyFamily& family) {
  if (const auto* poisson = std::get_if<PoissonFamily>(&family))
    return wiener_ito(mu, f, poisson->lambda);
  return meixner_inf(mu, f, std::get<MeixnerFamily>(family).params);
}

GeneralPolyEvaluator::GeneralPolyEvaluator(PointFunction g, const PolyFamily& family, int n,
                                           const QuadratureSpec& quad)
    : g_(std::move(g)), family_(family), n_(n), policy_(quad.policy) {
  if (n < 0 || n > 2) throw CapacityError("general polynomial evaluation supports degree <= 2");
  const IntensitySpec& m = family_intensity(family_);
  m.validate();
  rate_ = m.rate;
  const Interval domain = quad.decay_box.intersect(m.window());
  if (domain.upper > domain.lower) panels_ = split_panels(domain, quad.breakpoints);
  if (n_ == 1) {
    mass_ = integral1([&](double y) { return g_(std::span<const double>(&y, 1)); });
  } else if (n_ == 2) {
    double_mass_ = panels_.empty() ? 0.0
                                   : rate_ * rate_ *
                                         integrate_doubling_2d([&](double a, double b) { return sym(a, b); },
                                                               panels_, policy_);
    diagonal_ = integral1([&](double y) { return sym(y, y); });
  }
}

double GeneralPolyEvaluator::integral1(const std::function<double(double)>& fn) const {
  if (panels_.empty()) return 0.0;
  return rate_ * integrate_doubling(fn, panels_, policy_);
}

double GeneralPolyEvaluator::sym(double a, double b) const {
  const double ab[2] = {a, b};
  const double ba[2] = {b, a};
  return 0.5 * (g_(std::span<const double>(ab, 2)) + g_(std::span<const double>(ba, 2)));
}

double GeneralPolyEvaluator::operator()(const Configuration& mu) const {
  if (n_ == 0) return g_({});
  const std::vector<double> x = mu.points();
  const bool poisson = std::holds_alternative<PoissonFamily>(family_);

  if (n_ == 1) {
    double direct = 0.0;
    for (double xi : x) direct += g_(std::span<const double>(&xi, 1));
    if (poisson) return direct - mass_;
    const double p = std::get<MeixnerFamily>(family_).params.p;
    return direct - (p / (1.0 - p)) * mass_;
  }

  double pairs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i != j) pairs += sym(x[i], x[j]);
    }
  }
  double singles = 0.0;
  for (double xi : x) singles += integral1([&](double y) { return sym(xi, y); });
  if (poisson) return double_mass_ - 2.0 * singles + pairs;

  const double p = std::get<MeixnerFamily>(family_).params.p;
  const double q = 1.0 - 1.0 / p;
  double self = 0.0;
  for (double xi : x) self += sym(xi, xi);
  return (double_mass_ + diagonal_) / (q * q) + 2.0 / q * (singles + self) + pairs;
}

double poly_eval_general(const Configuration& mu, const PointFunction& g,
                         const PolyFamily& family, int n, const QuadratureSpec& quad) {
  return GeneralPolyEvaluator(g, family, n, quad)(mu);
}

}  // namespace intertwine
