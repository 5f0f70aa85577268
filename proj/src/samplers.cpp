#include "intertwine/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "intertwine/errors.hpp"

namespace intertwine {

LogarithmicSampler::LogarithmicSampler(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("logarithmic parameter must lie in (0, 1)");
  norm_ = -std::log1p(-p);
  double cum = 0.0;
  double pk = 1.0;
  for (int k = 1;; ++k) {
    pk *= p;
    cum += pk / (k * norm_);
    cdf_.push_back(cum);
    if (1.0 - cum < 1e-12 || k >= 1 << 20) break;
  }
}

int LogarithmicSampler::operator()(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it != cdf_.end()) return static_cast<int>(it - cdf_.begin()) + 1;
  int k = static_cast<int>(cdf_.size());
  double cum = cdf_.back();
  double pk = std::pow(p_, k);
  while (cum <= u && k < (1 << 30)) {
    ++k;
    pk *= p_;
    const double next = cum + pk / (k * norm_);
    if (next == cum) break;
    cum = next;
  }
  return k;
}

Configuration sample_poisson(const IntensitySpec& alpha, RngStream& rng) {
  alpha.validate();
  const Interval w = alpha.window();
  const double mean = alpha.measure(w);
  if (mean <= 0.0) return {};
  std::poisson_distribution<long> count(mean);
  const long n = count(rng);
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (auto& x : pts) x = w.lower + (w.upper - w.lower) * rng.uniform();
  return Configuration::from_points(pts);
}

Configuration sample_pascal(const PascalParams& params, const LogarithmicSampler& sizes,
                            RngStream& rng) {
  params.validate();
  const Interval w = params.alpha.window();
  const double clusters = params.alpha.measure(w) * -std::log1p(-params.p);
  std::poisson_distribution<long> count(clusters);
  const long n = count(rng);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = w.lower + (w.upper - w.lower) * rng.uniform();
    atoms.push_back({x, sizes(rng)});
  }
  return Configuration::from_atoms(std::move(atoms));
}

Configuration sample_pascal(const PascalParams& params, RngStream& rng) {
  return sample_pascal(params, LogarithmicSampler(params.p), rng);
}

PointSampler poisson_sampler(const IntensitySpec& alpha) {
  alpha.validate();
  return [alpha](RngStream& rng) { return sample_poisson(alpha, rng); };
}

PointSampler pascal_sampler(const PascalParams& params) {
  params.validate();
  auto sizes = std::make_shared<const LogarithmicSampler>(params.p);
  return [params, sizes](RngStream& rng) { return sample_pascal(params, *sizes, rng); };
}

PointSampler family_sampler(const PolyFamily& family) {
  if (const auto* poisson = std::get_if<PoissonFamily>(&family))
    return poisson_sampler(poisson->lambda);
  return pascal_sampler(std::get<MeixnerFamily>(family).params);
}

McEstimate estimate_factorial_moment(const PointSampler& sampler, const BoxFunction& f,
                                     std::int64_t replicas, std::uint64_t seed) {
  if (replicas < 2) throw InvalidInput("need at least two replicas");
  const auto values = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    return static_cast<double>(factorial_integral(sampler(rng), f));
  });
  return summarize(values, seed);
}

}  // namespace intertwine
