#pragma once

#include <functional>
#include <vector>

#include "intertwine/configuration.hpp"
#include "intertwine/estimate.hpp"
#include "intertwine/kernels.hpp"
#include "intertwine/orthopolys.hpp"
#include "intertwine/rng.hpp"

namespace intertwine {

// Logarithmic law P[K = k] = p^k / (k (-log(1-p))) by inversion on a cached
// cumulative table, continuing term by term in the far tail.
class LogarithmicSampler {
 public:
  explicit LogarithmicSampler(double p);
  int operator()(RngStream& rng) const;
  double p() const { return p_; }

 private:
  double p_;
  double norm_;
  std::vector<double> cdf_;
};

Configuration sample_poisson(const IntensitySpec& alpha, RngStream& rng);
Configuration sample_pascal(const PascalParams& params, RngStream& rng);
Configuration sample_pascal(const PascalParams& params, const LogarithmicSampler& sizes,
                            RngStream& rng);

using PointSampler = std::function<Configuration(RngStream&)>;

PointSampler poisson_sampler(const IntensitySpec& alpha);
PointSampler pascal_sampler(const PascalParams& params);
PointSampler family_sampler(const PolyFamily& family);

// Replica r draws from the stream (seed, r).
McEstimate estimate_factorial_moment(const PointSampler& sampler, const BoxFunction& f,
                                     std::int64_t replicas, std::uint64_t seed);

}  // namespace intertwine
