#include "intertwine/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "intertwine/errors.hpp"

namespace intertwine {

McEstimate summarize(std::span<const double> values, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(values.size());
  if (n < 2) throw InvalidInput("an estimate needs at least two replicas");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n)), n, seed};
}

std::vector<double> run_replicas(std::int64_t count, const std::function<double(std::int64_t)>& fn) {
  std::vector<double> out(static_cast<std::size_t>(count));
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

McEstimate difference(const McEstimate& a, const McEstimate& b) {
  return {a.mean - b.mean, std::hypot(a.std_error, b.std_error),
          std::min(a.replicas, b.replicas), a.seed};
}

}  // namespace intertwine
