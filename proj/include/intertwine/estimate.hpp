#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace intertwine {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
};

// Sample mean and standard error, summed in index order.
McEstimate summarize(std::span<const double> values, std::uint64_t seed);

// Evaluates fn(0..count-1) in parallel; results are stored by index so the
// reduction order never depends on the schedule.
std::vector<double> run_replicas(std::int64_t count, const std::function<double(std::int64_t)>& fn);

// Difference of two independent estimates, with combined standard error.
McEstimate difference(const McEstimate& a, const McEstimate& b);

}  // namespace intertwine
