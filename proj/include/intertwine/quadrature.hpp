#pragma once

#include <functional>
#include <span>
#include <vector>

#include "intertwine/configuration.hpp"

namespace intertwine {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

// Splits the domain at every breakpoint strictly inside it.
std::vector<Interval> split_panels(const Interval& domain, std::span<const double> breakpoints);

double integrate_fixed(const std::function<double(double)>& fn, std::span<const Interval> panels,
                       int order);
double integrate_fixed_2d(const std::function<double(double, double)>& fn,
                          std::span<const Interval> panels, int order);

struct DoublingPolicy {
  double tolerance = 1e-8;
  int initial_order = 8;
  int max_order = 4096;
};

// Doubles the per-panel order until successive values differ by less than the
// tolerance; throws ToleranceFailure past max_order.
double integrate_doubling(const std::function<double(double)>& fn,
                          std::span<const Interval> panels, const DoublingPolicy& policy);
double integrate_doubling_2d(const std::function<double(double, double)>& fn,
                             std::span<const Interval> panels, const DoublingPolicy& policy);

}  // namespace intertwine
