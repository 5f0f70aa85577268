#include "intertwine/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "intertwine/errors.hpp"

namespace intertwine {

const GaussLegendreRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  if (order < 1) throw InvalidInput("quadrature order must be positive");
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<GaussLegendreRule>();
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(order);
    for (int i = 0; i < order; ++i) {
      double x = 0.0;
      double w = 0.0;
      gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &x, &w, table);
      rule->nodes.push_back(x);
      rule->weights.push_back(w);
    }
    gsl_integration_glfixed_table_free(table);
    slot = std::move(rule);
  }
  return *slot;
}

std::vector<Interval> split_panels(const Interval& domain, std::span<const double> breakpoints) {
  std::vector<double> cuts{domain.lower, domain.upper};
  for (double b : breakpoints) {
    if (b > domain.lower && b < domain.upper) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Interval> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) panels.push_back({cuts[i], cuts[i + 1]});
  return panels;
}

double integrate_fixed(const std::function<double(double)>& fn, std::span<const Interval> panels,
                       int order) {
  const auto& rule = gauss_legendre(order);
  double total = 0.0;
  for (const auto& p : panels) {
    const double half = 0.5 * (p.upper - p.lower);
    const double mid = 0.5 * (p.upper + p.lower);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
    total += half * s;
  }
  return total;
}

double integrate_fixed_2d(const std::function<double(double, double)>& fn,
                          std::span<const Interval> panels, int order) {
  const auto& rule = gauss_legendre(order);
  std::vector<double> xs;
  std::vector<double> ws;
  for (const auto& p : panels) {
    const double half = 0.5 * (p.upper - p.lower);
    const double mid = 0.5 * (p.upper + p.lower);
    for (int i = 0; i < order; ++i) {
      xs.push_back(mid + half * rule.nodes[i]);
      ws.push_back(half * rule.weights[i]);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) row += ws[j] * fn(xs[i], xs[j]);
    total += ws[i] * row;
  }
  return total;
}

namespace {

template <class Eval>
double doubling(const Eval& eval, const DoublingPolicy& policy) {
  int order = policy.initial_order;
  double prev = eval(order);
  while (true) {
    const int next = order * 2;
    if (next > policy.max_order)
      throw ToleranceFailure("quadrature did not reach tolerance " +
                             std::to_string(policy.tolerance) + " by order " +
                             std::to_string(order));
    const double cur = eval(next);
    if (std::abs(cur - prev) < policy.tolerance) return cur;
    prev = cur;
    order = next;
  }
}

}  // namespace

double integrate_doubling(const std::function<double(double)>& fn,
                          std::span<const Interval> panels, const DoublingPolicy& policy) {
  return doubling([&](int q) { return integrate_fixed(fn, panels, q); }, policy);
}

double integrate_doubling_2d(const std::function<double(double, double)>& fn,
                             std::span<const Interval> panels, const DoublingPolicy& policy) {
  return doubling([&](int q) { return integrate_fixed_2d(fn, panels, q); }, policy);
}

}  // namespace intertwine
