#pragma once

#include <functional>
#include <string>
#include <vector>

#include "intertwine/configuration.hpp"

namespace intertwine {

// Real function of a finite configuration, with the boxes it looks at.
struct Functional {
  std::string name;
  std::function<double(const Configuration&)> eval;
  std::vector<Interval> support;

  double operator()(const Configuration& mu) const { return eval(mu); }
};

// exp(-scale * mu(B)).
Functional exp_count(const Interval& box, double scale = 1.0);

// 1 if every box holds at least one particle.
Functional all_occupied(const std::vector<Interval>& boxes);

// f evaluated at the particles of a configuration with exactly degree(f)
// particles, 0 for any other particle count.
Functional box_value(const BoxFunction& f);

}  // namespace intertwine
