#include "intertwine/functionals.hpp"

#include <cmath>
#include <sstream>

namespace intertwine {

namespace {

std::string describe(const Interval& b) {
  std::ostringstream s;
  s << '[' << b.lower << ',' << b.upper << ')';
  return s.str();
}

}  // namespace

Functional exp_count(const Interval& box, double scale) {
  std::ostringstream name;
  name << "exp(-" << scale << "*count" << describe(box) << ')';
  return {name.str(),
          [box, scale](const Configuration& mu) { return std::exp(-scale * mu.count(box)); },
          {box}};
}

Functional all_occupied(const std::vector<Interval>& boxes) {
  std::string name = "occupied";
  for (const auto& b : boxes) name += describe(b);
  return {name,
          [boxes](const Configuration& mu) {
            for (const auto& b : boxes) {
              if (mu.count(b) == 0) return 0.0;
            }
            return 1.0;
          },
          boxes};
}

Functional box_value(const BoxFunction& f) {
  std::vector<Interval> support;
  std::string name = "box";
  for (const auto& b : f.blocks()) {
    support.push_back(b.box);
    name += describe(b.box) + "^" + std::to_string(b.multiplicity);
  }
  return {name,
          [f](const Configuration& mu) {
            if (mu.size() != f.degree()) return 0.0;
            const auto pts = mu.points();
            return symmetrization_value(pts, f);
          },
          support};
}

}  // namespace intertwine
