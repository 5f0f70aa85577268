#include "intertwine/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"

namespace intertwine {

Interval Interval::intersect(const Interval& other) const {
  return {std::max(lower, other.lower), std::min(upper, other.upper)};
}

Configuration Configuration::from_points(std::span<const double> points) {
  std::vector<double> sorted(points.begin(), points.end());
  for (double x : sorted) {
    if (!std::isfinite(x)) throw InvalidInput("configuration point is not finite");
  }
  std::sort(sorted.begin(), sorted.end());
  Configuration c;
  for (double x : sorted) {
    if (!c.atoms_.empty() && c.atoms_.back().position == x) {
      ++c.atoms_.back().multiplicity;
    } else {
      c.atoms_.push_back({x, 1});
    }
  }
  c.total_ = static_cast<int>(sorted.size());
  return c;
}

Configuration Configuration::from_atoms(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.position)) throw InvalidInput("configuration atom is not finite");
    if (a.multiplicity < 1) throw InvalidInput("atom multiplicity must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  Configuration c;
  for (const auto& a : atoms) {
    if (!c.atoms_.empty() && c.atoms_.back().position == a.position) {
      c.atoms_.back().multiplicity += a.multiplicity;
    } else {
      c.atoms_.push_back(a);
    }
    c.total_ += a.multiplicity;
  }
  return c;
}

int Configuration::count(const Interval& box) const {
  auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), box.lower,
                             [](const Atom& a, double x) { return a.position < x; });
  int n = 0;
  for (auto it = lo; it != atoms_.end() && it->position < box.upper; ++it) n += it->multiplicity;
  return n;
}

std::vector<double> Configuration::points() const {
  std::vector<double> out;
  out.reserve(total_);
  for (const auto& a : atoms_) out.insert(out.end(), a.multiplicity, a.position);
  return out;
}

Configuration Configuration::restricted(const Interval& box) const {
  Configuration c;
  for (const auto& a : atoms_) {
    if (box.contains(a.position)) {
      c.atoms_.push_back(a);
      c.total_ += a.multiplicity;
    }
  }
  return c;
}

Configuration Configuration::operator+(const Configuration& other) const {
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return from_atoms(std::move(all));
}

BoxFunction::BoxFunction(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InvalidInput("box function needs at least one block");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (!std::isfinite(b.box.lower) || !std::isfinite(b.box.upper) || !(b.box.lower < b.box.upper))
      throw InvalidInput("box must be a nonempty finite interval");
    if (b.multiplicity < 1) throw InvalidInput("block multiplicity must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = blocks_[j].box;
      if (b.box.lower < o.upper && o.lower < b.box.upper)
        throw InvalidInput("box function blocks must be disjoint");
    }
    degree_ += b.multiplicity;
  }
}

std::vector<int> BoxFunction::multiplicities() const {
  std::vector<int> d;
  for (const auto& b : blocks_) d.push_back(b.multiplicity);
  return d;
}

int BoxFunction::block_of(double x) const {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].box.contains(x)) return static_cast<int>(k);
  }
  return -1;
}

Interval BoxFunction::hull() const {
  Interval h = blocks_.front().box;
  for (const auto& b : blocks_) {
    h.lower = std::min(h.lower, b.box.lower);
    h.upper = std::max(h.upper, b.box.upper);
  }
  return h;
}

std::uint64_t factorial_integral(const Configuration& mu, const BoxFunction& f) {
  std::uint64_t r = 1;
  for (const auto& b : f.blocks()) {
    const std::uint64_t n = static_cast<std::uint64_t>(mu.count(b.box));
    for (int i = 0; i < b.multiplicity; ++i) {
      if (n < static_cast<std::uint64_t>(i)) return 0;
      if (__builtin_mul_overflow(r, n - i, &r))
        throw CapacityError("factorial integral overflows 64 bits");
    }
  }
  return r;
}

namespace {

bool counts_match(std::span<const double> tuple, const BoxFunction& f) {
  if (static_cast<int>(tuple.size()) != f.degree())
    throw InvalidInput("tuple length " + std::to_string(tuple.size()) +
                       " does not match degree " + std::to_string(f.degree()));
  std::vector<int> counts(f.num_blocks(), 0);
  for (double x : tuple) {
    const int k = f.block_of(x);
    if (k < 0) return false;
    ++counts[k];
  }
  for (int k = 0; k < f.num_blocks(); ++k) {
    if (counts[k] != f.blocks()[k].multiplicity) return false;
  }
  return true;
}

}  // namespace

Rational symmetrization_weight(std::span<const double> tuple, const BoxFunction& f) {
  if (!counts_match(tuple, f)) return Rational(0);
  Rational w = 1;
  for (const auto& b : f.blocks()) w *= factorial_exact(b.multiplicity);
  w /= factorial_exact(f.degree());
  return w;
}

double symmetrization_value(std::span<const double> tuple, const BoxFunction& f) {
  if (!counts_match(tuple, f)) return 0.0;
  double w = 1.0;
  for (const auto& b : f.blocks()) w *= static_cast<double>(factorial_u64(b.multiplicity));
  return w / static_cast<double>(factorial_u64(f.degree()));
}

}  // namespace intertwine
