#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "intertwine/rational.hpp"

namespace intertwine {

// Half-open interval [lower, upper).
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x < upper; }
  double length() const { return upper > lower ? upper - lower : 0.0; }
  Interval intersect(const Interval& other) const;
  bool operator==(const Interval&) const = default;
};

struct Atom {
  double position = 0.0;
  int multiplicity = 0;
  bool operator==(const Atom&) const = default;
};

// Finite counting measure on the real line, stored as strictly increasing atoms.
class Configuration {
 public:
  Configuration() = default;

  static Configuration from_points(std::span<const double> points);
  static Configuration from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int size() const { return total_; }
  bool empty() const { return total_ == 0; }
  int count(const Interval& box) const;
  std::vector<double> points() const;

  Configuration restricted(const Interval& box) const;
  Configuration operator+(const Configuration& other) const;
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<Atom> atoms_;
  int total_ = 0;
};

struct Block {
  Interval box;
  int multiplicity = 1;
  bool operator==(const Block&) const = default;
};

// Symmetrization of the indicator of B_1^{d_1} x ... x B_N^{d_N}.
class BoxFunction {
 public:
  BoxFunction() = default;
  explicit BoxFunction(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int degree() const { return degree_; }
  std::vector<int> multiplicities() const;

  // Index of the block containing x, or -1.
  int block_of(double x) const;
  Interval hull() const;
  bool operator==(const BoxFunction&) const = default;

 private:
  std::vector<Block> blocks_;
  int degree_ = 0;
};

// Integral of the box function against the factorial measure: prod_k (mu(B_k))_{d_k}.
std::uint64_t factorial_integral(const Configuration& mu, const BoxFunction& f);

// Value of the symmetrized indicator at an m-tuple: d_1!...d_N!/m! on matching tuples.
Rational symmetrization_weight(std::span<const double> tuple, const BoxFunction& f);
double symmetrization_value(std::span<const double> tuple, const BoxFunction& f);

}  // namespace intertwine
