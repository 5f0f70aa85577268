#pragma once

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "intertwine/configuration.hpp"
#include "intertwine/quadrature.hpp"
#include "intertwine/rng.hpp"

namespace intertwine {

struct CorrelatedModel {
  double a = 0.5;
};

enum class StickyScheme { Pair, Rwre };

struct StickyModel {
  double theta = 1.0;
  // Time step of the pair scheme.
  double dt = 2.5e-5;
  StickyScheme scheme = StickyScheme::Rwre;
  // Lattice spacing of the random walk scheme; its time step is epsilon^2.
  double epsilon = 0.02;
};

struct ModelSpec {
  std::variant<CorrelatedModel, StickyModel> kind;
  Interval window{-4.5, 4.5};
  double margin = 3.0;

  // Checks parameter ranges and margin >= 6 sqrt(t_max).
  void validate(double t_max) const;
  // Window shrunk by the margin on both sides; test functions must live here.
  Interval interior() const { return {window.lower + margin, window.upper - margin}; }
  bool is_sticky() const { return std::holds_alternative<StickyModel>(kind); }
};

struct LabeledState {
  std::vector<double> positions;
  double time = 0.0;
};

LabeledState correlated_evolve(const LabeledState& x, double t, double a, RngStream& rng);

double heat_box_probability(double x, double t, const Interval& box);

// P(X_t in C_1 x ... x C_n) for correlated motions started at x.
double correlated_semigroup_box(std::span<const double> x, double t, double a,
                                std::span<const Interval> boxes);

// Semigroup applied to the symmetrized box function f.
double correlated_semigroup(std::span<const double> x, double t, double a, const BoxFunction& f);

struct PairPathStats {
  double stuck_time = 0.0;
  // Realized sums of products of increments.
  double covariation = 0.0;
  double quadratic_variation[2] = {0.0, 0.0};
};

// Two uniform sticky Brownian motions. Path statistics disable the
// first-passage shortcut so that every increment is on the grid.
LabeledState sticky_pair_evolve(const LabeledState& x, double t, double theta, double dt,
                                RngStream& rng, PairPathStats* stats = nullptr);

struct RwrePathStats {
  // Label subsets whose running maximum is tracked.
  std::vector<std::vector<int>> subsets;
  // Lattice start positions after rounding.
  std::vector<double> start;
  // Left-point sum of beta_+(g_Delta) over the steps, times the step length.
  std::vector<double> beta_integral;
  // Left-point sum of the exact expected lattice increment of each maximum.
  std::vector<double> lattice_drift;
  // Row-major n x n matrices.
  std::vector<double> covariation;
  std::vector<double> coincidence;
  // Environment parameter used for the run.
  double beta_shape = 0.0;
};

// Walkers on a lattice sharing a Beta(s, s) space-time environment with
// s = theta eps / (1 - 2 theta eps).
LabeledState sticky_rwre_evolve(const LabeledState& x, double t, double theta, double epsilon,
                                RngStream& rng, RwrePathStats* stats = nullptr);

LabeledState labeled_evolve(const LabeledState& x, double t, const ModelSpec& model,
                            RngStream& rng);

struct EvolveOutcome {
  Configuration config;
  bool window_violation = false;
};

// Unlabeled dynamics; particles are labeled in ascending order.
EvolveOutcome unlabeled_evolve(const Configuration& mu, double t, const ModelSpec& model,
                               RngStream& rng);

// Positions at each requested time, evolved segment by segment.
std::vector<LabeledState> sample_path(const LabeledState& x, std::span<const double> times,
                                      const ModelSpec& model, RngStream& rng);

// Rows: replica,time,particle,position.
void write_path_csv(std::ostream& out, int replica, std::span<const LabeledState> path,
                    bool header);

}  // namespace intertwine
