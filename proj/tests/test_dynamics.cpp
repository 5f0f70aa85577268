#include <gtest/gtest.h>
#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "intertwine/dynamics.hpp"
#include "intertwine/errors.hpp"

using namespace intertwine;

namespace {

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

template <class Fn>
Stat replicate(int reps, Fn fn) {
  double s = 0.0;
  double s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double v = fn(r);
    s += v;
    s2 += v * v;
  }
  const double mean = s / reps;
  return {mean, std::sqrt(std::max(0.0, s2 / reps - mean * mean) / (reps - 1.0))};
}

double heat_oracle(double x, double t, const Interval& b) {
  const double s = std::sqrt(2.0 * t);
  return 0.5 * (std::erf((b.upper - x) / s) - std::erf((b.lower - x) / s));
}

ModelSpec sticky_model(StickyScheme scheme) {
  return ModelSpec{StickyModel{1.0, 1e-4, scheme, 0.02}, {-4.5, 4.5}, 3.0};
}

}  // namespace

TEST(CorrelatedEvolve, EmpiricalCovarianceIsAT) {
  const double t = 0.5;
  for (double a : {0.0, 0.5, 1.0}) {
    const auto cov = replicate(100000, [&](int r) {
      RngStream rng(1, r);
      const auto y = correlated_evolve({{0.0, 1.0}, 0.0}, t, a, rng);
      return y.positions[0] * (y.positions[1] - 1.0);
    });
    EXPECT_NEAR(cov.mean, a * t, 4.0 * cov.se) << a;
  }
}

TEST(CorrelatedEvolve, FullCorrelationKeepsDifferences) {
  RngStream rng(2, 0);
  const LabeledState x{{-1.0, 0.25, 2.0}, 0.0};
  const auto y = correlated_evolve(x, 3.0, 1.0, rng);
  EXPECT_DOUBLE_EQ(y.positions[1] - y.positions[0], 1.25);
  EXPECT_DOUBLE_EQ(y.positions[2] - y.positions[0], 3.0);
  EXPECT_NE(y.positions[0], -1.0);
}

TEST(CorrelatedEvolve, ExchangeableUnderRelabeling) {
  const Interval b1{-0.5, 0.5};
  const Interval b2{0.5, 1.5};
  auto stat = [&](const LabeledState& y) {
    return (b1.contains(y.positions[0]) ? 1.0 : 0.0) * (b2.contains(y.positions[1]) ? 1.0 : 0.0);
  };
  const auto direct = replicate(50000, [&](int r) {
    RngStream rng(3, r);
    return stat(correlated_evolve({{0.0, 1.0}, 0.0}, 0.25, 0.5, rng));
  });
  const auto swapped = replicate(50000, [&](int r) {
    RngStream rng(4, r);
    auto y = correlated_evolve({{1.0, 0.0}, 0.0}, 0.25, 0.5, rng);
    std::swap(y.positions[0], y.positions[1]);
    return stat(y);
  });
  EXPECT_NEAR(direct.mean, swapped.mean, 4.0 * std::hypot(direct.se, swapped.se));
}

TEST(HeatBox, MatchesErfDifferences) {
  const Interval b{-0.5, 0.5};
  for (double x : {-1.0, 0.0, 0.3, 2.0})
    for (double t : {0.01, 0.25, 1.0}) EXPECT_NEAR(heat_box_probability(x, t, b), heat_oracle(x, t, b), 1e-14);
  EXPECT_DOUBLE_EQ(heat_box_probability(0.0, 0.0, b), 1.0);
  EXPECT_DOUBLE_EQ(heat_box_probability(0.5, 0.0, b), 0.0);
}

TEST(CorrelatedSemigroup, ZeroTimeIsIndicator) {
  const std::vector<Interval> boxes{{-0.5, 0.5}, {0.5, 1.5}};
  const std::vector<double> in{0.0, 1.0};
  const std::vector<double> out{0.0, 2.0};
  EXPECT_NEAR(correlated_semigroup_box(in, 0.0, 0.5, boxes), 1.0, 1e-12);
  EXPECT_NEAR(correlated_semigroup_box(out, 0.0, 0.5, boxes), 0.0, 1e-12);
  EXPECT_NEAR(correlated_semigroup_box(in, 1e-12, 0.5, boxes), 1.0, 1e-8);
}

TEST(CorrelatedSemigroup, IndependentCaseIsProduct) {
  const std::vector<Interval> boxes{{-0.5, 0.5}, {0.5, 1.5}, {-2.0, 0.0}};
  const std::vector<double> x{0.1, 0.4, -0.3};
  const double t = 0.25;
  double expected = 1.0;
  for (int k = 0; k < 3; ++k) expected *= heat_oracle(x[k], t, boxes[k]);
  EXPECT_NEAR(correlated_semigroup_box(x, t, 0.0, boxes), expected, 1e-10);
}

TEST(CorrelatedSemigroup, AgreesWithMonteCarlo) {
  const std::vector<Interval> boxes{{-0.5, 0.5}, {0.0, 1.0}};
  const std::vector<double> x{0.0, 0.3};
  const double t = 0.25;
  for (double a : {0.5, 1.0}) {
    const auto mc = replicate(100000, [&](int r) {
      RngStream rng(5, r);
      const auto y = correlated_evolve({x, 0.0}, t, a, rng);
      return (boxes[0].contains(y.positions[0]) && boxes[1].contains(y.positions[1])) ? 1.0 : 0.0;
    });
    EXPECT_NEAR(correlated_semigroup_box(x, t, a, boxes), mc.mean, 4.0 * mc.se) << a;
  }
}

TEST(CorrelatedSemigroup, SymmetrizedBoxFunction) {
  const BoxFunction f({{{-0.5, 0.5}, 1}, {{0.5, 1.5}, 1}});
  const std::vector<double> x{0.2, 0.7};
  const std::vector<Interval> ab{{-0.5, 0.5}, {0.5, 1.5}};
  const std::vector<Interval> ba{{0.5, 1.5}, {-0.5, 0.5}};
  const double expected =
      0.5 * (correlated_semigroup_box(x, 0.3, 0.5, ab) + correlated_semigroup_box(x, 0.3, 0.5, ba));
  EXPECT_NEAR(correlated_semigroup(x, 0.3, 0.5, f), expected, 1e-12);
}

TEST(StickyPair, StartedTogetherSpendsPartialTimeStuck) {
  const double t = 0.25;
  int partial = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(6, r);
    PairPathStats stats;
    sticky_pair_evolve({{0.0, 0.0}, 0.0}, t, 1.0, 1e-4, rng, &stats);
    if (stats.stuck_time > 0.0 && stats.stuck_time < t) ++partial;
  }
  EXPECT_GT(partial, reps * 9 / 10);
}

TEST(StickyPair, MarginalVarianceAndCovariation) {
  const double t = 0.25;
  const int reps = 20000;
  std::vector<double> x1(reps);
  std::vector<double> gap(reps);
  for (int r = 0; r < reps; ++r) {
    RngStream rng(7, r);
    PairPathStats stats;
    const auto y = sticky_pair_evolve({{0.0, 0.0}, 0.0}, t, 1.0, 1e-4, rng, &stats);
    x1[r] = y.positions[0];
    gap[r] = stats.covariation - stats.stuck_time;
  }
  const auto var = replicate(reps, [&](int r) { return x1[r] * x1[r]; });
  EXPECT_NEAR(var.mean, t, 4.0 * var.se);
  const auto cov = replicate(reps, [&](int r) { return gap[r]; });
  // Grid discretization of the realized covariation.
  EXPECT_NEAR(cov.mean, 0.0, 4.0 * cov.se + 0.5 * std::sqrt(1e-4));
}

TEST(StickyPair, StuckTimeDecreasesWithSeparation) {
  const double t = 0.25;
  std::vector<double> means;
  for (double sep : {0.0, 0.3, 1.0, 3.0}) {
    const auto stuck = replicate(4000, [&](int r) {
      RngStream rng(8, r);
      PairPathStats stats;
      sticky_pair_evolve({{0.0, sep}, 0.0}, t, 1.0, 1e-4, rng, &stats);
      return stats.stuck_time;
    });
    means.push_back(stuck.mean);
  }
  EXPECT_GT(means[0], 0.0);
  for (std::size_t i = 1; i < means.size(); ++i) EXPECT_LT(means[i], means[i - 1]);
  EXPECT_LT(means.back(), 1e-4);
}

TEST(StickyPair, RejectsMoreThanTwoParticles) {
  RngStream rng(0, 0);
  EXPECT_THROW(sticky_pair_evolve({{0.0, 1.0, 2.0}, 0.0}, 0.1, 1.0, 1e-4, rng), InvalidInput);
}

TEST(StickyRwre, SingleWalkerIsGaussian) {
  // Output carries a uniform jitter over the even sublattice cell, which adds
  // eps^2 / 3 to the variance.
  const double t = 0.25;
  const double eps = 0.02;
  const int reps = 10000;
  std::vector<double> y(reps);
  for (int r = 0; r < reps; ++r) {
    RngStream rng(9, r);
    y[r] = sticky_rwre_evolve({{0.0}, 0.0}, t, 1.0, eps, rng).positions[0];
  }
  std::sort(y.begin(), y.end());
  const double sd = std::sqrt(t + eps * eps / 3.0);
  double ks = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double c = gsl_cdf_gaussian_P(y[i], sd);
    ks = std::max({ks, std::abs(c - double(i) / reps), std::abs(c - double(i + 1) / reps)});
  }
  EXPECT_LT(ks, 1.628 / std::sqrt(double(reps)));
}

TEST(StickyRwre, MaximumDriftAgainstBetaPlus) {
  // The lattice compensator makes the maximum a discrete martingale. It equals
  // theta * beta_+(g) exactly for g <= 3 and approaches it as eps -> 0 beyond.
  const double t = 0.1;
  const double theta = 1.0;
  auto run = [&](int n, double eps, std::uint64_t seed) {
    std::vector<double> gap(20000);
    const auto doob = replicate(20000, [&](int r) {
      RngStream rng(seed, r);
      RwrePathStats stats;
      stats.subsets = {std::vector<int>(n)};
      std::iota(stats.subsets[0].begin(), stats.subsets[0].end(), 0);
      const auto y = sticky_rwre_evolve({std::vector<double>(n, 0.0), 0.0}, t, theta, eps, rng, &stats);
      gap[r] = stats.lattice_drift[0] - theta * stats.beta_integral[0];
      return *std::max_element(y.positions.begin(), y.positions.end()) - stats.start[0] -
             stats.lattice_drift[0];
    });
    // Output jitter is uniform over one cell around the lattice site.
    EXPECT_NEAR(doob.mean, 0.0, 4.0 * doob.se + eps);
    return replicate(20000, [&](int r) { return gap[r]; }).mean;
  };
  EXPECT_LT(std::abs(run(3, 0.02, 10)), 1e-12);
  const double coarse = run(4, 0.04, 11);
  const double fine = run(4, 0.02, 12);
  EXPECT_LT(coarse, 0.0);
  EXPECT_LT(fine, 0.0);
  EXPECT_LT(std::abs(fine), std::abs(coarse));
}

TEST(StrongConsistency, SubTupleMatchesDirectEvolution) {
  const double t = 0.25;
  for (const ModelSpec& model :
       {ModelSpec{CorrelatedModel{0.5}, {-4.5, 4.5}, 3.0}, sticky_model(StickyScheme::Rwre)}) {
    auto stat = [](const LabeledState& y) { return std::abs(y.positions[0] - y.positions[1]); };
    const auto three = replicate(20000, [&](int r) {
      RngStream rng(11, r);
      return stat(labeled_evolve({{0.0, 0.2, 0.1}, 0.0}, t, model, rng));
    });
    const auto two = replicate(20000, [&](int r) {
      RngStream rng(12, r);
      return stat(labeled_evolve({{0.0, 0.2}, 0.0}, t, model, rng));
    });
    EXPECT_NEAR(three.mean, two.mean, 4.0 * std::hypot(three.se, two.se));
  }
}

TEST(UnlabeledEvolve, EmptyStaysEmptyAndCountsAreConserved) {
  for (const ModelSpec& model :
       {ModelSpec{CorrelatedModel{0.3}, {-4.5, 4.5}, 3.0}, sticky_model(StickyScheme::Pair),
        sticky_model(StickyScheme::Rwre)}) {
    RngStream rng(13, 0);
    EXPECT_TRUE(unlabeled_evolve(Configuration{}, 0.25, model, rng).config.empty());
    const std::vector<double> pts{-0.5, 0.5};
    for (int r = 0; r < 20; ++r) {
      const auto out = unlabeled_evolve(Configuration::from_points(pts), 0.25, model, rng);
      EXPECT_EQ(out.config.size(), 2);
      EXPECT_FALSE(out.window_violation);
    }
  }
}

TEST(UnlabeledEvolve, FlagsParticlesOutsideWindow) {
  RngStream rng(14, 0);
  const ModelSpec model{CorrelatedModel{0.0}, {-4.5, 4.5}, 3.0};
  const std::vector<double> pts{0.0, 5.0};
  EXPECT_TRUE(unlabeled_evolve(Configuration::from_points(pts), 0.1, model, rng).window_violation);
}

TEST(ModelSpec, MarginRule) {
  ModelSpec model{CorrelatedModel{0.5}, {-4.5, 4.5}, 3.0};
  EXPECT_NO_THROW(model.validate(0.25));
  EXPECT_THROW(model.validate(0.3), InvalidInput);
  model.kind = CorrelatedModel{1.5};
  EXPECT_THROW(model.validate(0.25), InvalidInput);
  model.kind = StickyModel{1.0, 1e-4, StickyScheme::Rwre, 0.6};
  EXPECT_THROW(model.validate(0.25), InvalidInput);
}

TEST(SamplePath, WritesLongFormCsv) {
  RngStream rng(15, 0);
  const ModelSpec model{CorrelatedModel{0.5}, {-4.5, 4.5}, 3.0};
  const std::vector<double> times{0.1, 0.2};
  const auto path = sample_path({{0.0, 1.0}, 0.0}, times, model, rng);
  ASSERT_EQ(path.size(), 2u);
  std::ostringstream out;
  write_path_csv(out, 3, path, true);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "replica,time,particle,position");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind("3,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}
