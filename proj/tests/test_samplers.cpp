#include <gtest/gtest.h>
#include <gsl/gsl_cdf.h>

#include <cmath>
#include <vector>

#include "intertwine/configuration.hpp"
#include "intertwine/rng.hpp"
#include "intertwine/samplers.hpp"

using namespace intertwine;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& v) {
  double s = 0.0;
  double s2 = 0.0;
  for (double x : v) s += x;
  const double n = static_cast<double>(v.size());
  const double mean = s / n;
  for (double x : v) s2 += (x - mean) * (x - mean);
  const double var = s2 / (n - 1.0);
  return {mean, var, std::sqrt(var / n)};
}

double negbin_mean(double p, double a) {
  double s = 0.0;
  double pmf = std::pow(1.0 - p, a);
  for (int k = 0; k < 4000; ++k) {
    s += k * pmf;
    pmf *= (a + k) / (k + 1.0) * p;
  }
  return s;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                       {0xffffffffu, 0xffffffffu}),
            (PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       {0xa4093822u, 0x299f31d0u}),
            (PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, DeterministicPerSeedAndStream) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  RngStream d(43, 7);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
  EXPECT_NE(stream_id({1, 2}), stream_id({2, 1}));
}

TEST(RngStream, UniformAndNormalMoments) {
  RngStream rng(1, 2);
  std::vector<double> u(200000);
  std::vector<double> z(200000);
  for (auto& x : u) x = rng.uniform();
  for (auto& x : z) x = rng.normal();
  const auto mu = moments(u);
  const auto mz = moments(z);
  EXPECT_NEAR(mu.mean, 0.5, 4.0 * mu.se);
  EXPECT_NEAR(mu.var, 1.0 / 12.0, 2e-3);
  EXPECT_NEAR(mz.mean, 0.0, 4.0 * mz.se);
  EXPECT_NEAR(mz.var, 1.0, 0.015);
}

TEST(SamplePoisson, CountMomentsAndSecondFactorialMoment) {
  const IntensitySpec alpha{0.8, 2.5};
  const double mean = 4.0;
  std::vector<double> n(100000);
  std::vector<double> fact2(n.size());
  for (std::size_t r = 0; r < n.size(); ++r) {
    RngStream rng(5, r);
    const Configuration mu = sample_poisson(alpha, rng);
    for (double x : mu.points()) ASSERT_TRUE(alpha.window().contains(x));
    n[r] = mu.size();
    fact2[r] = n[r] * (n[r] - 1.0);
  }
  const auto m = moments(n);
  EXPECT_NEAR(m.mean, mean, 4.0 * m.se);
  EXPECT_NEAR(m.var, mean, 4.0 * std::sqrt((2.0 * mean * mean + mean) / n.size()));
  // Second factorial moment by pmf summation.
  double target = 0.0;
  double pmf = std::exp(-mean);
  for (int k = 0; k < 200; ++k) {
    target += k * (k - 1.0) * pmf;
    pmf *= mean / (k + 1.0);
  }
  const auto f2 = moments(fact2);
  EXPECT_NEAR(f2.mean, target, 4.0 * f2.se);
}

TEST(SamplePoisson, RestrictionMatchesDirectSample) {
  const IntensitySpec big{1.0, 3.0};
  const IntensitySpec small{1.0, 1.0};
  std::vector<double> a(50000);
  std::vector<double> b(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    RngStream r1(8, r);
    RngStream r2(9, r);
    a[r] = sample_poisson(big, r1).count(small.window());
    b[r] = sample_poisson(small, r2).size();
  }
  const auto ma = moments(a);
  const auto mb = moments(b);
  EXPECT_NEAR(ma.mean, mb.mean, 4.0 * std::hypot(ma.se, mb.se));
  EXPECT_NEAR(ma.var, mb.var, 0.1);
}

TEST(LogarithmicSampler, FrequenciesFollowPmf) {
  const double p = 0.6;
  const LogarithmicSampler sizes(p);
  const int draws = 200000;
  const int bins = 8;
  std::vector<double> hits(bins + 1, 0.0);
  RngStream rng(3, 3);
  for (int i = 0; i < draws; ++i) {
    const int k = sizes(rng);
    ASSERT_GE(k, 1);
    ++hits[std::min(k, bins + 1) - 1];
  }
  const double norm = -std::log1p(-p);
  double chi2 = 0.0;
  double tail = 1.0;
  for (int k = 1; k <= bins + 1; ++k) {
    const double prob = k <= bins ? std::pow(p, k) / (k * norm) : tail;
    tail -= prob;
    const double e = prob * draws;
    chi2 += (hits[k - 1] - e) * (hits[k - 1] - e) / e;
  }
  EXPECT_LT(chi2, gsl_cdf_chisq_Qinv(0.01, bins));
}

TEST(SamplePascal, ZeroProbabilityAndMean) {
  const PascalParams params{0.5, {1.0, 2.0}};
  const Interval box{-0.5, 0.5};
  const double a = params.alpha.measure(box);
  const int reps = 100000;
  std::vector<double> zero(reps);
  std::vector<double> count(reps);
  const auto sampler = pascal_sampler(params);
  for (int r = 0; r < reps; ++r) {
    RngStream rng(11, r);
    const Configuration z = sampler(rng);
    count[r] = z.count(box);
    zero[r] = count[r] == 0 ? 1.0 : 0.0;
  }
  const auto mz = moments(zero);
  const auto mc = moments(count);
  EXPECT_NEAR(mz.mean, std::pow(1.0 - params.p, a), 4.0 * mz.se);
  EXPECT_NEAR(mc.mean, negbin_mean(params.p, a), 4.0 * mc.se);
  EXPECT_NEAR(negbin_mean(params.p, a), a * params.odds(), 1e-9);
}

TEST(SamplePascal, DisjointCountsIndependent) {
  const PascalParams params{0.5, {1.0, 2.0}};
  const Interval b1{-1.0, 0.0};
  const Interval b2{0.0, 1.0};
  const int cats = 4;
  std::vector<std::vector<double>> table(cats, std::vector<double>(cats, 0.0));
  const int reps = 50000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(12, r);
    const Configuration z = sample_pascal(params, rng);
    table[std::min(z.count(b1), cats - 1)][std::min(z.count(b2), cats - 1)] += 1.0;
  }
  std::vector<double> rows(cats, 0.0);
  std::vector<double> cols(cats, 0.0);
  for (int i = 0; i < cats; ++i)
    for (int j = 0; j < cats; ++j) {
      rows[i] += table[i][j];
      cols[j] += table[i][j];
    }
  double chi2 = 0.0;
  for (int i = 0; i < cats; ++i)
    for (int j = 0; j < cats; ++j) {
      const double e = rows[i] * cols[j] / reps;
      chi2 += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  EXPECT_LT(chi2, gsl_cdf_chisq_Qinv(0.01, (cats - 1) * (cats - 1)));
}

TEST(FactorialMoments, PoissonAndPascalLowDegree) {
  const IntensitySpec lambda{1.0, 2.0};
  const PascalParams params{0.5, {1.0, 2.0}};
  const BoxFunction one({{{-0.5, 0.5}, 1}});
  const BoxFunction two({{{-0.5, 0.5}, 2}});
  const auto poisson = estimate_factorial_moment(poisson_sampler(lambda), two, 100000, 21);
  EXPECT_NEAR(poisson.mean, 1.0, 4.0 * poisson.std_error);
  const auto p2 = estimate_factorial_moment(pascal_sampler(params), two, 100000, 22);
  EXPECT_NEAR(p2.mean, params.odds() * params.odds() * 2.0, 4.0 * p2.std_error);
  const auto p1 = estimate_factorial_moment(pascal_sampler(params), one, 100000, 23);
  EXPECT_NEAR(p1.mean, negbin_mean(params.p, 1.0), 4.0 * p1.std_error);
}

TEST(FactorialMoments, ReproducibleFromSeed) {
  const PascalParams params{0.5, {1.0, 2.0}};
  const BoxFunction two({{{-0.5, 0.5}, 2}});
  const auto a = estimate_factorial_moment(pascal_sampler(params), two, 2000, 5);
  const auto b = estimate_factorial_moment(pascal_sampler(params), two, 2000, 5);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}
