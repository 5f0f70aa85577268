#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/kernels.hpp"

using namespace intertwine;

namespace {

const IntensitySpec kUnit{1.0, 4.5};

BoxFunction single(double l, double u, int d) { return BoxFunction({{{l, u}, d}}); }

std::vector<int> random_dims(std::mt19937_64& gen, int max_degree, int blocks) {
  std::uniform_int_distribution<int> u(0, max_degree);
  for (;;) {
    std::vector<int> d(blocks);
    int s = 0;
    for (int& x : d) s += (x = u(gen));
    if (s >= 1 && s <= max_degree) return d;
  }
}

std::vector<Rational> random_masses(std::mt19937_64& gen, int blocks) {
  std::uniform_int_distribution<int> num(0, 9);
  std::uniform_int_distribution<int> den(1, 5);
  std::vector<Rational> a;
  for (int k = 0; k < blocks; ++k) {
    Rational q(num(gen), den(gen));
    q.canonicalize();
    a.push_back(q);
  }
  return a;
}

}  // namespace

TEST(AlphaSigma, Examples) {
  const BoxFunction f = single(0.0, 1.0, 2);
  const auto parts = set_partitions(2);
  // Restricted growth strings: {0,0} is one block, {0,1} two singletons.
  for (const auto& sigma : parts) EXPECT_DOUBLE_EQ(alpha_sigma_integral(f, sigma, kUnit), 1.0);
  const BoxFunction g({{{0.0, 1.0}, 1}, {{1.0, 2.0}, 1}});
  for (const auto& sigma : parts) {
    const double v = alpha_sigma_integral(g, sigma, kUnit);
    if (sigma.num_blocks() == 1) EXPECT_DOUBLE_EQ(v, 0.0);
  }
}

TEST(LambdaN, Examples) {
  EXPECT_DOUBLE_EQ(lambda_n_integral(single(0.0, 1.0, 2), kUnit), 2.0);
  EXPECT_DOUBLE_EQ(lambda_n_integral(single(0.0, 1.0, 3), kUnit), 6.0);
  const IntensitySpec alpha{2.5, 4.5};
  EXPECT_DOUBLE_EQ(lambda_n_integral(single(0.0, 0.5, 1), alpha), 1.25);
  EXPECT_THROW(lambda_n_integral(single(0.0, 1.0, 9), kUnit), CapacityError);
}

TEST(LambdaN, PartitionSumEqualsRisingProduct) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int blocks = 1 + trial % 3;
    const auto d = random_dims(gen, 6, blocks);
    const auto a = random_masses(gen, blocks);
    EXPECT_EQ(lambda_n_partition_sum(d, a), lambda_n_closed_form(d, a));
  }
}

TEST(LambdaN, TensorFactorizationThroughKappa) {
  // lambda_n of an ordered box sequence equals lambda_k of its head times the
  // recursive kernel integral of its tail given the head.
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_masses(gen, 3);
    const int n = 2 + trial % 3;
    std::vector<int> seq(n);
    for (int& b : seq) b = pick(gen);
    for (int k = 0; k <= n; ++k) {
      std::vector<int> head(seq.begin(), seq.begin() + k);
      std::vector<int> tail(seq.begin() + k, seq.end());
      std::vector<int> all(3, 0);
      std::vector<int> first(3, 0);
      for (int b : seq) ++all[b];
      for (int b : head) ++first[b];
      const Rational lhs = lambda_n_closed_form(all, a);
      const Rational rhs = lambda_n_partition_sum(first, a) * kappa_recursive(tail, a, head);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Kappa, Examples) {
  const std::vector<KappaTarget> two{{{0.0, 1.0}, 2}};
  EXPECT_DOUBLE_EQ(kappa_integral(Configuration{}, two, kUnit), 2.0);
  const std::vector<KappaTarget> one{{{0.0, 1.0}, 1}};
  const std::vector<double> z{0.5};
  EXPECT_DOUBLE_EQ(kappa_integral(Configuration::from_points(z), one, kUnit), 2.0);
  const std::vector<KappaTarget> none{{{0.0, 1.0}, 0}, {{1.0, 2.0}, 0}};
  EXPECT_DOUBLE_EQ(kappa_integral(Configuration::from_points(z), none, kUnit), 1.0);
}

TEST(Kappa, RecursionMatchesClosedForm) {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> pick(-1, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_masses(gen, 3);
    const auto e = random_dims(gen, 4, 3);
    std::vector<int> z(trial % 4);
    for (int& b : z) b = pick(gen);
    std::vector<int> c(3, 0);
    for (int b : z)
      if (b >= 0) ++c[b];
    std::vector<int> seq;
    for (int k = 0; k < 3; ++k) seq.insert(seq.end(), e[k], k);
    EXPECT_EQ(kappa_recursive(seq, a, z), kappa_closed_form(e, a, c));
  }
}

TEST(SymmetrizedKappa, Examples) {
  const BoxFunction f({{{0.0, 1.0}, 2}, {{1.0, 2.0}, 1}});
  EXPECT_EQ(symmetrized_kappa_integral_exact(Configuration{}, f, kUnit),
            lambda_n_integral_exact(f, kUnit));
  const std::vector<double> full{0.2, 0.4, 1.5};
  EXPECT_EQ(symmetrized_kappa_integral_exact(Configuration::from_points(full), f, kUnit),
            Rational(1, 3));
  const std::vector<double> over{1.2, 1.5};
  EXPECT_EQ(symmetrized_kappa_integral_exact(Configuration::from_points(over), f, kUnit),
            Rational(0));
}

TEST(SymmetrizedKappa, ClosedFormMatchesRecursion) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int blocks = 1 + trial % 3;
    const auto a = random_masses(gen, blocks);
    const auto d = random_dims(gen, 4, blocks);
    const int m = d[0] + (blocks > 1 ? d[1] : 0) + (blocks > 2 ? d[2] : 0);
    std::uniform_int_distribution<int> pick(0, blocks - 1);
    std::uniform_int_distribution<int> size(0, m);
    std::vector<int> z(size(gen));
    std::vector<int> c(blocks, 0);
    for (int& b : z) ++c[b = pick(gen)];
    EXPECT_EQ(symmetrized_kappa_recursive(d, a, z), symmetrized_kappa_closed_form(d, a, c));
  }
}

TEST(MTheta, Examples) {
  const IntensitySpec alpha{1.0, 4.5};
  EXPECT_DOUBLE_EQ(m_theta_integral(single(0.0, 0.75, 1), 1.0, alpha), 0.75);
  EXPECT_DOUBLE_EQ(m_theta_integral(single(0.0, 1.0, 2), 1.0, alpha), 1.0);
  EXPECT_THROW(m_theta_integral(single(0.0, 1.0, 7), 1.0, alpha), CapacityError);
}

TEST(MTheta, EqualsLambdaOverThetaPowerFactorial) {
  const std::vector<BoxFunction> fs{
      single(-0.5, 0.5, 1),
      single(-0.5, 0.5, 3),
      BoxFunction({{{-0.5, 0.5}, 1}, {{0.5, 1.5}, 1}}),
      BoxFunction({{{0.5, 1.5}, 2}, {{-0.5, 0.25}, 1}}),
      BoxFunction({{{-1.0, -0.5}, 1}, {{0.0, 0.5}, 2}, {{1.0, 1.25}, 1}}),
      BoxFunction({{{-0.5, 0.5}, 2}, {{0.5, 1.5}, 2}}),
  };
  for (const Rational theta : {Rational(1), Rational(1, 2), Rational(3)}) {
    const IntensitySpec alpha{theta.get_d(), 4.5};
    for (const auto& f : fs) {
      const int n = f.degree();
      Rational scale = factorial_exact(n);
      for (int i = 0; i < n; ++i) scale *= theta;
      EXPECT_EQ(m_theta_integral_exact(f, theta.get_d(), alpha) * scale,
                lambda_n_integral_exact(f, alpha));
    }
  }
}

TEST(InnerProducts, Lebesgue) {
  const IntensitySpec lambda{1.0, 4.5};
  const BoxFunction f = single(0.0, 1.0, 1);
  const BoxFunction g = single(0.5, 2.0, 1);
  EXPECT_DOUBLE_EQ(lebesgue_inner_product(f, g, lambda), 0.5);
  EXPECT_DOUBLE_EQ(lebesgue_inner_product(f, single(0.0, 1.0, 2), lambda), 0.0);
  // Symmetrized 1_{B1 x B2} against itself: 2 * (1/2)^2 * |B1||B2|.
  const BoxFunction h({{{0.0, 1.0}, 1}, {{1.0, 3.0}, 1}});
  EXPECT_DOUBLE_EQ(lebesgue_inner_product(h, h, lambda), 1.0);
}
