#include "intertwine/suites.hpp"

#include <algorithm>
#include <functional>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/functionals.hpp"
#include "intertwine/kernels.hpp"
#include "intertwine/orthopolys.hpp"
#include "intertwine/rng.hpp"

namespace intertwine {

namespace {

std::string join(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : " ") + to_string(x);
  return out;
}

const std::vector<Rational>& rational_masses() {
  static const std::vector<Rational> values{Rational(1, 3), Rational(2, 5), Rational(3, 2),
                                            Rational(7, 3), Rational(5, 4), Rational(1, 7)};
  return values;
}

std::vector<Rational> masses_for(std::size_t blocks, std::size_t offset) {
  const auto& pool = rational_masses();
  std::vector<Rational> out;
  for (std::size_t k = 0; k < blocks; ++k) out.push_back(pool[(k + offset) % pool.size()]);
  return out;
}

// Every vector v with 0 <= v[k] <= bound[k] and sum(v) <= cap.
void bounded_vectors(const std::vector<int>& bound, int cap, std::size_t k, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (k == bound.size()) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= bound[k] && v <= cap; ++v) {
    cur.push_back(v);
    bounded_vectors(bound, cap - v, k + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> bounded_vectors(const std::vector<int>& bound, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  bounded_vectors(bound, cap, 0, cur, out);
  return out;
}

std::vector<int> expand(const std::vector<int>& counts) {
  std::vector<int> out;
  for (std::size_t k = 0; k < counts.size(); ++k)
    out.insert(out.end(), static_cast<std::size_t>(counts[k]), static_cast<int>(k));
  return out;
}

void lambda_n_checks(std::vector<Verdict>& out) {
  for (int n = 1; n <= 6; ++n) {
    std::size_t offset = 0;
    for (const auto& dims : compositions(n)) {
      const auto alphas = masses_for(dims.size(), offset++);
      out.push_back(judge_exact("lambda-n-closed-form",
                                "dims=" + join(dims) + ";alpha=" + join(alphas),
                                lambda_n_partition_sum(dims, alphas),
                                lambda_n_closed_form(dims, alphas)));
    }
  }
}

void kappa_checks(std::vector<Verdict>& out) {
  for (int n = 1; n <= 4; ++n) {
    std::size_t offset = 0;
    for (const auto& dims : compositions(n)) {
      const auto alphas = masses_for(dims.size(), offset++);
      std::vector<int> bound = dims;
      for (auto& b : bound) ++b;
      for (const auto& c : bounded_vectors(bound, n)) {
        const std::vector<int> z = expand(c);
        out.push_back(judge_exact("symmetrized-kappa",
                                  "dims=" + join(dims) + ";alpha=" + join(alphas) +
                                      ";c=" + join(c),
                                  symmetrized_kappa_recursive(dims, alphas, z),
                                  symmetrized_kappa_closed_form(dims, alphas, c)));
        out.push_back(judge_exact("kappa",
                                  "e=" + join(dims) + ";alpha=" + join(alphas) + ";c=" + join(c),
                                  kappa_recursive(expand(dims), alphas, z),
                                  kappa_closed_form(dims, alphas, c)));
      }
    }
  }
}

void meixner_checks(std::vector<Verdict>& out) {
  const std::vector<Rational> ps{Rational(1, 3), Rational(1, 2), Rational(3, 4), Rational(2, 5)};
  std::size_t instance = 0;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& dims : compositions(n)) {
      const auto alphas = masses_for(dims.size(), instance);
      const std::vector<int> bound(dims.size(), 6);
      for (const auto& counts : bounded_vectors(bound, 6)) {
        const Rational& p = ps[instance++ % ps.size()];
        const std::string params =
            "dims=" + join(dims) + ";alpha=" + join(alphas) + ";counts=" + join(counts) +
            ";p=" + to_string(p);
        const Rational product = meixner_product_formula(dims, alphas, counts, p);
        out.push_back(judge_exact("meixner-product", params,
                                  meixner_kernel_sum(dims, alphas, counts, p), product));
        int total = 0;
        for (int c : counts) total += c;
        if (total <= 4) {
          // One extra particle outside every block.
          std::vector<int> points = expand(counts);
          points.push_back(-1);
          out.push_back(judge_exact("meixner-enumerated", params + ";outside=1",
                                    meixner_kernel_sum_enumerated(dims, alphas, points, p),
                                    product));
        }
      }
    }
  }
}

void m_theta_checks(std::vector<Verdict>& out) {
  const std::vector<Rational> thetas{Rational(1), Rational(1, 2), Rational(3)};
  std::size_t instance = 0;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& dims : compositions(n)) {
      const auto volumes = masses_for(dims.size(), instance);
      const Rational& theta = thetas[instance++ % thetas.size()];
      std::vector<Rational> alphas;
      for (const auto& v : volumes) alphas.push_back(theta * v);
      Rational scale = factorial_exact(n);
      for (int k = 0; k < n; ++k) scale *= theta;
      out.push_back(judge_exact("m-theta", "dims=" + join(dims) + ";volume=" + join(volumes) +
                                               ";theta=" + to_string(theta),
                                m_theta_sum(dims, volumes, theta),
                                lambda_n_closed_form(dims, alphas) / scale));
    }
  }
}

void split_rate_checks(std::vector<Verdict>& out) {
  for (const Rational& theta : {Rational(1), Rational(3, 2)}) {
    for (int i = 1; i <= 6; ++i) {
      for (int j = 1; j <= 6; ++j) {
        out.push_back(judge_exact(
            "split-rate",
            "i=" + std::to_string(i) + ";j=" + std::to_string(j) + ";theta=" + to_string(theta),
            howitt_warren_rate_exact(i + 1, j, theta) + howitt_warren_rate_exact(i, j + 1, theta),
            howitt_warren_rate_exact(i, j, theta)));
      }
    }
  }
}

struct TestFunctions {
  BoxFunction one;       // 1_{B1}
  BoxFunction other;     // 1_{B2}
  BoxFunction cross;     // B1 x B2
  BoxFunction square;    // B1 x B1
  BoxFunction cube_a;    // B1 x B1 x B2
  BoxFunction cube_b;    // B1 x B2 x B2
};

TestFunctions test_functions(const ExperimentConfig& c) {
  const Interval& b1 = c.boxes[0];
  const Interval& b2 = c.boxes[1];
  return {BoxFunction({{b1, 1}}),         BoxFunction({{b2, 1}}),
          BoxFunction({{b1, 1}, {b2, 1}}), BoxFunction({{b1, 2}}),
          BoxFunction({{b1, 2}, {b2, 1}}), BoxFunction({{b1, 1}, {b2, 2}})};
}

VerifyOptions options(const ExperimentConfig& c) {
  VerifyOptions o;
  o.seed = c.seed;
  o.k_sigma = c.k_sigma;
  o.rhs_replicas = c.replicas.nested;
  o.quadrature = c.quadrature;
  return o;
}

// Per-suite seeds keep suites independent of each other and of run order.
VerifyOptions options(const ExperimentConfig& c, const std::string& suite) {
  VerifyOptions o = options(c);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : suite) h = (h ^ ch) * 1099511628211ULL;
  o.seed = stream_id({c.seed, h});
  return o;
}

StickyModel sticky_model(const ExperimentConfig& c, StickyScheme scheme) {
  return StickyModel{c.theta, c.dt, scheme, c.epsilon};
}

std::vector<Verdict> orthogonality_suite(const ExperimentConfig& c, const PolyFamily& family,
                                         const std::function<VerifyOptions()>& opt) {
  const TestFunctions tf = test_functions(c);
  const std::vector<std::pair<BoxFunction, BoxFunction>> pairs{
      {tf.one, tf.one},       {tf.one, tf.other},      {tf.one, tf.cross},
      {tf.cross, tf.cross},   {tf.square, tf.cross},   {tf.square, tf.square}};
  std::vector<Verdict> out;
  for (const auto& [f, g] : pairs)
    out.push_back(verify_orthogonality(family, f, g, c.replicas.orthogonality, opt()));
  return out;
}

std::vector<Verdict> run_named(const std::string& name, const ExperimentConfig& c) {
  const VerifyOptions base = options(c, name);
  std::uint64_t counter = 0;
  // Every verdict draws from its own seed.
  const std::function<VerifyOptions()> opt = [&] {
    VerifyOptions v = base;
    v.seed = stream_id({base.seed, counter++});
    return v;
  };
  const TestFunctions tf = test_functions(c);
  const auto& r = c.replicas;
  std::vector<Verdict> out;
  auto append = [&out](std::vector<Verdict> v) { out.insert(out.end(), v.begin(), v.end()); };

  if (name == "exact-identities") return exact_identity_verdicts();
  if (name == "factorial-moments-pascal") {
    for (const auto* f : {&tf.one, &tf.cross, &tf.square, &tf.cube_a})
      out.push_back(verify_factorial_moment(c.pascal(), *f, r.moments, opt()));
    return out;
  }
  if (name == "orthogonality-poisson") return orthogonality_suite(c, c.poisson(), opt);
  if (name == "orthogonality-pascal") return orthogonality_suite(c, c.pascal(), opt);
  if (name == "intertwining-correlated") {
    for (double a : c.correlations)
      for (double t : c.times)
        for (const auto* f : {&tf.one, &tf.cross})
          append(verify_intertwining(c.correlated(a), c.poisson(), *f, t, r.zeta_samples, r.inner, opt()));
    return out;
  }
  if (name == "intertwining-sticky") {
    for (double t : c.times)
      for (const auto* f : {&tf.one, &tf.cross})
        append(verify_intertwining(c.sticky(), c.pascal(), *f, t, r.zeta_samples, r.inner, opt()));
    return out;
  }
  if (name == "consistency") {
    const std::vector<double> spread{-0.3, 0.2, 0.9};
    const std::vector<double> paired{0.1, 0.1, 0.7};
    std::vector<ModelSpec> models;
    for (double a : c.correlations) models.push_back(c.correlated(a));
    models.push_back(c.sticky(StickyScheme::Rwre));
    for (const auto& model : models)
      for (double t : c.times)
        for (const auto* pts : {&spread, &paired})
          out.push_back(verify_consistency(Configuration::from_points(*pts), 2, model, tf.cross,
                                           t, r.consistency, opt()));
    return out;
  }
  if (name == "reversibility-finite") {
    for (double t : c.times) {
      for (double a : c.correlations) {
        const ModelSpec m = c.correlated(a);
        out.push_back(verify_reversibility_finite(m, 1, tf.one, tf.other, t, r.reversibility, opt()));
        out.push_back(verify_reversibility_finite(m, 2, tf.cross, tf.square, t, r.reversibility, opt()));
        out.push_back(verify_reversibility_finite(m, 3, tf.cube_a, tf.cube_b, t, r.reversibility, opt()));
      }
      const ModelSpec pair = c.sticky(StickyScheme::Pair);
      out.push_back(verify_reversibility_finite(pair, 1, tf.one, tf.other, t, r.reversibility, opt()));
      out.push_back(verify_reversibility_finite(pair, 2, tf.cross, tf.square, t, r.reversibility, opt()));
      const ModelSpec rwre = c.sticky(StickyScheme::Rwre);
      out.push_back(verify_reversibility_finite(rwre, 2, tf.cross, tf.square, t, r.reversibility, opt()));
      out.push_back(verify_reversibility_finite(rwre, 3, tf.cube_a, tf.cube_b, t, r.reversibility, opt()));
    }
    return out;
  }
  if (name == "reversibility-infinite") {
    const Functional F = exp_count(c.boxes[0]);
    const Functional G = exp_count(c.boxes[1]);
    for (double t : c.times) {
      for (double a : c.correlations)
        out.push_back(verify_reversibility_infinite(c.correlated(a), c.poisson(), F, G, t,
                                                    r.reversibility_infinite, opt()));
      out.push_back(verify_reversibility_infinite(c.sticky(), c.pascal(), F, G, t,
                                                  r.reversibility_infinite, opt()));
    }
    return out;
  }
  if (name == "sticky-martingale") {
    const StickyModel pair = sticky_model(c, StickyScheme::Pair);
    const StickyModel rwre = sticky_model(c, StickyScheme::Rwre);
    const LabeledState together{{0.0, 0.0}, 0.0};
    const LabeledState apart{{-2.0, 2.0}, 0.0};
    const LabeledState close3{{0.0, 0.0, 0.05}, 0.0};
    const LabeledState together3{{0.0, 0.0, 0.0}, 0.0};
    const LabeledState apart3{{-2.0, 0.0, 2.0}, 0.0};
    const std::int64_t m = r.martingale;
    for (double t : c.times) {
      out.push_back(verify_martingale_sticky({0}, together, t, pair, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1}, together, t, pair, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1}, apart, t, pair, m, opt()));
      out.push_back(verify_covariation_sticky(0, 1, together, t, pair, m, opt()));
      out.push_back(verify_covariation_sticky(0, 0, together, t, pair, m, opt()));
      out.push_back(verify_coincidence_time(t, pair, m, opt()));

      out.push_back(verify_martingale_sticky({0}, close3, t, rwre, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1}, close3, t, rwre, m, opt()));
      out.push_back(verify_martingale_sticky({1, 2}, close3, t, rwre, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1, 2}, close3, t, rwre, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1, 2}, together3, t, rwre, m, opt()));
      out.push_back(verify_martingale_sticky({0, 1, 2}, apart3, t, rwre, m, opt()));
      out.push_back(verify_covariation_sticky(0, 1, close3, t, rwre, m, opt()));
      out.push_back(verify_covariation_sticky(1, 2, close3, t, rwre, m, opt()));
      out.push_back(verify_covariation_sticky(0, 0, close3, t, rwre, m, opt()));
      out.push_back(verify_coincidence_time(t, rwre, m, opt()));
      out.push_back(verify_lattice_calibration(t, c.theta, c.dt, c.epsilon, m, opt()));
    }
    return out;
  }
  if (name == "condition-poisson") {
    const IntensitySpec lambda{c.poisson_rate, c.half_width};
    const Functional single = exp_count(c.boxes[0]);
    const Functional both = all_occupied({c.boxes[0], c.boxes[1]});
    const double z = 0.5 * (c.boxes[0].lower + c.boxes[1].upper);
    for (double t : c.times) {
      for (double a : c.correlations) {
        out.push_back(verify_condition_poisson(0, Configuration{}, single, t, c.correlated(a),
                                               lambda, r.condition, opt()));
        out.push_back(verify_condition_poisson(1, Configuration::from_points(std::vector<double>{z}),
                                               both, t, c.correlated(a), lambda, r.condition, opt()));
      }
    }
    return out;
  }
  throw InvalidInput("unknown suite '" + name + "'");
}

}  // namespace

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog{
      {"exact-identities", "indicator lambda n; definition kappa; infinite-dimensional Meixner polynomials; split-rate consistency",
       "Rational checks: the lambda_n partition sum against prod alpha(B_k)^(d_k); the recursive "
       "kernel against its closed form; the Meixner kernel sum against the product of univariate "
       "Meixner polynomials; the ordered measure m_theta against lambda_n / (theta^n n!); "
       "theta(i+1:j) + theta(i:j+1) = theta(i:j)."},
      {"factorial-moments-pascal", "Pascal factorial moment measure",
       "E[integral of f against the factorial measure] = (p/(1-p))^n integral of f d lambda_n "
       "for Pascal samples."},
      {"orthogonality-poisson", "orthogonality relation poisson",
       "E[I_n f I_m g] = 1{n=m} n! integral of f g d lambda^(tensor n) for Poisson samples."},
      {"orthogonality-pascal", "orthogonality infinite dimensional Meixner",
       "E[M_n f M_m g] = 1{n=m} p^n n!/(1-p)^(2n) integral of f g d lambda_n for Pascal samples."},
      {"intertwining-correlated", "intertwining Poisson",
       "E_zeta[I_n f(eta_t)] = I_n(P_t^[n] f)(zeta) for correlated Brownian motions, conditional "
       "on each sampled Poisson configuration zeta, plus a pooled check weighted by exp(-zeta(B0))."},
      {"intertwining-sticky", "intertwining Pascal",
       "E_zeta[M_n f(eta_t)] = M_n(P_t^[n] f)(zeta) for uniform sticky Brownian motions, "
       "conditional on each sampled Pascal configuration; the two-particle right side is a nested "
       "Monte Carlo estimate."},
      {"consistency", "New Definition Consistency",
       "The factorial sum of F over l-subsets of the evolved system equals the factorial sum over "
       "l-subsets of the start of E[F] under the l-particle evolution."},
      {"reversibility-finite", "n-particle reversibility",
       "E[f(X_0) g(X_t)] = E[g(X_0) f(X_t)] with X_0 drawn from Lebesgue measure (correlated) or "
       "lambda_n (sticky) restricted to the test boxes."},
      {"reversibility-infinite", "definition reversible",
       "E[F(eta_t) G(zeta)] = E[G(eta_t) F(zeta)] with zeta Poisson (correlated) or Pascal (sticky)."},
      {"sticky-martingale", "sticky martingale problem",
       "Drift of the running maximum f_Delta equals theta times the integral of beta_+(g_Delta); "
       "covariation equals coincidence time; both schemes, plus the closed-form coincidence time "
       "and a lattice-against-pair calibration."},
      {"condition-poisson", "condition poisson",
       "Integral over y of E_{z + delta_y}[F(eta_t)] equals the integral over y of "
       "E_z[F(eta_t + delta_y)] for correlated motions."},
  };
  return catalog;
}

bool is_suite(const std::string& name) {
  const auto& cat = suite_catalog();
  return std::any_of(cat.begin(), cat.end(), [&](const SuiteInfo& s) { return s.name == name; });
}

std::string explain_suite(const std::string& name) {
  for (const auto& s : suite_catalog()) {
    if (s.name == name) return s.name + "\nidentity: " + s.identity + "\n" + s.summary + "\n";
  }
  if (name == "all") return "all\nruns every suite in catalog order\n";
  throw InvalidInput("unknown suite '" + name + "'");
}

std::vector<Verdict> exact_identity_verdicts() {
  std::vector<Verdict> out;
  lambda_n_checks(out);
  kappa_checks(out);
  meixner_checks(out);
  m_theta_checks(out);
  split_rate_checks(out);
  return out;
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config) {
  std::vector<std::string> screened;
  if (name == "intertwining-correlated" || name == "intertwining-sticky") screened = {"intertwining"};
  return tally_suite(name, run_named(name, config), screened);
}

std::vector<SuiteResult> run_config(const ExperimentConfig& config) {
  config.validate();
  std::vector<SuiteResult> out;
  if (config.suite == "all") {
    for (const auto& s : suite_catalog()) out.push_back(run_suite(s.name, config));
  } else {
    out.push_back(run_suite(config.suite, config));
  }
  return out;
}

}  // namespace intertwine
