#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intertwine/configuration.hpp"
#include "intertwine/dynamics.hpp"
#include "intertwine/functionals.hpp"
#include "intertwine/orthopolys.hpp"
#include "intertwine/quadrature.hpp"
#include "intertwine/rational.hpp"

namespace intertwine {

struct Verdict {
  std::string identity;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  // Combined statistical standard error of lhs - rhs.
  double std_error = 0.0;
  double systematic = 0.0;
  double z_score = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string details;

  // Distance beyond the systematic budget, in standard errors.
  double excess_z() const;
};

// pass iff |lhs - rhs| <= k_sigma * se + systematic.
Verdict judge(std::string identity, std::string params, double lhs, double rhs, double se,
              double systematic, double k_sigma, std::uint64_t seed, std::string details = {});
Verdict judge_exact(std::string identity, std::string params, const Rational& lhs,
                    const Rational& rhs);

struct VerifyOptions {
  std::uint64_t seed = 1;
  double k_sigma = 4.0;
  // Replicas of the nested estimator on the right side; 0 uses the inner count.
  std::int64_t rhs_replicas = 0;
  DoublingPolicy quadrature;
};

// One verdict per sampled starting configuration plus a pooled verdict.
std::vector<Verdict> verify_intertwining(const ModelSpec& model, const PolyFamily& family,
                                         const BoxFunction& f, double t, int zeta_samples,
                                         std::int64_t inner_replicas, const VerifyOptions& opts);

Verdict verify_consistency(const Configuration& mu, int l, const ModelSpec& model,
                           const BoxFunction& f, double t, std::int64_t replicas,
                           const VerifyOptions& opts);

Verdict verify_orthogonality(const PolyFamily& family, const BoxFunction& f, const BoxFunction& g,
                             std::int64_t replicas, const VerifyOptions& opts);

Verdict verify_factorial_moment(const PolyFamily& family, const BoxFunction& f,
                                std::int64_t replicas, const VerifyOptions& opts);

Verdict verify_reversibility_finite(const ModelSpec& model, int n, const BoxFunction& f,
                                    const BoxFunction& g, double t, std::int64_t replicas,
                                    const VerifyOptions& opts);

Verdict verify_reversibility_infinite(const ModelSpec& model, const PolyFamily& family,
                                      const Functional& F, const Functional& G, double t,
                                      std::int64_t replicas, const VerifyOptions& opts);

// Outer integral over the added point by Gauss-Legendre nodes, with Monte
// Carlo values of the inner expectations at every node.
Verdict verify_condition_poisson(int l, const Configuration& z, const Functional& F, double t,
                                 const ModelSpec& model, const IntensitySpec& lambda,
                                 std::int64_t replicas, const VerifyOptions& opts);

// Drift of the running maximum of the labels in delta against
// theta times the integral of beta_+(g_delta).
Verdict verify_martingale_sticky(const std::vector<int>& delta, const LabeledState& x, double t,
                                 const StickyModel& model, std::int64_t replicas,
                                 const VerifyOptions& opts);

// Realized covariation of coordinates k and l against their coincidence time
// (or against t when k == l).
Verdict verify_covariation_sticky(int k, int l, const LabeledState& x, double t,
                                  const StickyModel& model, std::int64_t replicas,
                                  const VerifyOptions& opts);

// Mean coincidence time of a pair started together against its closed form.
Verdict verify_coincidence_time(double t, const StickyModel& model, std::int64_t replicas,
                                const VerifyOptions& opts);

// Drift of the pair maximum under the lattice scheme against the pair scheme.
Verdict verify_lattice_calibration(double t, double theta, double dt, double epsilon,
                                   std::int64_t replicas, const VerifyOptions& opts);

// E[Leb{s <= t : X_1 = X_2}] for a sticky pair started together.
double expected_coincidence_time(double t, double theta);

}  // namespace intertwine
