#pragma once

#include <span>
#include <vector>

#include "intertwine/combinatorics.hpp"
#include "intertwine/configuration.hpp"
#include "intertwine/rational.hpp"

namespace intertwine {

// rate x Lebesgue measure restricted to the window [-half_width, half_width).
struct IntensitySpec {
  double rate = 1.0;
  double half_width = 1.0;

  Interval window() const { return {-half_width, half_width}; }
  double measure(const Interval& box) const;
  Rational measure_exact(const Interval& box) const;
  void validate() const;
};

// Count-level evaluators. A box function is described by its multiplicities
// dims[k] and the masses alphas[k] = alpha(B_k); configurations by the block
// index of each point (-1 outside all blocks).
template <class T>
T alpha_sigma_sum(const std::vector<int>& dims, const std::vector<T>& alphas,
                  const SetPartition& sigma);

// sum over sigma of prod_A (|A|-1)! times the alpha_sigma integral.
template <class T>
T lambda_n_partition_sum(const std::vector<int>& dims, const std::vector<T>& alphas);

// prod_k alpha_k^{(d_k)}.
template <class T>
T lambda_n_closed_form(const std::vector<int>& dims, const std::vector<T>& alphas);

// prod_k (alpha_k + c_k)^{(e_k)}.
template <class T>
T kappa_closed_form(const std::vector<int>& e, const std::vector<T>& alphas,
                    const std::vector<int>& c);

// Unrolls the kernel recursion: each new coordinate is either a fresh point
// drawn from alpha or a repeat of one of the earlier points.
template <class T>
T kappa_recursive(const std::vector<int>& target_sequence, const std::vector<T>& alphas,
                  const std::vector<int>& z_blocks);

// (1/(m)_n) prod_k (d_k)_{c_k} (alpha_k + c_k)^{(d_k - c_k)}.
template <class T>
T symmetrized_kappa_closed_form(const std::vector<int>& dims, const std::vector<T>& alphas,
                                const std::vector<int>& c);

// Sum over target box sequences of weight times kappa_recursive.
template <class T>
T symmetrized_kappa_recursive(const std::vector<int>& dims, const std::vector<T>& alphas,
                              const std::vector<int>& z_blocks);

// Ordered measure summed over compositions. Blocks must be listed by
// increasing position; volumes are Lebesgue lengths.
template <class T>
T m_theta_sum(const std::vector<int>& dims, const std::vector<T>& volumes, const T& theta);

// Box-function front ends.
double alpha_sigma_integral(const BoxFunction& f, const SetPartition& sigma,
                            const IntensitySpec& alpha);
double lambda_n_integral(const BoxFunction& f, const IntensitySpec& alpha);
Rational lambda_n_integral_exact(const BoxFunction& f, const IntensitySpec& alpha);

struct KappaTarget {
  Interval box;
  int count = 0;
};

double kappa_integral(const Configuration& z, std::span<const KappaTarget> targets,
                      const IntensitySpec& alpha);
Rational kappa_integral_exact(const Configuration& z, std::span<const KappaTarget> targets,
                              const IntensitySpec& alpha);

double symmetrized_kappa_integral(const Configuration& z, const BoxFunction& f,
                                  const IntensitySpec& alpha);
Rational symmetrized_kappa_integral_exact(const Configuration& z, const BoxFunction& f,
                                          const IntensitySpec& alpha);

// Requires alpha.rate == theta; volumes are taken from the window.
double m_theta_integral(const BoxFunction& f, double theta, const IntensitySpec& alpha);
Rational m_theta_integral_exact(const BoxFunction& f, double theta, const IntensitySpec& alpha);

// Integral of the product of two symmetrized box functions of equal degree.
double lebesgue_inner_product(const BoxFunction& f, const BoxFunction& g,
                              const IntensitySpec& lambda);
double lambda_n_inner_product(const BoxFunction& f, const BoxFunction& g,
                              const IntensitySpec& alpha);

}  // namespace intertwine
