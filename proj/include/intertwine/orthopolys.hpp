#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "intertwine/configuration.hpp"
#include "intertwine/kernels.hpp"
#include "intertwine/quadrature.hpp"
#include "intertwine/rational.hpp"

namespace intertwine {

struct PascalParams {
  double p = 0.5;
  IntensitySpec alpha;

  void validate() const;
  // p / (1 - p), the mean cluster count per unit alpha-mass.
  double odds() const { return p / (1.0 - p); }
};

struct PoissonFamily {
  IntensitySpec lambda;
};

struct MeixnerFamily {
  PascalParams params;
};

using PolyFamily = std::variant<PoissonFamily, MeixnerFamily>;

const IntensitySpec& family_intensity(const PolyFamily& family);

// Monic Meixner polynomial: sum_k C(n,k) (1-1/p)^{k-n} (a+k)^{(n-k)} (x)_k.
template <class T>
T meixner_uni(int n, const T& x, const T& p, const T& a);

// Monic Charlier polynomial: sum_k C(n,k) (-a)^{n-k} (x)_k.
template <class T>
T charlier_monic(int n, const T& x, const T& a);

// Count-level evaluators. counts[k] is the number of particles in block k.
template <class T>
T meixner_kernel_sum(const std::vector<int>& dims, const std::vector<T>& alphas,
                     const std::vector<int>& counts, const T& p);
template <class T>
T meixner_product_formula(const std::vector<int>& dims, const std::vector<T>& alphas,
                          const std::vector<int>& counts, const T& p);
// Literal sum over ordered tuples of distinct particles, each paired with the
// recursive kernel evaluator. point_blocks holds the block of every particle.
template <class T>
T meixner_kernel_sum_enumerated(const std::vector<int>& dims, const std::vector<T>& alphas,
                                const std::vector<int>& point_blocks, const T& p);
template <class T>
T wiener_ito_counts(const std::vector<int>& dims, const std::vector<T>& masses,
                    const std::vector<int>& counts);

double wiener_ito(const Configuration& mu, const BoxFunction& f, const IntensitySpec& lambda);
Rational wiener_ito_exact(const Configuration& mu, const BoxFunction& f,
                          const IntensitySpec& lambda);
double meixner_inf(const Configuration& mu, const BoxFunction& f, const PascalParams& params);
Rational meixner_inf_exact(const Configuration& mu, const BoxFunction& f,
                           const PascalParams& params);

// Dispatches to wiener_ito or meixner_inf.
double poly_eval(const Configuration& mu, const BoxFunction& f, const PolyFamily& family);

using PointFunction = std::function<double(std::span<const double>)>;

struct QuadratureSpec {
  // g is treated as zero outside decay_box in every integrated coordinate.
  Interval decay_box;
  std::vector<double> breakpoints;
  DoublingPolicy policy;
};

// Polynomial of degree n <= 2 applied to a general function g, with the
// intensity integrals done by tensor Gauss-Legendre quadrature.
double poly_eval_general(const Configuration& mu, const PointFunction& g,
                         const PolyFamily& family, int n, const QuadratureSpec& quad);

// Same evaluation with the configuration-independent integrals done once.
class GeneralPolyEvaluator {
 public:
  GeneralPolyEvaluator(PointFunction g, const PolyFamily& family, int n,
                       const QuadratureSpec& quad);
  double operator()(const Configuration& mu) const;

 private:
  double integral1(const std::function<double(double)>& fn) const;
  double sym(double a, double b) const;

  PointFunction g_;
  PolyFamily family_;
  int n_;
  DoublingPolicy policy_;
  double rate_ = 0.0;
  std::vector<Interval> panels_;
  double mass_ = 0.0;
  double double_mass_ = 0.0;
  double diagonal_ = 0.0;
};

}  // namespace intertwine
