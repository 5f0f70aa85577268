#include "intertwine/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "intertwine/errors.hpp"

namespace intertwine {

namespace {

constexpr int kMaxLambdaDegree = 8;
constexpr int kMaxMThetaDegree = 6;

template <class T>
T symmetric_weight(const std::vector<int>& dims) {
  T w = 1;
  int m = 0;
  for (int d : dims) {
    w *= T(static_cast<double>(factorial_u64(d)));
    m += d;
  }
  w /= T(static_cast<double>(factorial_u64(m)));
  return w;
}

int total(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

void check_sizes(const std::vector<int>& dims, std::size_t alphas) {
  if (dims.size() != alphas) throw InvalidInput("dims and masses differ in length");
  for (int d : dims) {
    if (d < 0) throw InvalidInput("negative multiplicity");
  }
}

template <class T>
T pow_int(const T& x, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double IntensitySpec::measure(const Interval& box) const {
  return rate * box.intersect(window()).length();
}

Rational IntensitySpec::measure_exact(const Interval& box) const {
  const Interval c = box.intersect(window());
  if (!(c.upper > c.lower)) return Rational(0);
  return to_rational(rate) * (to_rational(c.upper) - to_rational(c.lower));
}

void IntensitySpec::validate() const {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidInput("intensity rate must be >= 0");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidInput("window half width must be positive");
}

template <class T>
T alpha_sigma_sum(const std::vector<int>& dims, const std::vector<T>& alphas,
                  const SetPartition& sigma) {
  check_sizes(dims, alphas.size());
  if (sigma.size() != total(dims)) throw InvalidInput("partition size differs from degree");
  const std::vector<int> sizes = sigma.block_sizes();
  std::vector<int> remaining = dims;
  // Each partition block sits at one point, so all its coordinates share a box.
  std::function<T(std::size_t)> assign = [&](std::size_t j) -> T {
    if (j == sizes.size()) return T(1);
    T acc = 0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (remaining[k] < sizes[j]) continue;
      remaining[k] -= sizes[j];
      T sub = assign(j + 1);
      remaining[k] += sizes[j];
      acc += alphas[k] * sub;
    }
    return acc;
  };
  T r = assign(0);
  r *= symmetric_weight<T>(dims);
  return r;
}

template <class T>
T lambda_n_partition_sum(const std::vector<int>& dims, const std::vector<T>& alphas) {
  check_sizes(dims, alphas.size());
  const int m = total(dims);
  if (m > kMaxLambdaDegree) throw CapacityError("lambda_n degree above " + std::to_string(kMaxLambdaDegree));
  if (m == 0) return T(1);
  T sum = 0;
  for_each_set_partition(m, [&](const SetPartition& sigma) {
    T coef = 1;
    for (int s : sigma.block_sizes()) coef *= T(static_cast<double>(factorial_u64(s - 1)));
    sum += coef * alpha_sigma_sum(dims, alphas, sigma);
  });
  return sum;
}

template <class T>
T lambda_n_closed_form(const std::vector<int>& dims, const std::vector<T>& alphas) {
  check_sizes(dims, alphas.size());
  T r = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) r *= rising(alphas[k], dims[k]);
  return r;
}

template <class T>
T kappa_closed_form(const std::vector<int>& e, const std::vector<T>& alphas,
                    const std::vector<int>& c) {
  check_sizes(e, alphas.size());
  if (c.size() != e.size()) throw InvalidInput("counts and targets differ in length");
  T r = 1;
  for (std::size_t k = 0; k < e.size(); ++k) r *= rising(T(alphas[k] + T(c[k])), e[k]);
  return r;
}

template <class T>
T kappa_recursive(const std::vector<int>& target_sequence, const std::vector<T>& alphas,
                  const std::vector<int>& z_blocks) {
  std::vector<int> points = z_blocks;
  std::function<T(std::size_t)> step = [&](std::size_t l) -> T {
    if (l == target_sequence.size()) return T(1);
    const int b = target_sequence[l];
    if (b < 0 || b >= static_cast<int>(alphas.size())) throw InvalidInput("target block out of range");
    const std::size_t before = points.size();
    points.push_back(b);
    T sub = step(l + 1);
    T acc = alphas[b] * sub;
    for (std::size_t p = 0; p < before; ++p) {
      if (points[p] == b) acc += sub;
    }
    points.pop_back();
    return acc;
  };
  return step(0);
}

template <class T>
T symmetrized_kappa_closed_form(const std::vector<int>& dims, const std::vector<T>& alphas,
                                const std::vector<int>& c) {
  check_sizes(dims, alphas.size());
  if (c.size() != dims.size()) throw InvalidInput("counts and blocks differ in length");
  const int m = total(dims);
  const int n = total(c);
  if (n > m) throw InvalidInput("more base points than degree");
  T r = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    r *= falling(T(dims[k]), c[k]);
    if (c[k] > dims[k]) return T(0);
    r *= rising(T(alphas[k] + T(c[k])), dims[k] - c[k]);
  }
  r /= falling(T(m), n);
  return r;
}

template <class T>
T symmetrized_kappa_recursive(const std::vector<int>& dims, const std::vector<T>& alphas,
                              const std::vector<int>& z_blocks) {
  check_sizes(dims, alphas.size());
  const int m = total(dims);
  const int n = static_cast<int>(z_blocks.size());
  if (n > m) throw InvalidInput("more base points than degree");
  const T w = symmetric_weight<T>(dims);
  std::vector<int> seq(m - n, 0);
  T sum = 0;
  const int nb = static_cast<int>(dims.size());
  // Odometer over all target block sequences.
  while (true) {
    std::vector<int> counts(nb, 0);
    bool inside = true;
    for (int b : z_blocks) {
      if (b < 0) inside = false;
      else ++counts[b];
    }
    for (int b : seq) ++counts[b];
    if (inside && counts == dims) sum += w * kappa_recursive(seq, alphas, z_blocks);
    int i = 0;
    while (i < m - n && ++seq[i] == nb) seq[i++] = 0;
    if (i == m - n) break;
  }
  return sum;
}

template <class T>
T m_theta_sum(const std::vector<int>& dims, const std::vector<T>& volumes, const T& theta) {
  check_sizes(dims, volumes.size());
  const int n = total(dims);
  if (n < 1 || n > kMaxMThetaDegree) throw CapacityError("m_theta degree outside [1, 6]");
  const int nb = static_cast<int>(dims.size());
  T sum = 0;
  for (const auto& pi : compositions(n)) {
    const int k = static_cast<int>(pi.size());
    T coef = 1;
    for (int a : pi) coef /= T(a);
    for (int i = 0; i < n - k; ++i) coef /= theta;
    // Parts run from the largest coordinate down, so block indices never increase.
    std::vector<int> remaining = dims;
    std::vector<int> parts_in(nb, 0);
    std::function<T(int, int)> assign = [&](int j, int max_block) -> T {
      if (j == k) {
        T vol = 1;
        for (int b = 0; b < nb; ++b) {
          if (remaining[b] != 0) return T(0);
          vol *= pow_int(volumes[b], parts_in[b]);
          vol /= T(static_cast<double>(factorial_u64(parts_in[b])));
        }
        return vol;
      }
      T acc = 0;
      for (int b = max_block; b >= 0; --b) {
        if (remaining[b] < pi[j]) continue;
        remaining[b] -= pi[j];
        ++parts_in[b];
        acc += assign(j + 1, b);
        --parts_in[b];
        remaining[b] += pi[j];
      }
      return acc;
    };
    sum += coef * assign(0, nb - 1);
  }
  sum *= symmetric_weight<T>(dims);
  return sum;
}

#define INTERTWINE_INSTANTIATE(T)                                                               \
  template T alpha_sigma_sum<T>(const std::vector<int>&, const std::vector<T>&,                 \
                                const SetPartition&);                                           \
  template T lambda_n_partition_sum<T>(const std::vector<int>&, const std::vector<T>&);         \
  template T lambda_n_closed_form<T>(const std::vector<int>&, const std::vector<T>&);           \
  template T kappa_closed_form<T>(const std::vector<int>&, const std::vector<T>&,               \
                                  const std::vector<int>&);                                     \
  template T kappa_recursive<T>(const std::vector<int>&, const std::vector<T>&,                 \
                                const std::vector<int>&);                                       \
  template T symmetrized_kappa_closed_form<T>(const std::vector<int>&, const std::vector<T>&,   \
                                              const std::vector<int>&);                         \
  template T symmetrized_kappa_recursive<T>(const std::vector<int>&, const std::vector<T>&,     \
                                            const std::vector<int>&);                           \
  template T m_theta_sum<T>(const std::vector<int>&, const std::vector<T>&, const T&);

INTERTWINE_INSTANTIATE(double)
INTERTWINE_INSTANTIATE(Rational)
#undef INTERTWINE_INSTANTIATE

namespace {

template <class T>
std::vector<T> masses(const BoxFunction& f, const IntensitySpec& alpha);

template <>
std::vector<double> masses<double>(const BoxFunction& f, const IntensitySpec& alpha) {
  std::vector<double> a;
  for (const auto& b : f.blocks()) a.push_back(alpha.measure(b.box));
  return a;
}

template <>
std::vector<Rational> masses<Rational>(const BoxFunction& f, const IntensitySpec& alpha) {
  std::vector<Rational> a;
  for (const auto& b : f.blocks()) a.push_back(alpha.measure_exact(b.box));
  return a;
}

// Block index of each point of z, -1 outside all blocks.
std::vector<int> tag_points(const Configuration& z, const BoxFunction& f) {
  std::vector<int> tags;
  for (double x : z.points()) tags.push_back(f.block_of(x));
  return tags;
}

template <class T>
T kappa_front(const Configuration& z, std::span<const KappaTarget> targets,
              const IntensitySpec& alpha) {
  alpha.validate();
  std::vector<int> e;
  std::vector<int> c;
  std::vector<T> a;
  std::vector<Block> blocks;
  for (const auto& t : targets) {
    if (t.count < 0) throw InvalidInput("negative target count");
    blocks.push_back({t.box, 1});
    e.push_back(t.count);
    c.push_back(z.count(t.box));
  }
  if (!blocks.empty()) {
    const BoxFunction check(blocks);
    a = masses<T>(check, alpha);
  }
  return kappa_closed_form(e, a, c);
}

template <class T>
T symmetrized_front(const Configuration& z, const BoxFunction& f, const IntensitySpec& alpha) {
  alpha.validate();
  const auto tags = tag_points(z, f);
  if (std::any_of(tags.begin(), tags.end(), [](int b) { return b < 0; })) return T(0);
  std::vector<int> c(f.num_blocks(), 0);
  for (int b : tags) ++c[b];
  return symmetrized_kappa_closed_form(f.multiplicities(), masses<T>(f, alpha), c);
}

template <class T>
T m_theta_front(const BoxFunction& f, double theta, const IntensitySpec& alpha) {
  if (!(theta > 0.0)) throw InvalidInput("theta must be positive");
  alpha.validate();
  std::vector<Block> sorted = f.blocks();
  std::sort(sorted.begin(), sorted.end(),
            [](const Block& a, const Block& b) { return a.box.lower < b.box.lower; });
  const IntensitySpec leb{1.0, alpha.half_width};
  const BoxFunction g(sorted);
  return m_theta_sum(g.multiplicities(), masses<T>(g, leb), T(theta));
}

struct Cell {
  Interval box;
  int f_block;
  int g_block;
};

template <class T>
T inner_product(const BoxFunction& f, const BoxFunction& g, const IntensitySpec& measure,
                bool lambda_n) {
  if (f.degree() != g.degree()) return T(0);
  const int n = f.degree();
  std::vector<double> cuts;
  for (const auto* h : {&f, &g}) {
    for (const auto& b : h->blocks()) {
      cuts.push_back(b.box.lower);
      cuts.push_back(b.box.upper);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Cell> cells;
  std::vector<T> mass;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Interval box{cuts[i], cuts[i + 1]};
    const double mid = 0.5 * (box.lower + box.upper);
    const int fb = f.block_of(mid);
    const int gb = g.block_of(mid);
    if (fb < 0 || gb < 0) continue;
    cells.push_back({box, fb, gb});
    if constexpr (std::is_same_v<T, Rational>) mass.push_back(measure.measure_exact(box));
    else mass.push_back(measure.measure(box));
  }
  const T w = symmetric_weight<T>(f.multiplicities()) * symmetric_weight<T>(g.multiplicities());
  const std::vector<int> df = f.multiplicities();
  const std::vector<int> dg = g.multiplicities();
  std::vector<int> c(cells.size(), 0);
  // Sum over cell occupation numbers with total n.
  std::function<T(std::size_t, int)> visit = [&](std::size_t j, int left) -> T {
    if (j == cells.size()) {
      if (left != 0) return T(0);
      std::vector<int> cf(df.size(), 0);
      std::vector<int> cg(dg.size(), 0);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        cf[cells[i].f_block] += c[i];
        cg[cells[i].g_block] += c[i];
      }
      if (cf != df || cg != dg) return T(0);
      T term = T(static_cast<double>(factorial_u64(n)));
      for (std::size_t i = 0; i < cells.size(); ++i) {
        term /= T(static_cast<double>(factorial_u64(c[i])));
        term *= lambda_n ? rising(mass[i], c[i]) : pow_int(mass[i], c[i]);
      }
      return term;
    }
    T acc = 0;
    for (int k = 0; k <= left; ++k) {
      c[j] = k;
      acc += visit(j + 1, left - k);
    }
    c[j] = 0;
    return acc;
  };
  return w * visit(0, n);
}

}  // namespace

double alpha_sigma_integral(const BoxFunction& f, const SetPartition& sigma,
                            const IntensitySpec& alpha) {
  alpha.validate();
  return alpha_sigma_sum(f.multiplicities(), masses<double>(f, alpha), sigma);
}

double lambda_n_integral(const BoxFunction& f, const IntensitySpec& alpha) {
  alpha.validate();
  return lambda_n_partition_sum(f.multiplicities(), masses<double>(f, alpha));
}

Rational lambda_n_integral_exact(const BoxFunction& f, const IntensitySpec& alpha) {
  alpha.validate();
  return lambda_n_partition_sum(f.multiplicities(), masses<Rational>(f, alpha));
}

double kappa_integral(const Configuration& z, std::span<const KappaTarget> targets,
                      const IntensitySpec& alpha) {
  return kappa_front<double>(z, targets, alpha);
}

Rational kappa_integral_exact(const Configuration& z, std::span<const KappaTarget> targets,
                              const IntensitySpec& alpha) {
  return kappa_front<Rational>(z, targets, alpha);
}

double symmetrized_kappa_integral(const Configuration& z, const BoxFunction& f,
                                  const IntensitySpec& alpha) {
  return symmetrized_front<double>(z, f, alpha);
}

Rational symmetrized_kappa_integral_exact(const Configuration& z, const BoxFunction& f,
                                          const IntensitySpec& alpha) {
  return symmetrized_front<Rational>(z, f, alpha);
}

double m_theta_integral(const BoxFunction& f, double theta, const IntensitySpec& alpha) {
  return m_theta_front<double>(f, theta, alpha);
}

Rational m_theta_integral_exact(const BoxFunction& f, double theta, const IntensitySpec& alpha) {
  return m_theta_front<Rational>(f, theta, alpha);
}

double lebesgue_inner_product(const BoxFunction& f, const BoxFunction& g,
                              const IntensitySpec& lambda) {
  lambda.validate();
  return inner_product<double>(f, g, lambda, false);
}

double lambda_n_inner_product(const BoxFunction& f, const BoxFunction& g,
                              const IntensitySpec& alpha) {
  alpha.validate();
  return inner_product<double>(f, g, alpha, true);
}

}  // namespace intertwine
