#include "intertwine/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"

namespace intertwine {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Phi(b) - Phi(a) for a <= b, arranged to avoid cancellation in the tails.
double normal_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a > 0.0) return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  if (b < 0.0) return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  return 1.0 - 0.5 * (std::erfc(-a * kInvSqrt2) + std::erfc(b * kInvSqrt2));
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("evolution time must be >= 0");
}

// Fair coin flips drawn 64 at a time.
class BitSource {
 public:
  explicit BitSource(RngStream& rng) : rng_(rng) {}
  bool next() {
    if (left_ == 0) {
      word_ = rng_();
      left_ = 64;
    }
    const bool b = word_ & 1u;
    word_ >>= 1;
    --left_;
    return b;
  }

 private:
  RngStream& rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

// Beta(s, s) through log-gammas, stable for small s.
class SymmetricBeta {
 public:
  explicit SymmetricBeta(double s) : s_(s), gamma_(s + 1.0) {}
  double operator()(RngStream& rng) {
    const double g1 = std::log(gamma_(rng)) + std::log(rng.uniform_open()) / s_;
    const double g2 = std::log(gamma_(rng)) + std::log(rng.uniform_open()) / s_;
    return 1.0 / (1.0 + std::exp(g2 - g1));
  }

 private:
  double s_;
  std::gamma_distribution<double> gamma_;
};

}  // namespace

void ModelSpec::validate(double t_max) const {
  if (!(window.upper > window.lower)) throw InvalidInput("empty simulation window");
  if (!(margin > 0.0)) throw InvalidInput("margin must be positive");
  if (margin < 6.0 * std::sqrt(t_max) * (1.0 - 1e-12))
    throw InvalidInput("margin " + std::to_string(margin) + " below 6 sqrt(t) = " +
                       std::to_string(6.0 * std::sqrt(t_max)));
  if (!(interior().upper > interior().lower)) throw InvalidInput("margin leaves no interior");
  if (const auto* c = std::get_if<CorrelatedModel>(&kind)) {
    if (!(c->a >= 0.0 && c->a <= 1.0)) throw InvalidInput("correlation must lie in [0, 1]");
  } else {
    const auto& s = std::get<StickyModel>(kind);
    if (!(s.theta > 0.0)) throw InvalidInput("stickiness must be positive");
    if (!(s.dt > 0.0)) throw InvalidInput("time step must be positive");
    if (!(s.epsilon > 0.0) || 2.0 * s.theta * s.epsilon >= 1.0)
      throw InvalidInput("lattice spacing must satisfy 0 < 2 theta eps < 1");
  }
}

LabeledState correlated_evolve(const LabeledState& x, double t, double a, RngStream& rng) {
  check_time(t);
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("correlation must lie in [0, 1]");
  LabeledState out{x.positions, x.time + t};
  if (t == 0.0 || out.positions.empty()) return out;
  const double common = std::sqrt(a * t) * rng.normal();
  const double own = std::sqrt((1.0 - a) * t);
  for (auto& p : out.positions) p += common + own * rng.normal();
  return out;
}

double heat_box_probability(double x, double t, const Interval& box) {
  check_time(t);
  if (t == 0.0) return box.contains(x) ? 1.0 : 0.0;
  const double s = std::sqrt(t);
  return normal_mass((box.lower - x) / s, (box.upper - x) / s);
}

double correlated_semigroup_box(std::span<const double> x, double t, double a,
                                std::span<const Interval> boxes) {
  check_time(t);
  if (x.size() != boxes.size()) throw InvalidInput("one box per coordinate required");
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("correlation must lie in [0, 1]");
  const std::size_t n = x.size();
  if (t == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!boxes[i].contains(x[i])) return 0.0;
    }
    return 1.0;
  }
  if (a == 0.0) {
    double r = 1.0;
    for (std::size_t i = 0; i < n; ++i) r *= heat_box_probability(x[i], t, boxes[i]);
    return r;
  }
  const double st = std::sqrt(t);
  if (a == 1.0) {
    double lo = -INFINITY;
    double hi = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::max(lo, (boxes[i].lower - x[i]) / st);
      hi = std::min(hi, (boxes[i].upper - x[i]) / st);
    }
    return normal_mass(lo, hi);
  }
  const double sc = std::sqrt(a * t);
  const double so = std::sqrt((1.0 - a) * t);
  std::vector<double> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    cuts.push_back((boxes[i].lower - x[i]) / sc);
    cuts.push_back((boxes[i].upper - x[i]) / sc);
  }
  const auto panels = split_panels({-9.0, 9.0}, cuts);
  const auto integrand = [&](double z) {
    double r = kInvSqrt2Pi * std::exp(-0.5 * z * z);
    for (std::size_t i = 0; i < n && r > 0.0; ++i) {
      const double shift = x[i] + sc * z;
      r *= normal_mass((boxes[i].lower - shift) / so, (boxes[i].upper - shift) / so);
    }
    return r;
  };
  return integrate_doubling(integrand, panels, {1e-12, 16, 4096});
}

double correlated_semigroup(std::span<const double> x, double t, double a, const BoxFunction& f) {
  const int n = f.degree();
  if (static_cast<int>(x.size()) != n) throw InvalidInput("point dimension differs from degree");
  const int nb = f.num_blocks();
  double w = 1.0;
  for (const auto& b : f.blocks()) w *= static_cast<double>(factorial_u64(b.multiplicity));
  w /= static_cast<double>(factorial_u64(n));
  const std::vector<int> dims = f.multiplicities();
  std::vector<int> seq(n, 0);
  std::vector<Interval> boxes(n);
  double total = 0.0;
  while (true) {
    std::vector<int> counts(nb, 0);
    for (int b : seq) ++counts[b];
    if (counts == dims) {
      for (int i = 0; i < n; ++i) boxes[i] = f.blocks()[seq[i]].box;
      total += w * correlated_semigroup_box(x, t, a, boxes);
    }
    int i = 0;
    while (i < n && ++seq[i] == nb) seq[i++] = 0;
    if (i == n) break;
  }
  return total;
}

LabeledState sticky_pair_evolve(const LabeledState& x, double t, double theta, double dt,
                                RngStream& rng, PairPathStats* stats) {
  check_time(t);
  if (!(theta > 0.0)) throw InvalidInput("stickiness must be positive");
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  const std::size_t n = x.positions.size();
  if (n > 2) throw InvalidInput("pair scheme handles at most two particles");
  if (stats) *stats = PairPathStats{};
  LabeledState out{x.positions, x.time + t};
  if (t == 0.0 || n == 0) return out;
  if (n == 1) {
    const double step = std::sqrt(t) * rng.normal();
    out.positions[0] += step;
    if (stats) stats->quadratic_variation[0] = step * step;
    return out;
  }

  // Mean S and difference D; |D| is a reflected motion of variance rate 2
  // run on a clock that stalls for c units per unit of local time at zero.
  const double c = 0.5 / theta;
  double s = 0.5 * (x.positions[0] + x.positions[1]);
  double d = x.positions[0] - x.positions[1];
  double remaining = t;

  // Far from the diagonal the difference is a free Brownian motion until it
  // hits zero, so the first-passage time can be sampled directly.
  const double jump_threshold = 4.0 * std::sqrt(dt);
  double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  double free_path = std::abs(d);
  double floor = 0.0;
  while (remaining > 0.0) {
    const double gap = free_path + floor;
    if (!stats && sign != 0.0 && gap > jump_threshold) {
      const double z = rng.normal();
      const double hit = gap * gap / (2.0 * z * z);
      if (hit >= remaining) {
        // Killed law of the gap, by rejection against the crossing probability.
        double end;
        while (true) {
          end = gap + std::sqrt(2.0 * remaining) * rng.normal();
          if (end > 0.0 && rng.uniform() < -std::expm1(-gap * end / remaining)) break;
        }
        s += std::sqrt(0.5 * remaining) * rng.normal();
        d = sign * end;
        break;
      }
      s += std::sqrt(0.5 * hit) * rng.normal();
      d = 0.0;
      free_path = 0.0;
      floor = 0.0;
      remaining -= hit;
      continue;
    }
    const double h = std::min(dt, remaining);
    const double dn = std::sqrt(2.0 * h) * rng.normal();
    const double next = free_path + dn;
    const double low =
        0.5 * (free_path + next - std::sqrt(dn * dn - 4.0 * h * std::log(rng.uniform_open())));
    const double new_floor = std::max(floor, -low);
    const double dl = new_floor - floor;
    const double cost = h + c * dl;
    double fraction = 1.0;
    bool stuck_at_end = false;
    if (cost > remaining) {
      fraction = remaining / cost;
      stuck_at_end = rng.uniform() < c * dl / cost;
    }
    const double ds = std::sqrt(0.5 * fraction * (h + 2.0 * c * dl)) * rng.normal();
    if (dl > 0.0 || sign == 0.0) sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double new_d = stuck_at_end ? 0.0 : sign * (next + new_floor);
    if (stats) {
      const double dx1 = ds + 0.5 * (new_d - d);
      const double dx2 = ds - 0.5 * (new_d - d);
      stats->covariation += dx1 * dx2;
      stats->quadratic_variation[0] += dx1 * dx1;
      stats->quadratic_variation[1] += dx2 * dx2;
      stats->stuck_time += fraction * c * dl;
    }
    s += ds;
    d = new_d;
    free_path = next;
    floor = new_floor;
    if (fraction < 1.0) break;
    remaining -= cost;
  }
  out.positions = {s + 0.5 * d, s - 0.5 * d};
  return out;
}

LabeledState sticky_rwre_evolve(const LabeledState& x, double t, double theta, double epsilon,
                                RngStream& rng, RwrePathStats* stats) {
  check_time(t);
  if (!(theta > 0.0)) throw InvalidInput("stickiness must be positive");
  if (!(epsilon > 0.0) || 2.0 * theta * epsilon >= 1.0)
    throw InvalidInput("lattice spacing must satisfy 0 < 2 theta eps < 1");
  const int n = static_cast<int>(x.positions.size());
  LabeledState out{x.positions, x.time + t};
  if (n == 0 || t == 0.0) {
    if (stats) {
      stats->start = x.positions;
      stats->beta_integral.assign(stats->subsets.size(), 0.0);
      stats->lattice_drift.assign(stats->subsets.size(), 0.0);
      stats->covariation.assign(static_cast<std::size_t>(n) * n, 0.0);
      stats->coincidence.assign(static_cast<std::size_t>(n) * n, 0.0);
    }
    return out;
  }
  // Shrink the spacing slightly so that an integer number of steps covers t.
  const long steps = static_cast<long>(std::ceil(t / (epsilon * epsilon) - 1e-9));
  const double eps = std::sqrt(t / static_cast<double>(steps));
  const double shape = theta * eps / (1.0 - 2.0 * theta * eps);

  // Stochastic rounding to the even sublattice; coincident particles stay together.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return x.positions[i] < x.positions[j]; });
  std::vector<long> lattice_of(n);
  for (int k = 0; k < n; ++k) {
    const int i = order[k];
    if (k > 0 && x.positions[i] == x.positions[order[k - 1]]) {
      lattice_of[i] = lattice_of[order[k - 1]];
      continue;
    }
    const double u = x.positions[i] / (2.0 * eps);
    const double cell = std::floor(u);
    const long base = 2 * static_cast<long>(cell);
    lattice_of[i] = rng.uniform() < u - cell ? base + 2 : base;
  }
  std::vector<int> label(order);
  std::stable_sort(label.begin(), label.end(),
                   [&](int i, int j) { return lattice_of[i] < lattice_of[j]; });
  std::vector<long> site(n);
  for (int k = 0; k < n; ++k) site[k] = lattice_of[label[k]];

  std::vector<long> by_label(n);
  std::vector<int> moved(n);
  const std::size_t nsub = stats ? stats->subsets.size() : 0;
  std::vector<double> max_drift;
  if (stats) {
    stats->beta_shape = shape;
    stats->start.resize(n);
    for (int k = 0; k < n; ++k) stats->start[label[k]] = site[k] * eps;
    stats->beta_integral.assign(nsub, 0.0);
    stats->lattice_drift.assign(nsub, 0.0);
    stats->covariation.assign(static_cast<std::size_t>(n) * n, 0.0);
    stats->coincidence.assign(static_cast<std::size_t>(n) * n, 0.0);
    // Expected lattice increment of a maximum shared by g walkers.
    max_drift.assign(n + 1, 0.0);
    for (int g = 1; g <= n; ++g) {
      double all_left = 1.0;
      for (int j = 0; j < g; ++j) all_left *= (shape + j) / (2.0 * shape + j);
      max_drift[g] = eps * (1.0 - 2.0 * all_left);
    }
  }

  BitSource coin(rng);
  SymmetricBeta beta(shape);
  std::vector<int> left_labels;
  std::vector<int> right_labels;
  const double h = eps * eps;
  for (long step = 0; step < steps; ++step) {
    if (stats) {
      for (int k = 0; k < n; ++k) by_label[label[k]] = site[k];
      for (std::size_t q = 0; q < nsub; ++q) {
        long top = 0;
        int g = 0;
        for (int i : stats->subsets[q]) {
          if (g == 0 || by_label[i] > top) {
            top = by_label[i];
            g = 1;
          } else if (by_label[i] == top) {
            ++g;
          }
        }
        stats->beta_integral[q] += h * beta_plus(g);
        stats->lattice_drift[q] += max_drift[g];
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (by_label[i] == by_label[j]) stats->coincidence[i * n + j] += h;
        }
      }
    }
    int i = 0;
    while (i < n) {
      int j = i + 1;
      while (j < n && site[j] == site[i]) ++j;
      if (j == i + 1) {
        const int dir = coin.next() ? 1 : -1;
        site[i] += dir;
        moved[label[i]] = dir;
      } else {
        const double w = beta(rng);
        left_labels.clear();
        right_labels.clear();
        for (int k = i; k < j; ++k) {
          if (rng.uniform() < w) right_labels.push_back(label[k]);
          else left_labels.push_back(label[k]);
        }
        const long here = site[i];
        int k = i;
        for (int l : left_labels) {
          label[k] = l;
          site[k++] = here - 1;
          moved[l] = -1;
        }
        for (int l : right_labels) {
          label[k] = l;
          site[k++] = here + 1;
          moved[l] = 1;
        }
      }
      i = j;
    }
    if (stats) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) stats->covariation[a * n + b] += h * moved[a] * moved[b];
      }
    }
  }

  // Uniform jitter shared by the walkers of a site.
  int k = 0;
  while (k < n) {
    int j = k + 1;
    while (j < n && site[j] == site[k]) ++j;
    const double pos = static_cast<double>(site[k]) * eps + eps * (2.0 * rng.uniform() - 1.0);
    for (int m = k; m < j; ++m) out.positions[label[m]] = pos;
    k = j;
  }
  return out;
}

LabeledState labeled_evolve(const LabeledState& x, double t, const ModelSpec& model,
                            RngStream& rng) {
  if (const auto* c = std::get_if<CorrelatedModel>(&model.kind))
    return correlated_evolve(x, t, c->a, rng);
  const auto& s = std::get<StickyModel>(model.kind);
  if (s.scheme == StickyScheme::Pair) return sticky_pair_evolve(x, t, s.theta, s.dt, rng);
  return sticky_rwre_evolve(x, t, s.theta, s.epsilon, rng);
}

EvolveOutcome unlabeled_evolve(const Configuration& mu, double t, const ModelSpec& model,
                               RngStream& rng) {
  EvolveOutcome out;
  const LabeledState start{mu.points(), 0.0};
  for (double p : start.positions) {
    if (!model.window.contains(p)) out.window_violation = true;
  }
  if (start.positions.empty()) return out;
  const LabeledState end = labeled_evolve(start, t, model, rng);
  out.config = Configuration::from_points(end.positions);
  return out;
}

std::vector<LabeledState> sample_path(const LabeledState& x, std::span<const double> times,
                                      const ModelSpec& model, RngStream& rng) {
  std::vector<LabeledState> path;
  LabeledState cur = x;
  for (double target : times) {
    if (target < cur.time) throw InvalidInput("path times must be nondecreasing");
    cur = labeled_evolve(cur, target - cur.time, model, rng);
    cur.time = target;
    path.push_back(cur);
  }
  return path;
}

void write_path_csv(std::ostream& out, int replica, std::span<const LabeledState> path,
                    bool header) {
  if (header) out << "replica,time,particle,position\n";
  const auto old = out.precision(17);
  for (const auto& state : path) {
    for (std::size_t i = 0; i < state.positions.size(); ++i)
      out << replica << ',' << state.time << ',' << i << ',' << state.positions[i] << '\n';
  }
  out.precision(old);
}

}  // namespace intertwine
