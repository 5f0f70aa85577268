#include "intertwine/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/estimate.hpp"
#include "intertwine/kernels.hpp"
#include "intertwine/rng.hpp"
#include "intertwine/samplers.hpp"

namespace intertwine {

namespace {

enum Tag : std::uint64_t {
  kZeta = 0x7a657461,
  kLeft,
  kRight,
  kReference,
};

RngStream make_stream(const VerifyOptions& opts, std::initializer_list<std::uint64_t> parts) {
  return RngStream(opts.seed, stream_id(parts));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const BoxFunction& f) {
  std::string out;
  for (const auto& b : f.blocks()) {
    if (!out.empty()) out += 'x';
    out += '[' + fmt(b.box.lower) + ',' + fmt(b.box.upper) + ")^" + std::to_string(b.multiplicity);
  }
  return out;
}

std::string describe(const ModelSpec& model) {
  if (const auto* c = std::get_if<CorrelatedModel>(&model.kind)) return "correlated a=" + fmt(c->a);
  const auto& s = std::get<StickyModel>(model.kind);
  std::string out = "sticky theta=" + fmt(s.theta);
  if (s.scheme == StickyScheme::Pair) return out + " pair dt=" + fmt(s.dt);
  return out + " rwre eps=" + fmt(s.epsilon);
}

std::string describe(const PolyFamily& family) {
  if (const auto* p = std::get_if<PoissonFamily>(&family))
    return "poisson rate=" + fmt(p->lambda.rate) + " L=" + fmt(p->lambda.half_width);
  const auto& m = std::get<MeixnerFamily>(family).params;
  return "pascal p=" + fmt(m.p) + " rate=" + fmt(m.alpha.rate) + " L=" + fmt(m.alpha.half_width);
}

double family_density(const PolyFamily& family) {
  if (const auto* p = std::get_if<PoissonFamily>(&family)) return p->lambda.rate;
  const auto& m = std::get<MeixnerFamily>(family).params;
  return m.odds() * m.alpha.rate;
}

// Expected number of particles crossing a band of width margin within time t,
// from either side, at the given density, times scale.
double truncation_budget(double density, double t, double margin, double scale) {
  if (t <= 0.0) return 0.0;
  const double s = std::sqrt(t);
  const double z = margin / s;
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return 4.0 * density * s * phi * scale;
}

// Discretization budget of the sticky schemes for a quantity whose
// coincidence-dependent part has magnitude scale.
double scheme_budget(const ModelSpec& model, double scale) {
  const auto* s = std::get_if<StickyModel>(&model.kind);
  if (s == nullptr) return 0.0;
  if (s->scheme == StickyScheme::Pair) return scale * std::sqrt(s->dt) / (2.0 * s->theta);
  return scale * 2.0 * s->theta * s->epsilon;
}

void check_pairing(const ModelSpec& model, const PolyFamily& family) {
  const bool poisson = std::holds_alternative<PoissonFamily>(family);
  if (poisson == model.is_sticky())
    throw InvalidInput("Poisson families pair with correlated motions, Pascal with sticky motions");
  const IntensitySpec& alpha = family_intensity(family);
  if (!(alpha.window() == model.window))
    throw InvalidInput("family window must match the model window");
  if (const auto* s = std::get_if<StickyModel>(&model.kind)) {
    if (alpha.rate != s->theta)
      throw InvalidInput("Pascal intensity must be theta times Lebesgue measure");
  }
}

void check_inside(const Interval& hull, const ModelSpec& model) {
  const Interval inner = model.interior();
  if (hull.lower < inner.lower || hull.upper > inner.upper)
    throw InvalidInput("test function must be supported inside the window minus the margin");
}

Interval support_hull(const std::vector<Interval>& boxes) {
  if (boxes.empty()) throw InvalidInput("functional has no support boxes");
  Interval h = boxes.front();
  for (const auto& b : boxes) {
    h.lower = std::min(h.lower, b.lower);
    h.upper = std::max(h.upper, b.upper);
  }
  return h;
}

Interval decay_region(const Interval& hull, const ModelSpec& model) {
  return Interval{hull.lower - model.margin, hull.upper + model.margin}.intersect(model.window);
}

std::vector<double> edges(const std::vector<Interval>& boxes) {
  std::vector<double> out;
  for (const auto& b : boxes) {
    out.push_back(b.lower);
    out.push_back(b.upper);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Interval> block_boxes(const BoxFunction& f) {
  std::vector<Interval> out;
  for (const auto& b : f.blocks()) out.push_back(b.box);
  return out;
}

double max_of(const std::vector<double>& x, const std::vector<int>& labels) {
  double m = -std::numeric_limits<double>::infinity();
  for (int k : labels) m = std::max(m, x[static_cast<std::size_t>(k)]);
  return m;
}

double total_length(const std::vector<Interval>& boxes) {
  double s = 0.0;
  for (const auto& b : boxes) s += b.length();
  return s;
}

double uniform_on(const std::vector<Interval>& boxes, double total, RngStream& rng) {
  double u = rng.uniform() * total;
  for (const auto& b : boxes) {
    if (u < b.length()) return b.lower + u;
    u -= b.length();
  }
  return boxes.back().upper - 0.5 * boxes.back().length();
}

void all_subsets(int n, int l, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == l) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    all_subsets(n, l, i + 1, cur, out);
    cur.pop_back();
  }
}

// Reference measure of the n-particle dynamics restricted to U^n: Lebesgue
// for correlated motions, lambda_n with alpha = theta x Lebesgue for sticky.
class ReferenceSampler {
 public:
  ReferenceSampler(const ModelSpec& model, int n, std::vector<Interval> boxes)
      : n_(n), boxes_(std::move(boxes)), length_(total_length(boxes_)) {
    if (const auto* s = std::get_if<StickyModel>(&model.kind)) {
      const double a = s->theta * length_;
      double acc = 0.0;
      for (const auto& sigma : set_partitions(n)) {
        double w = std::pow(a, sigma.num_blocks());
        for (int size : sigma.block_sizes()) w *= static_cast<double>(factorial_u64(size - 1));
        acc += w;
        partitions_.push_back(sigma);
        cumulative_.push_back(acc);
      }
      mass_ = acc;
    } else {
      mass_ = std::pow(length_, n);
    }
  }

  double mass() const { return mass_; }

  std::vector<double> operator()(RngStream& rng) const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    if (partitions_.empty()) {
      for (auto& v : x) v = uniform_on(boxes_, length_, rng);
      return x;
    }
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                           partitions_.size() - 1);
    const SetPartition& sigma = partitions_[idx];
    std::vector<double> pos(static_cast<std::size_t>(sigma.num_blocks()));
    for (auto& v : pos) v = uniform_on(boxes_, length_, rng);
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(sigma.block_of(i))];
    return x;
  }

 private:
  int n_;
  std::vector<Interval> boxes_;
  double length_;
  double mass_ = 0.0;
  std::vector<SetPartition> partitions_;
  std::vector<double> cumulative_;
};

double evolve_value(double x, double y, double t, const ModelSpec& model, const BoxFunction& f,
                    RngStream& rng) {
  const LabeledState start{{x, y}, 0.0};
  const LabeledState end = labeled_evolve(start, t, model, rng);
  return symmetrization_value(end.positions, f);
}

// Start points for the intensity integrals: a uniform point of the test-function
// hull smeared by a Gaussian, restricted to the decay region.
class StartProposal {
 public:
  StartProposal(const Interval& hull, const Interval& decay, double sigma)
      : hull_(hull), decay_(decay), sigma_(sigma) {
    const std::vector<Interval> panels = split_panels(decay, std::vector<double>{hull.lower, hull.upper});
    norm_ = integrate_doubling([this](double u) { return unnormalized(u); }, panels,
                               DoublingPolicy{1e-13, 16, 4096});
  }

  double draw(RngStream& rng) const {
    for (;;) {
      const double y = hull_.lower + hull_.length() * rng.uniform();
      const double u = y + sigma_ * rng.normal();
      if (decay_.contains(u)) return u;
    }
  }

  double density(double u) const { return unnormalized(u) / norm_; }

 private:
  double unnormalized(double u) const {
    const double r = 1.0 / (sigma_ * std::numbers::sqrt2);
    return 0.5 * (std::erfc((hull_.lower - u) * r) - std::erfc((hull_.upper - u) * r)) /
           hull_.length();
  }

  Interval hull_;
  Interval decay_;
  double sigma_;
  double norm_ = 1.0;
};

// One sample of M_2 applied to P_t^{[2]} f at zeta, with the alpha integrals
// importance-sampled from the proposal. Atoms outside the decay region are dropped.
double nested_meixner_sample(const Configuration& zeta, const BoxFunction& f, double t,
                             const ModelSpec& model, const PascalParams& params,
                             const Interval& decay, const StartProposal& proposal,
                             RngStream& rng) {
  const double q = 1.0 - 1.0 / params.p;
  const double c0 = 1.0 / (q * q);
  const double c1 = 2.0 / q;
  const double rate = params.alpha.rate;

  const double u1 = proposal.draw(rng);
  const double u2 = proposal.draw(rng);
  const double w12 = rate * rate / (proposal.density(u1) * proposal.density(u2));
  double total = c0 * w12 * evolve_value(u1, u2, t, model, f, rng);
  const double u3 = proposal.draw(rng);
  total += c0 * rate / proposal.density(u3) * evolve_value(u3, u3, t, model, f, rng);

  std::vector<Atom> atoms;
  for (const auto& a : zeta.atoms())
    if (decay.contains(a.position)) atoms.push_back(a);
  for (const auto& a : atoms) {
    const double m = a.multiplicity;
    const double u = proposal.draw(rng);
    total += c1 * m * rate / proposal.density(u) * evolve_value(a.position, u, t, model, f, rng);
    total += (c1 * m + m * (m - 1.0)) * evolve_value(a.position, a.position, t, model, f, rng);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double w = 2.0 * atoms[i].multiplicity * atoms[j].multiplicity;
      total += w * evolve_value(atoms[i].position, atoms[j].position, t, model, f, rng);
    }
  }
  return total;
}

// A sample mean of integer-valued draws that never varied carries no spread
// information; its error is at least one unit jump over the replica count.
McEstimate with_resolution(McEstimate e) {
  if (e.std_error == 0.0 && e.replicas > 0) e.std_error = 1.0 / static_cast<double>(e.replicas);
  return e;
}

Verdict paired_verdict(std::string identity, std::string params, const std::vector<double>& lhs,
                       const std::vector<double>& rhs, double systematic,
                       const VerifyOptions& opts, std::string details = {}) {
  std::vector<double> diff(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
  const McEstimate l = summarize(lhs, opts.seed);
  const McEstimate r = summarize(rhs, opts.seed);
  const McEstimate d = summarize(diff, opts.seed);
  return judge(std::move(identity), std::move(params), l.mean, r.mean, d.std_error, systematic,
               opts.k_sigma, opts.seed, std::move(details));
}

Verdict independent_verdict(std::string identity, std::string params, const McEstimate& l,
                            const McEstimate& r, double systematic, const VerifyOptions& opts,
                            std::string details = {}) {
  const McEstimate d = difference(l, r);
  return judge(std::move(identity), std::move(params), l.mean, r.mean, d.std_error, systematic,
               opts.k_sigma, opts.seed, std::move(details));
}

void check_replicas(std::int64_t replicas) {
  if (replicas < 2) throw InvalidInput("at least two replicas are required");
}

}  // namespace

double Verdict::excess_z() const {
  const double excess = std::max(0.0, std::abs(lhs - rhs) - systematic);
  if (std_error > 0.0) return excess / std_error;
  return excess == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

Verdict judge(std::string identity, std::string params, double lhs, double rhs, double se,
              double systematic, double k_sigma, std::uint64_t seed, std::string details) {
  Verdict v;
  v.identity = std::move(identity);
  v.params = std::move(params);
  v.lhs = lhs;
  v.rhs = rhs;
  v.std_error = se;
  v.systematic = systematic;
  v.seed = seed;
  const double diff = lhs - rhs;
  if (se > 0.0)
    v.z_score = diff / se;
  else
    v.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  v.pass = std::abs(diff) <= k_sigma * se + systematic;
  std::string text = "lhs=" + fmt_full(lhs) + " rhs=" + fmt_full(rhs) + " se=" + fmt_full(se) +
                     " systematic=" + fmt_full(systematic) + " k_sigma=" + fmt(k_sigma);
  if (!details.empty()) text += " " + details;
  v.details = std::move(text);
  return v;
}

Verdict judge_exact(std::string identity, std::string params, const Rational& lhs,
                    const Rational& rhs) {
  Verdict v;
  v.identity = std::move(identity);
  v.params = std::move(params);
  v.lhs = to_double(lhs);
  v.rhs = to_double(rhs);
  v.pass = lhs == rhs;
  v.z_score = v.pass ? 0.0 : std::numeric_limits<double>::infinity();
  v.details = "exact lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
  return v;
}

std::vector<Verdict> verify_intertwining(const ModelSpec& model, const PolyFamily& family,
                                         const BoxFunction& f, double t, int zeta_samples,
                                         std::int64_t inner_replicas, const VerifyOptions& opts) {
  const int n = f.degree();
  if (n < 1 || n > 2) throw InvalidInput("intertwining checks need degree 1 or 2");
  if (zeta_samples < 2) throw InvalidInput("at least two starting configurations are required");
  check_replicas(inner_replicas);
  check_pairing(model, family);
  model.validate(t);
  check_inside(f.hull(), model);

  const IntensitySpec& alpha = family_intensity(family);
  const Interval decay = decay_region(f.hull(), model);
  std::vector<double> breaks = edges(block_boxes(f));
  // Extra panel edges keep the kinks of degenerate correlations inside short panels.
  for (double b = decay.lower + 0.5; b < decay.upper; b += 0.5) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  const QuadratureSpec quad{decay, breaks, opts.quadrature};
  const bool nested = model.is_sticky() && n == 2;
  double a = 0.0;
  if (const auto* c = std::get_if<CorrelatedModel>(&model.kind)) a = c->a;
  const PointFunction g = [&](std::span<const double> x) { return correlated_semigroup(x, t, a, f); };
  std::optional<GeneralPolyEvaluator> general;
  if (!nested) general.emplace(g, family, n, quad);
  const PointSampler sampler = family_sampler(family);
  const std::int64_t rhs_replicas = opts.rhs_replicas > 0 ? opts.rhs_replicas : inner_replicas;
  const std::string base = describe(model) + ";" + describe(family) + ";f=" + describe(f) +
                           ";t=" + fmt(t) + ";n=" + std::to_string(n);
  const Interval b0 = f.blocks().front().box;
  std::optional<StartProposal> proposal;
  if (nested) proposal.emplace(f.hull(), decay, 2.0 * std::sqrt(std::max(t, 1e-12)));

  std::vector<Verdict> out;
  std::vector<double> weighted_lhs, weighted_rhs, weighted_diff;
  double pooled_systematic = 0.0;
  for (int s = 0; s < zeta_samples; ++s) {
    RngStream zr = make_stream(opts, {kZeta, static_cast<std::uint64_t>(s)});
    const Configuration zeta = sampler(zr);
    const auto us = static_cast<std::uint64_t>(s);

    const std::vector<double> left = run_replicas(inner_replicas, [&](std::int64_t r) {
      RngStream rng = make_stream(opts, {kLeft, us, static_cast<std::uint64_t>(r)});
      return poly_eval(unlabeled_evolve(zeta, t, model, rng).config, f, family);
    });
    const McEstimate lhs = with_resolution(summarize(left, opts.seed));

    McEstimate rhs{0.0, 0.0, 0, opts.seed};
    double systematic = 0.0;
    if (!nested) {
      rhs.mean = (*general)(zeta);
      rhs.replicas = 1;
      systematic += 10.0 * opts.quadrature.tolerance * (1.0 + zeta.size()) * (1.0 + alpha.rate);
    } else {
      const auto& params = std::get<MeixnerFamily>(family).params;
      std::vector<double> right = run_replicas(rhs_replicas, [&](std::int64_t r) {
        RngStream rng = make_stream(opts, {kRight, us, static_cast<std::uint64_t>(r)});
        return nested_meixner_sample(zeta, f, t, model, params, decay, *proposal, rng);
      });
      rhs = summarize(right, opts.seed);
      double scale = 0.0;
      for (double v : right) scale += std::abs(v);
      systematic += scheme_budget(model, scale / static_cast<double>(right.size()));
    }
    const double scale = 10.0 * (1.0 + std::abs(lhs.mean) + std::abs(rhs.mean));
    systematic += truncation_budget(family_density(family), t, model.margin, scale);

    const std::string params = base + ";zeta=" + std::to_string(s) +
                               ";particles=" + std::to_string(zeta.size());
    out.push_back(independent_verdict("intertwining", params, lhs, rhs, systematic, opts,
                                      "inner=" + std::to_string(inner_replicas)));

    const double w = std::exp(-static_cast<double>(zeta.count(b0)));
    weighted_lhs.push_back(lhs.mean * w);
    weighted_rhs.push_back(rhs.mean * w);
    weighted_diff.push_back((lhs.mean - rhs.mean) * w);
    pooled_systematic += systematic * w;
  }
  const McEstimate l = summarize(weighted_lhs, opts.seed);
  const McEstimate r = summarize(weighted_rhs, opts.seed);
  const McEstimate d = summarize(weighted_diff, opts.seed);
  out.push_back(judge("intertwining-pooled", base + ";weight=exp(-zeta(B0))", l.mean, r.mean,
                      d.std_error, pooled_systematic / zeta_samples, opts.k_sigma, opts.seed,
                      "samples=" + std::to_string(zeta_samples)));
  return out;
}

Verdict verify_consistency(const Configuration& mu, int l, const ModelSpec& model,
                           const BoxFunction& f, double t, std::int64_t replicas,
                           const VerifyOptions& opts) {
  const int n = mu.size();
  if (f.degree() != l) throw InvalidInput("functional degree must equal l");
  if (l < 1 || l > n || n > 5) throw InvalidInput("consistency needs 1 <= l <= |mu| <= 5");
  check_replicas(replicas);
  model.validate(t);
  const std::vector<double> pts = mu.points();
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  all_subsets(n, l, 0, cur, subsets);
  const double orderings = static_cast<double>(factorial_u64(l));

  const std::vector<double> left = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    const LabeledState end = labeled_evolve({pts, 0.0}, t, model, rng);
    return static_cast<double>(factorial_integral(Configuration::from_points(end.positions), f));
  });
  const std::vector<double> right = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kRight, static_cast<std::uint64_t>(r)});
    double total = 0.0;
    for (const auto& subset : subsets) {
      LabeledState start;
      for (int i : subset) start.positions.push_back(pts[static_cast<std::size_t>(i)]);
      const LabeledState end = labeled_evolve(start, t, model, rng);
      total += symmetrization_value(end.positions, f);
    }
    return orderings * total;
  });
  const McEstimate lhs = with_resolution(summarize(left, opts.seed));
  const McEstimate rhs = with_resolution(summarize(right, opts.seed));
  double systematic = 0.0;
  if (const auto* s = std::get_if<StickyModel>(&model.kind); s && s->scheme == StickyScheme::Pair)
    systematic = scheme_budget(model, std::abs(rhs.mean));
  const std::string params = describe(model) + ";mu=" + std::to_string(n) + " points;l=" +
                             std::to_string(l) + ";f=" + describe(f) + ";t=" + fmt(t);
  return independent_verdict("consistency", params, lhs, rhs, systematic, opts,
                             "replicas=" + std::to_string(replicas));
}

Verdict verify_orthogonality(const PolyFamily& family, const BoxFunction& f, const BoxFunction& g,
                             std::int64_t replicas, const VerifyOptions& opts) {
  const int n = f.degree();
  const int m = g.degree();
  if (n > 3 || m > 3) throw InvalidInput("orthogonality checks need degrees <= 3");
  check_replicas(replicas);
  const PointSampler sampler = family_sampler(family);
  const std::vector<double> values = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    const Configuration zeta = sampler(rng);
    return poly_eval(zeta, f, family) * poly_eval(zeta, g, family);
  });
  double target = 0.0;
  if (n == m) {
    const double nf = static_cast<double>(factorial_u64(n));
    if (const auto* p = std::get_if<PoissonFamily>(&family)) {
      target = nf * lebesgue_inner_product(f, g, p->lambda);
    } else {
      const auto& params = std::get<MeixnerFamily>(family).params;
      target = std::pow(params.p, n) * nf / std::pow(1.0 - params.p, 2 * n) *
               lambda_n_inner_product(f, g, params.alpha);
    }
  }
  const McEstimate lhs = summarize(values, opts.seed);
  const std::string params = describe(family) + ";f=" + describe(f) + ";g=" + describe(g);
  return judge("orthogonality", params, lhs.mean, target, lhs.std_error, 0.0, opts.k_sigma,
               opts.seed, "replicas=" + std::to_string(replicas));
}

Verdict verify_factorial_moment(const PolyFamily& family, const BoxFunction& f,
                                std::int64_t replicas, const VerifyOptions& opts) {
  check_replicas(replicas);
  const McEstimate lhs = estimate_factorial_moment(family_sampler(family), f, replicas,
                                                   stream_id({opts.seed, kLeft}));
  double target = 1.0;
  if (const auto* p = std::get_if<PoissonFamily>(&family)) {
    for (const auto& b : f.blocks()) target *= std::pow(p->lambda.measure(b.box), b.multiplicity);
  } else {
    const auto& params = std::get<MeixnerFamily>(family).params;
    target = std::pow(params.odds(), f.degree()) * lambda_n_integral(f, params.alpha);
  }
  const std::string params = describe(family) + ";f=" + describe(f);
  return judge("factorial-moment", params, lhs.mean, target, lhs.std_error, 0.0, opts.k_sigma,
               opts.seed, "replicas=" + std::to_string(replicas));
}

Verdict verify_reversibility_finite(const ModelSpec& model, int n, const BoxFunction& f,
                                    const BoxFunction& g, double t, std::int64_t replicas,
                                    const VerifyOptions& opts) {
  if (n < 1 || n > 3) throw InvalidInput("finite reversibility checks need 1 <= n <= 3");
  if (f.degree() != n || g.degree() != n) throw InvalidInput("test functions must have degree n");
  check_replicas(replicas);
  model.validate(t);

  auto side = [&](const BoxFunction& first, const BoxFunction& second, Tag tag) {
    const ReferenceSampler reference(model, n, block_boxes(first));
    const double mass = reference.mass();
    return run_replicas(replicas, [&](std::int64_t r) {
      RngStream rng = make_stream(opts, {tag, static_cast<std::uint64_t>(r)});
      const std::vector<double> x = reference(rng);
      const double w = symmetrization_value(x, first);
      if (w == 0.0) return 0.0;
      const LabeledState end = labeled_evolve({x, 0.0}, t, model, rng);
      return mass * w * symmetrization_value(end.positions, second);
    });
  };
  const McEstimate lhs = summarize(side(f, g, kLeft), opts.seed);
  const McEstimate rhs = summarize(side(g, f, kRight), opts.seed);
  const double systematic =
      scheme_budget(model, std::max(std::abs(lhs.mean), std::abs(rhs.mean)));
  const std::string params = describe(model) + ";n=" + std::to_string(n) + ";f=" + describe(f) +
                             ";g=" + describe(g) + ";t=" + fmt(t);
  return independent_verdict("reversibility-finite", params, lhs, rhs, systematic, opts,
                             "replicas=" + std::to_string(replicas));
}

Verdict verify_reversibility_infinite(const ModelSpec& model, const PolyFamily& family,
                                      const Functional& F, const Functional& G, double t,
                                      std::int64_t replicas, const VerifyOptions& opts) {
  check_replicas(replicas);
  check_pairing(model, family);
  model.validate(t);
  std::vector<Interval> support = F.support;
  support.insert(support.end(), G.support.begin(), G.support.end());
  const Interval hull = support_hull(support);
  check_inside(hull, model);
  const Interval decay = decay_region(hull, model);
  const PointSampler sampler = family_sampler(family);

  auto side = [&](const Functional& later, const Functional& initial, Tag tag) {
    return run_replicas(replicas, [&](std::int64_t r) {
      RngStream rng = make_stream(opts, {tag, static_cast<std::uint64_t>(r)});
      const Configuration zeta = sampler(rng).restricted(decay);
      const Configuration eta = unlabeled_evolve(zeta, t, model, rng).config;
      return later(eta) * initial(zeta);
    });
  };
  const McEstimate lhs = summarize(side(F, G, kLeft), opts.seed);
  const McEstimate rhs = summarize(side(G, F, kRight), opts.seed);
  const double scale = 2.0 * (1.0 + std::abs(lhs.mean) + std::abs(rhs.mean));
  const double systematic = truncation_budget(family_density(family), t, model.margin, scale);
  const std::string params = describe(model) + ";" + describe(family) + ";F=" + F.name +
                             ";G=" + G.name + ";t=" + fmt(t);
  return independent_verdict("reversibility-infinite", params, lhs, rhs, systematic, opts,
                             "replicas=" + std::to_string(replicas));
}

Verdict verify_condition_poisson(int l, const Configuration& z, const Functional& F, double t,
                                 const ModelSpec& model, const IntensitySpec& lambda,
                                 std::int64_t replicas, const VerifyOptions& opts) {
  if (model.is_sticky()) throw InvalidInput("the Poisson condition is checked for correlated motions");
  if (l < 0 || l > 1 || z.size() != l) throw InvalidInput("condition checks need l in {0, 1} points");
  if (!(lambda.window() == model.window)) throw InvalidInput("intensity window must match the model window");
  check_replicas(replicas);
  model.validate(t);

  std::vector<Interval> panels;
  for (const auto& p : split_panels(model.window, edges(F.support))) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(p.length() / 0.5)));
    const double h = p.length() / pieces;
    for (int k = 0; k < pieces; ++k)
      panels.push_back({p.lower + k * h, k + 1 == pieces ? p.upper : p.lower + (k + 1) * h});
  }
  const GaussLegendreRule& rule = gauss_legendre(8);
  std::vector<double> nodes, weights;
  for (const auto& p : panels) {
    const double half = 0.5 * p.length();
    const double mid = 0.5 * (p.lower + p.upper);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      nodes.push_back(mid + half * rule.nodes[k]);
      weights.push_back(half * rule.weights[k] * lambda.rate);
    }
  }
  const std::vector<double> zp = z.points();

  const std::vector<double> left = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    double total = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      LabeledState start{zp, 0.0};
      start.positions.push_back(nodes[j]);
      const LabeledState end = labeled_evolve(start, t, model, rng);
      total += weights[j] * F(Configuration::from_points(end.positions));
    }
    return total;
  });
  const std::vector<double> right = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kRight, static_cast<std::uint64_t>(r)});
    const Configuration eta = Configuration::from_points(labeled_evolve({zp, 0.0}, t, model, rng).positions);
    double total = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double y = nodes[j];
      total += weights[j] * F(eta + Configuration::from_points(std::span<const double>(&y, 1)));
    }
    return total;
  });
  const McEstimate lhs = summarize(left, opts.seed);
  const McEstimate rhs = summarize(right, opts.seed);
  const double scale = 2.0 * (1.0 + std::abs(lhs.mean) + std::abs(rhs.mean));
  const double systematic = truncation_budget(lambda.rate, t, model.margin, scale);
  std::string zs;
  for (double p : zp) zs += (zs.empty() ? "" : " ") + fmt(p);
  const std::string params = describe(model) + ";l=" + std::to_string(l) + ";z=" + zs +
                             ";F=" + F.name + ";t=" + fmt(t);
  return independent_verdict("condition-poisson", params, lhs, rhs, systematic, opts,
                             "nodes=" + std::to_string(nodes.size()));
}

Verdict verify_martingale_sticky(const std::vector<int>& delta, const LabeledState& x, double t,
                                 const StickyModel& model, std::int64_t replicas,
                                 const VerifyOptions& opts) {
  const int n = static_cast<int>(x.positions.size());
  if (n < 1 || n > 4) throw InvalidInput("martingale checks need 1 <= n <= 4");
  if (delta.empty()) throw InvalidInput("label subset must be nonempty");
  for (int k : delta)
    if (k < 0 || k >= n) throw InvalidInput("label out of range");
  std::vector<int> sorted = delta;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("labels must be distinct");
  check_replicas(replicas);
  const bool pair = model.scheme == StickyScheme::Pair;
  if (pair && n > 2) throw InvalidInput("the pair scheme runs at most two particles");

  std::vector<double> lhs(static_cast<std::size_t>(replicas));
  std::vector<double> rhs(lhs.size());
  std::vector<double> gap(lhs.size(), 0.0);
  run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    const auto i = static_cast<std::size_t>(r);
    if (pair) {
      PairPathStats st;
      const LabeledState end = sticky_pair_evolve(x, t, model.theta, model.dt, rng, &st);
      lhs[i] = max_of(end.positions, delta) - max_of(x.positions, delta);
      rhs[i] = delta.size() == 2 ? model.theta * st.stuck_time : 0.0;
    } else {
      RwrePathStats st;
      st.subsets = {delta};
      const LabeledState end = sticky_rwre_evolve(x, t, model.theta, model.epsilon, rng, &st);
      lhs[i] = max_of(end.positions, delta) - max_of(st.start, delta);
      rhs[i] = model.theta * st.beta_integral[0];
      gap[i] = st.lattice_drift[0] - rhs[i];
    }
    return 0.0;
  });
  double systematic = 0.0;
  if (pair) {
    systematic = delta.size() == 2 ? 0.5 * std::sqrt(model.dt) : 0.0;
  } else {
    double s = 0.0;
    for (double v : gap) s += v;
    systematic = std::abs(s / static_cast<double>(gap.size()));
  }
  std::string labels;
  for (int k : delta) labels += (labels.empty() ? "" : " ") + std::to_string(k);
  std::string xs;
  for (double p : x.positions) xs += (xs.empty() ? "" : " ") + fmt(p);
  ModelSpec spec{model};
  const std::string params = describe(spec) + ";delta=" + labels + ";x=" + xs + ";t=" + fmt(t);
  return paired_verdict("martingale", params, lhs, rhs, systematic, opts,
                        "replicas=" + std::to_string(replicas));
}

Verdict verify_covariation_sticky(int k, int l, const LabeledState& x, double t,
                                  const StickyModel& model, std::int64_t replicas,
                                  const VerifyOptions& opts) {
  const int n = static_cast<int>(x.positions.size());
  if (n < 1 || n > 4) throw InvalidInput("covariation checks need 1 <= n <= 4");
  if (k < 0 || l < 0 || k >= n || l >= n) throw InvalidInput("label out of range");
  check_replicas(replicas);
  const bool pair = model.scheme == StickyScheme::Pair;
  if (pair && n > 2) throw InvalidInput("the pair scheme runs at most two particles");

  std::vector<double> lhs(static_cast<std::size_t>(replicas));
  std::vector<double> rhs(lhs.size());
  double shape = 0.0;
  run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    const auto i = static_cast<std::size_t>(r);
    if (pair) {
      PairPathStats st;
      sticky_pair_evolve(x, t, model.theta, model.dt, rng, &st);
      lhs[i] = k == l ? st.quadratic_variation[k] : st.covariation;
      rhs[i] = k == l ? t : st.stuck_time;
    } else {
      RwrePathStats st;
      sticky_rwre_evolve(x, t, model.theta, model.epsilon, rng, &st);
      const auto idx = static_cast<std::size_t>(k * n + l);
      lhs[i] = st.covariation[idx];
      rhs[i] = k == l ? t : st.coincidence[idx];
      if (r == 0) shape = st.beta_shape;
    }
    return 0.0;
  });
  double mean_rhs = 0.0;
  for (double v : rhs) mean_rhs += v;
  mean_rhs /= static_cast<double>(rhs.size());
  double systematic = 0.0;
  if (pair)
    systematic = 0.5 * std::sqrt(model.dt);
  else if (k != l)
    systematic = 2.0 * shape / (1.0 + 2.0 * shape) * std::abs(mean_rhs);
  else
    // Lattice quadratic variation is exactly t; only summation rounding remains.
    systematic = 4.0 * std::ceil(t / (model.epsilon * model.epsilon)) *
                 std::numeric_limits<double>::epsilon() * t;
  std::string xs;
  for (double p : x.positions) xs += (xs.empty() ? "" : " ") + fmt(p);
  ModelSpec spec{model};
  const std::string params = describe(spec) + ";k=" + std::to_string(k) + ";l=" +
                             std::to_string(l) + ";x=" + xs + ";t=" + fmt(t);
  return paired_verdict("covariation", params, lhs, rhs, systematic, opts,
                        "replicas=" + std::to_string(replicas));
}

double expected_coincidence_time(double t, double theta) {
  if (t < 0.0 || !(theta > 0.0)) throw InvalidInput("need t >= 0 and theta > 0");
  if (t == 0.0) return 0.0;
  const double k = 2.0 * theta;
  // u = v^2 removes the square-root behaviour at the origin.
  auto integrand = [k](double v) {
    const double x = k * v;
    double scaled;
    if (x < 25.0) {
      scaled = std::exp(x * x) * std::erfc(x);
    } else {
      const double r = 1.0 / (x * x);
      scaled = (1.0 - 0.5 * r + 0.75 * r * r - 1.875 * r * r * r) / (x * std::sqrt(std::numbers::pi));
    }
    return 2.0 * v * scaled;
  };
  const std::vector<Interval> panels{{0.0, std::sqrt(t)}};
  return integrate_doubling(integrand, panels, DoublingPolicy{1e-13, 8, 4096});
}

Verdict verify_coincidence_time(double t, const StickyModel& model, std::int64_t replicas,
                                const VerifyOptions& opts) {
  check_replicas(replicas);
  const LabeledState x{{0.0, 0.0}, 0.0};
  const std::vector<double> values = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    if (model.scheme == StickyScheme::Pair) {
      PairPathStats st;
      sticky_pair_evolve(x, t, model.theta, model.dt, rng, &st);
      return st.stuck_time;
    }
    RwrePathStats st;
    sticky_rwre_evolve(x, t, model.theta, model.epsilon, rng, &st);
    return st.coincidence[1];
  });
  const McEstimate lhs = summarize(values, opts.seed);
  const double target = expected_coincidence_time(t, model.theta);
  ModelSpec spec{model};
  const double systematic = scheme_budget(spec, target);
  return judge("coincidence-time", describe(spec) + ";x=0 0;t=" + fmt(t), lhs.mean, target,
               lhs.std_error, systematic, opts.k_sigma, opts.seed,
               "replicas=" + std::to_string(replicas));
}

Verdict verify_lattice_calibration(double t, double theta, double dt, double epsilon,
                                   std::int64_t replicas, const VerifyOptions& opts) {
  check_replicas(replicas);
  const LabeledState x{{0.0, 0.0}, 0.0};
  const std::vector<int> both{0, 1};
  const std::vector<double> lattice = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kLeft, static_cast<std::uint64_t>(r)});
    const LabeledState end = sticky_rwre_evolve(x, t, theta, epsilon, rng);
    return max_of(end.positions, both);
  });
  const std::vector<double> pair = run_replicas(replicas, [&](std::int64_t r) {
    RngStream rng = make_stream(opts, {kRight, static_cast<std::uint64_t>(r)});
    const LabeledState end = sticky_pair_evolve(x, t, theta, dt, rng);
    return max_of(end.positions, both);
  });
  const double coincidence = expected_coincidence_time(t, theta);
  const double systematic =
      theta * coincidence * (2.0 * theta * epsilon + std::sqrt(dt) / (2.0 * theta));
  const std::string params = "sticky theta=" + fmt(theta) + ";rwre eps=" + fmt(epsilon) +
                             ";pair dt=" + fmt(dt) + ";x=0 0;t=" + fmt(t);
  return independent_verdict("lattice-calibration", params, summarize(lattice, opts.seed),
                             summarize(pair, opts.seed), systematic, opts,
                             "replicas=" + std::to_string(replicas));
}

}  // namespace intertwine
