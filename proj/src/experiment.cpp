#include "intertwine/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "intertwine/errors.hpp"

namespace intertwine {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw InvalidInput(where + " must be an object");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw InvalidInput("unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string scheme_name(StickyScheme s) { return s == StickyScheme::Pair ? "pair" : "rwre"; }

StickyScheme parse_scheme(const std::string& s) {
  if (s == "pair") return StickyScheme::Pair;
  if (s == "rwre") return StickyScheme::Rwre;
  throw InvalidInput("sticky scheme must be 'pair' or 'rwre'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (suite.empty()) throw InvalidInput("suite name is empty");
  if (!(k_sigma > 0.0)) throw InvalidInput("k_sigma must be positive");
  if (times.empty()) throw InvalidInput("at least one time is required");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("times must be finite and nonnegative");
  for (double a : correlations)
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("correlations must lie in [0, 1]");
  if (boxes.size() < 2) throw InvalidInput("at least two boxes are required");
  if (pascal_rate != theta)
    throw InvalidInput("Pascal intensity rate must equal theta for the sticky model");
  BoxFunction({{boxes[0], 1}, {boxes[1], 1}});
  const ModelSpec c = correlated(correlations.empty() ? 0.0 : correlations.front());
  c.validate(max_time());
  sticky().validate(max_time());
  const Interval inner = c.interior();
  for (const auto& b : boxes) {
    if (b.lower < inner.lower || b.upper > inner.upper)
      throw InvalidInput("boxes must lie inside the window minus the margin");
  }
  std::get<PoissonFamily>(poisson()).lambda.validate();
  std::get<MeixnerFamily>(pascal()).params.validate();
  if (!(quadrature.tolerance > 0.0)) throw InvalidInput("quadrature tolerance must be positive");
  const auto& r = replicas;
  for (std::int64_t v : {r.moments, r.orthogonality, r.inner, r.nested, r.consistency,
                         r.reversibility, r.reversibility_infinite, r.condition, r.martingale}) {
    if (v < 2) throw InvalidInput("replica counts must be at least 2");
  }
  if (r.zeta_samples < 2) throw InvalidInput("zeta_samples must be at least 2");
}

double ExperimentConfig::max_time() const { return *std::max_element(times.begin(), times.end()); }

ModelSpec ExperimentConfig::correlated(double a) const {
  return ModelSpec{CorrelatedModel{a}, {-half_width, half_width}, margin};
}

ModelSpec ExperimentConfig::sticky() const { return sticky(scheme); }

ModelSpec ExperimentConfig::sticky(StickyScheme s) const {
  return ModelSpec{StickyModel{theta, dt, s, epsilon}, {-half_width, half_width}, margin};
}

PolyFamily ExperimentConfig::poisson() const {
  return PoissonFamily{IntensitySpec{poisson_rate, half_width}};
}

PolyFamily ExperimentConfig::pascal() const {
  return MeixnerFamily{PascalParams{pascal_p, IntensitySpec{pascal_rate, half_width}}};
}

json to_json(const ExperimentConfig& c) {
  json boxes = json::array();
  for (const auto& b : c.boxes) boxes.push_back({b.lower, b.upper});
  const auto& r = c.replicas;
  return {{"schema_version", ExperimentConfig::kSchemaVersion},
          {"suite", c.suite},
          {"seed", c.seed},
          {"k_sigma", c.k_sigma},
          {"times", c.times},
          {"window_half_width", c.half_width},
          {"margin", c.margin},
          {"correlated", {{"a", c.correlations}}},
          {"sticky",
           {{"theta", c.theta}, {"dt", c.dt}, {"epsilon", c.epsilon}, {"scheme", scheme_name(c.scheme)}}},
          {"poisson", {{"rate", c.poisson_rate}}},
          {"pascal", {{"p", c.pascal_p}, {"rate", c.pascal_rate}}},
          {"boxes", boxes},
          {"replicas",
           {{"moments", r.moments},
            {"orthogonality", r.orthogonality},
            {"zeta_samples", r.zeta_samples},
            {"inner", r.inner},
            {"nested", r.nested},
            {"consistency", r.consistency},
            {"reversibility", r.reversibility},
            {"reversibility_infinite", r.reversibility_infinite},
            {"condition", r.condition},
            {"martingale", r.martingale}}},
          {"quadrature",
           {{"tolerance", c.quadrature.tolerance},
            {"initial_order", c.quadrature.initial_order},
            {"max_order", c.quadrature.max_order}}}};
}

ExperimentConfig config_from_json(const json& j) {
  require_keys(j, "config",
               {"schema_version", "suite", "seed", "k_sigma", "times", "window_half_width", "margin",
                "correlated", "sticky", "poisson", "pascal", "boxes", "replicas", "quadrature"});
  int version = 0;
  read(j, "schema_version", version);
  if (version != ExperimentConfig::kSchemaVersion)
    throw InvalidInput("unsupported schema_version " + std::to_string(version));
  ExperimentConfig c;
  read(j, "suite", c.suite);
  read(j, "seed", c.seed);
  read(j, "k_sigma", c.k_sigma);
  read(j, "times", c.times);
  read(j, "window_half_width", c.half_width);
  read(j, "margin", c.margin);
  if (j.contains("correlated")) {
    const json& m = j.at("correlated");
    require_keys(m, "correlated", {"a"});
    read(m, "a", c.correlations);
  }
  if (j.contains("sticky")) {
    const json& m = j.at("sticky");
    require_keys(m, "sticky", {"theta", "dt", "epsilon", "scheme"});
    read(m, "theta", c.theta);
    read(m, "dt", c.dt);
    read(m, "epsilon", c.epsilon);
    std::string scheme = scheme_name(c.scheme);
    read(m, "scheme", scheme);
    c.scheme = parse_scheme(scheme);
  }
  if (j.contains("poisson")) {
    const json& m = j.at("poisson");
    require_keys(m, "poisson", {"rate"});
    read(m, "rate", c.poisson_rate);
  }
  if (j.contains("pascal")) {
    const json& m = j.at("pascal");
    require_keys(m, "pascal", {"p", "rate"});
    read(m, "p", c.pascal_p);
    read(m, "rate", c.pascal_rate);
  }
  if (j.contains("boxes")) {
    std::vector<std::array<double, 2>> raw;
    read(j, "boxes", raw);
    c.boxes.clear();
    for (const auto& b : raw) {
      if (!(b[0] < b[1])) throw InvalidInput("boxes must have lower < upper");
      c.boxes.push_back({b[0], b[1]});
    }
  }
  if (j.contains("replicas")) {
    const json& m = j.at("replicas");
    require_keys(m, "replicas",
                 {"moments", "orthogonality", "zeta_samples", "inner", "nested", "consistency",
                  "reversibility", "reversibility_infinite", "condition", "martingale"});
    auto& r = c.replicas;
    read(m, "moments", r.moments);
    read(m, "orthogonality", r.orthogonality);
    read(m, "zeta_samples", r.zeta_samples);
    read(m, "inner", r.inner);
    read(m, "nested", r.nested);
    read(m, "consistency", r.consistency);
    read(m, "reversibility", r.reversibility);
    read(m, "reversibility_infinite", r.reversibility_infinite);
    read(m, "condition", r.condition);
    read(m, "martingale", r.martingale);
  }
  if (j.contains("quadrature")) {
    const json& m = j.at("quadrature");
    require_keys(m, "quadrature", {"tolerance", "initial_order", "max_order"});
    read(m, "tolerance", c.quadrature.tolerance);
    read(m, "initial_order", c.quadrature.initial_order);
    read(m, "max_order", c.quadrature.max_order);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace intertwine
