#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "intertwine/configuration.hpp"
#include "intertwine/dynamics.hpp"
#include "intertwine/orthopolys.hpp"
#include "intertwine/quadrature.hpp"

namespace intertwine {

struct ReplicaCounts {
  std::int64_t moments = 200000;
  std::int64_t orthogonality = 200000;
  int zeta_samples = 10;
  std::int64_t inner = 10000;
  // Nested right-side replicas for the sticky two-particle check.
  std::int64_t nested = 4000;
  std::int64_t consistency = 100000;
  std::int64_t reversibility = 100000;
  std::int64_t reversibility_infinite = 100000;
  std::int64_t condition = 20000;
  std::int64_t martingale = 40000;
};

struct ExperimentConfig {
  static constexpr int kSchemaVersion = 1;

  std::string suite = "all";
  std::uint64_t seed = 20241016;
  double k_sigma = 4.0;
  std::vector<double> times{0.25};
  double half_width = 4.5;
  double margin = 3.0;
  std::vector<double> correlations{0.0, 0.5, 1.0};
  double theta = 1.0;
  double dt = 2.5e-5;
  double epsilon = 0.02;
  StickyScheme scheme = StickyScheme::Rwre;
  double poisson_rate = 1.0;
  double pascal_p = 0.5;
  double pascal_rate = 1.0;
  // Test functions are built from these boxes; at least two are required.
  std::vector<Interval> boxes{{-0.5, 0.5}, {0.5, 1.5}};
  ReplicaCounts replicas;
  DoublingPolicy quadrature{1e-8, 8, 4096};

  // Margin rule, parameter ranges and family/model pairing.
  void validate() const;

  double max_time() const;
  ModelSpec correlated(double a) const;
  ModelSpec sticky() const;
  ModelSpec sticky(StickyScheme s) const;
  PolyFamily poisson() const;
  PolyFamily pascal() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
// Rejects unknown keys, wrong types and unsupported schema versions.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace intertwine
