#pragma once

#include <string>
#include <vector>

#include "intertwine/experiment.hpp"
#include "intertwine/report.hpp"

namespace intertwine {

struct SuiteInfo {
  std::string name;
  std::string identity;
  std::string summary;
};

const std::vector<SuiteInfo>& suite_catalog();
bool is_suite(const std::string& name);

// Throws InvalidInput for unknown names.
std::string explain_suite(const std::string& name);

// Rational-arithmetic checks; no randomness.
std::vector<Verdict> exact_identity_verdicts();

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config);

// Runs config.suite, expanding "all" into every catalogued suite.
std::vector<SuiteResult> run_config(const ExperimentConfig& config);

}  // namespace intertwine
