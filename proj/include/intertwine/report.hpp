#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "intertwine/verification.hpp"

namespace intertwine {

struct SuiteResult {
  std::string suite;
  std::vector<Verdict> verdicts;
  // Counts of systematic-adjusted |z| above 2, 3 and 4.
  int above2 = 0;
  int above3 = 0;
  int above4 = 0;
  // Verdicts subject to the 5% rule and how many of them exceed 2.
  int screened = 0;
  int screened_above2 = 0;
  bool pass = false;
};

// Every verdict must pass. Verdicts whose identity is listed in screened are
// additionally limited to at most 5% with |z| above 2.
SuiteResult tally_suite(std::string suite, std::vector<Verdict> verdicts,
                        const std::vector<std::string>& screened = {});

// Columns: suite,identity,params,lhs,rhs,se,z,pass.
void write_csv(std::ostream& out, const std::vector<SuiteResult>& results);

nlohmann::json summary_json(const std::vector<SuiteResult>& results, const nlohmann::json& config);

// Writes verdicts.csv and summary.json into dir.
void write_report(const std::filesystem::path& dir, const std::vector<SuiteResult>& results,
                  const nlohmann::json& config);

}  // namespace intertwine
