#include "intertwine/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "intertwine/errors.hpp"

namespace intertwine {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

SuiteResult tally_suite(std::string suite, std::vector<Verdict> verdicts,
                        const std::vector<std::string>& screened) {
  SuiteResult r;
  r.suite = std::move(suite);
  bool all_pass = true;
  for (const auto& v : verdicts) {
    const double z = v.excess_z();
    r.above2 += z > 2.0;
    r.above3 += z > 3.0;
    r.above4 += z > 4.0;
    all_pass = all_pass && v.pass;
    if (std::find(screened.begin(), screened.end(), v.identity) != screened.end()) {
      ++r.screened;
      r.screened_above2 += z > 2.0;
    }
  }
  r.verdicts = std::move(verdicts);
  r.pass = all_pass && !r.verdicts.empty() && 20 * r.screened_above2 <= r.screened;
  return r;
}

void write_csv(std::ostream& out, const std::vector<SuiteResult>& results) {
  out << "suite,identity,params,lhs,rhs,se,z,pass\n";
  for (const auto& r : results) {
    for (const auto& v : r.verdicts) {
      out << csv_field(r.suite) << ',' << csv_field(v.identity) << ',' << csv_field(v.params)
          << ',' << number(v.lhs) << ',' << number(v.rhs) << ',' << number(v.std_error) << ','
          << number(v.z_score) << ',' << (v.pass ? "true" : "false") << '\n';
    }
  }
}

nlohmann::json summary_json(const std::vector<SuiteResult>& results, const nlohmann::json& config) {
  nlohmann::json suites = nlohmann::json::array();
  bool all = !results.empty();
  for (const auto& r : results) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : r.verdicts) {
      verdicts.push_back({{"identity", v.identity},
                          {"params", v.params},
                          {"lhs", json_number(v.lhs)},
                          {"rhs", json_number(v.rhs)},
                          {"std_error", json_number(v.std_error)},
                          {"systematic", json_number(v.systematic)},
                          {"z", json_number(v.z_score)},
                          {"pass", v.pass},
                          {"seed", v.seed},
                          {"details", v.details}});
    }
    suites.push_back({{"suite", r.suite},
                      {"pass", r.pass},
                      {"verdicts", r.verdicts.size()},
                      {"above_2", r.above2},
                      {"above_3", r.above3},
                      {"above_4", r.above4},
                      {"screened", r.screened},
                      {"screened_above_2", r.screened_above2},
                      {"results", std::move(verdicts)}});
    all = all && r.pass;
  }
  return {{"pass", all}, {"config", config}, {"suites", std::move(suites)}};
}

void write_report(const std::filesystem::path& dir, const std::vector<SuiteResult>& results,
                  const nlohmann::json& config) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "verdicts.csv", std::ios::binary);
  std::ofstream json(dir / "summary.json", std::ios::binary);
  if (!csv || !json) throw InvalidInput("cannot write report into " + dir.string());
  write_csv(csv, results);
  json << summary_json(results, config).dump(2) << '\n';
}

}  // namespace intertwine
