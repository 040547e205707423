#pragma once

#include "config.hpp"

#include <string>
#include <vector>

namespace cusplab::cli {

struct Table {
  std::string suffix;  ///< empty for the main table
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Assertion {
  std::string name;
  bool passed;
  std::string detail;
};

/// What one command produces before it is written to disk.
struct Outcome {
  Json report = Json::object();  ///< flat; numbers stored as doubles
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  bool non_finite = false;

  void value(const std::string& key, double v);
  void text(const std::string& key, const std::string& v) { report[key] = v; }
  void check(const std::string& name, bool passed, const std::string& detail);
};

std::string num(double v);
std::string num(long long v);

using Command = Outcome (*)(const Json& cfg);

Outcome run_divsolve(const Json& cfg);
Outcome run_hardy(const Json& cfg);
Outcome run_infsup(const Json& cfg);
Outcome run_korn(const Json& cfg);
Outcome run_counterexample(const Json& cfg);
Outcome run_apcheck(const Json& cfg);
Outcome run_scan_beta(const Json& cfg);
Outcome run_lift_check(const Json& cfg);

}  // namespace cusplab::cli
