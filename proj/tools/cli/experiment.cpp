#include "experiment.hpp"

#include "cusplab/report.hpp"

#include <cmath>

namespace cusplab::cli {

void Outcome::value(const std::string& key, double v) {
  if (!std::isfinite(v)) non_finite = true;
  report[key] = v;
}

void Outcome::check(const std::string& name, bool passed, const std::string& detail) {
  assertions.push_back({name, passed, detail});
}

std::string num(double v) { return format_double(v); }
std::string num(long long v) { return std::to_string(v); }

}  // namespace cusplab::cli
