#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cusplab {

/// Ordered (name, value) pairs; every report flattens to this.
using ReportFields = std::vector<std::pair<std::string, double>>;

/// Flat JSON object, keys in insertion order, every value written as a float.
std::string fields_to_json(const ReportFields& fields);

/// Shortest round-trip decimal form, always with a '.' or exponent.
std::string format_double(double v);

}  // namespace cusplab
