#include "cusplab/report.hpp"

#include <json.hpp>

namespace cusplab {

std::string fields_to_json(const ReportFields& fields) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : fields) j[k] = v;
  return j.dump(2) + "\n";
}

std::string format_double(double v) {
  // nlohmann already prints the shortest round-trip form and keeps a
  // decimal point on integral values.
  return nlohmann::json(v).dump();
}

}  // namespace cusplab
