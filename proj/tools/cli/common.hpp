#pragma once

#include "experiment.hpp"

#include "cusplab/geometry.hpp"

namespace cusplab::cli {

inline CuspDomain domain_of(const Json& cfg) {
  const Json& d = cfg.at("domain");
  return {d.at("gamma").get<double>(), d.at("k").get<int>(), d.at("m").get<int>()};
}

}  // namespace cusplab::cli
