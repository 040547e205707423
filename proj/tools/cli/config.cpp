#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cusplab::cli {

Json default_config() {
  return Json::parse(R"({
  "domain": {"gamma": 2.0, "k": 1, "m": 0},
  "quadrature": {"N": 48, "grading": 3.0},
  "seed": 1,
  "threads": 0,
  "tolerances": {
    "residual": 1e-2,
    "quadrature": 1e-5,
    "exact": 1e-10,
    "ratio_stability": 0.2,
    "hardy_slack": 0.05,
    "bounded_ratio": 0.9,
    "korn_stability": 0.1,
    "lifted": 1e-6,
    "weak_identity": 1e-3,
    "counterexample": 1e-2,
    "integral_inv_x2": 1e-3
  },
  "divsolve": {
    "beta": -1.0, "eta": 0.0, "p": 2.0, "density": "x",
    "probes": 20, "fd_step": 1e-3, "ray_order": 24, "levels": 2, "identity_draws": 1000
  },
  "hardy": {"kappa": [0.0, 0.5, -0.5], "p": [1.5, 2.0, 3.0], "bumps": 10, "N": 128, "grading": 2.0},
  "infsup": {"levels": 3, "eps0": 0.1, "base_cross": 8, "weight": "theorem", "weight_exponent": 0.0,
             "expect": "auto", "max_iter": 600},
  "korn": {"levels": 3, "eps0": 0.025, "base_cross": 4, "beta": 0.0, "variant": "theorem",
           "ball_center": [0.75, 0.0], "ball_radius": 0.125, "expect": "auto", "max_iter": 600},
  "counterexample": {"N": 64, "grading": 3.0, "bumps": 5, "truncations": [1e-1, 1e-2, 1e-3], "min_growth": 5.0},
  "apcheck": {"mu_min": -6.0, "mu_max": 12.0, "mu_steps": 181, "p": [1.25, 1.5, 2.0, 3.0, 4.0],
              "n": [2, 3, 4], "m": [0, 1]},
  "scan_beta": {"p": 2.0, "points": 7, "delta": 0.1, "N": 24, "ray_order": 16},
  "lift_check": {"n_prime": [1, 2], "s": [0.5, 1.0], "p": 2.0, "N": 64, "grading": 3.0},
  "output": {"dir": "cusplab-out", "prefix": ""}
})");
}

namespace {

bool integral(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return true;
  return v.is_number_float() && std::floor(v.get<double>()) == v.get<double>();
}

void check_leaf(const Json& def, const Json& val, const std::string& key) {
  auto fail = [&](const std::string& want) {
    throw ConfigError("config key '" + key + "': expected " + want + ", got " + val.dump());
  };
  if (def.is_boolean()) {
    if (!val.is_boolean()) fail("a boolean");
  } else if (def.is_number_integer() || def.is_number_unsigned()) {
    if (!val.is_number() || !integral(val)) fail("an integer");
  } else if (def.is_number()) {
    if (!val.is_number()) fail("a number");
  } else if (def.is_string()) {
    if (!val.is_string()) fail("a string");
  } else if (def.is_array()) {
    if (!val.is_array() || val.empty()) fail("a non-empty array");
    const Json& proto = def.front();
    for (const Json& e : val) check_leaf(proto, e, key + "[]");
  }
}

}  // namespace

void merge_checked(Json& base, const Json& user, const std::string& prefix) {
  if (!user.is_object()) throw ConfigError("config '" + (prefix.empty() ? "<root>" : prefix) + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    Json& slot = base[it.key()];
    if (slot.is_object()) {
      merge_checked(slot, it.value(), key);
    } else {
      check_leaf(slot, it.value(), key);
      // Keep the default's numeric kind so later overrides see the same type.
      if ((slot.is_number_integer() || slot.is_number_unsigned()) && it.value().is_number_float())
        slot = static_cast<long long>(it.value().get<double>());
      else if (slot.is_number_float() && it.value().is_number())
        slot = it.value().get<double>();
      else
        slot = it.value();
    }
  }
}

void apply_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  // Build {"a": {"b": value}} and merge it with full checking.
  Json patch = value;
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    parts.push_back(part);
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    Json wrap = Json::object();
    wrap[*it] = std::move(patch);
    patch = std::move(wrap);
  }
  merge_checked(cfg, patch);
}

Json resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  Json cfg = default_config();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    Json user;
    try {
      user = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    merge_checked(cfg, user);
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  return cfg;
}

std::vector<std::pair<std::string, Json>> flatten(const Json& cfg, const std::string& prefix) {
  std::vector<std::pair<std::string, Json>> out;
  if (cfg.is_object()) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      auto sub = flatten(it.value(), prefix + "_" + it.key());
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else if (cfg.is_array()) {
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      auto sub = flatten(cfg[i], prefix + "_" + std::to_string(i));
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else {
    out.emplace_back(prefix, cfg);
  }
  return out;
}

}  // namespace cusplab::cli
