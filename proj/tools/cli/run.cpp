#include "run.hpp"

#include "config.hpp"
#include "experiment.hpp"

#include "cusplab/errors.hpp"
#include "cusplab/parallel.hpp"
#include "cusplab/version.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <ostream>

namespace cusplab::cli {

namespace {

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> table{
      {"divsolve", run_divsolve},       {"hardy", run_hardy},     {"infsup", run_infsup},
      {"korn", run_korn},               {"counterexample", run_counterexample},
      {"apcheck", run_apcheck},         {"scan-beta", run_scan_beta},
      {"lift-check", run_lift_check},
  };
  return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "' (check output.dir)");
  os << text;
}

std::string csv_text(const Table& t) {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    s += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return s;
}

/// command, version, results, assertions, then the resolved config.
Json assemble_report(const std::string& command, const Json& cfg, const Outcome& o, bool& non_finite) {
  Json rep = Json::object();
  rep["command"] = command;
  rep["version"] = kVersionString;
  for (auto it = o.report.begin(); it != o.report.end(); ++it) rep[it.key()] = it.value();
  bool all = true;
  for (const auto& a : o.assertions) {
    rep["assert_" + a.name] = a.passed;
    all = all && a.passed;
  }
  rep["all_passed"] = all;
  for (const auto& [key, v] : flatten(cfg, "config")) {
    if (v.is_number())
      rep[key] = v.get<double>();
    else
      rep[key] = v;
  }
  for (auto it = rep.begin(); it != rep.end(); ++it)
    if (it.value().is_number_float() && !std::isfinite(it.value().get<double>())) non_finite = true;
  return rep;
}

int execute(const std::string& command, const Json& cfg, std::ostream& out, std::ostream& err) {
  const auto threads = cfg.at("threads").get<long long>();
  if (threads < 0) throw ConfigError("config key 'threads': must be >= 0");
  if (threads > 0) set_max_threads(static_cast<unsigned>(threads));

  const Outcome o = registry().at(command)(cfg);
  bool non_finite = o.non_finite;
  const Json rep = assemble_report(command, cfg, o, non_finite);

  const std::filesystem::path dir = cfg.at("output").at("dir").get<std::string>();
  const std::string stem = cfg.at("output").at("prefix").get<std::string>() + command;
  std::filesystem::create_directories(dir);
  write_text(dir / (stem + ".json"), rep.dump(2) + "\n");
  for (const auto& t : o.tables)
    write_text(dir / (stem + (t.suffix.empty() ? "" : "_" + t.suffix) + ".csv"), csv_text(t));

  bool all = true;
  for (const auto& a : o.assertions) {
    out << (a.passed ? "PASS " : "FAIL ") << command << "." << a.name << ": " << a.detail << "\n";
    all = all && a.passed;
  }
  out << "report: " << (dir / (stem + ".json")).string() << "\n";
  if (non_finite) {
    err << "error: non-finite value in the " << command << " report\n";
    return kNumericalFailure;
  }
  return all ? kOk : kAssertionFailed;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"divsolve", "hardy",    "infsup",    "korn",
                                              "counterexample", "apcheck", "scan-beta", "lift-check"};
  return names;
}

int run(const std::string& command, const std::string& config_path,
        const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  if (!registry().contains(command)) {
    err << "error: unknown command '" << command << "'\n";
    return kConfigError;
  }
  try {
    const Json cfg = resolve_config(config_path, overrides);
    return execute(command, cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ShapeError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace cusplab::cli
