#include "cli/run.hpp"

#include "cusplab/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Weighted divergence, Stokes and Korn experiments on power-cusp domains"};
  app.set_version_flag("--version", std::string(cusplab::kVersionString));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  int threads = -1;
  std::string out_dir;

  const char* help_text[][2] = {
      {"divsolve", "solve div u = f on the cusp and check the weighted estimate"},
      {"hardy", "Hardy inequality in x for interior bumps"},
      {"infsup", "discrete inf-sup constants over a mesh refinement study"},
      {"korn", "weighted Korn constants over a mesh refinement study"},
      {"counterexample", "integrals of 1/x^2 - c on the gamma = 2 profile"},
      {"apcheck", "A_p classification of power weights on a grid"},
      {"scan-beta", "sweep beta across the admissible interval"},
      {"lift-check", "lifted-measure identity for several integrands"},
  };
  for (const auto& [name, help] : help_text) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON config file; missing keys take defaults");
    sub->add_option("-s,--set", overrides, "override one leaf, e.g. --set divsolve.beta=-0.5")
        ->type_name("KEY=VALUE");
    sub->add_option("-t,--threads", threads, "worker thread cap (0 = hardware)")->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--out", out_dir, "output directory (config output.dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cusplab::cli::kConfigError;
  }

  if (threads >= 0) overrides.push_back("threads=" + std::to_string(threads));
  if (!out_dir.empty()) overrides.push_back("output.dir=\"" + out_dir + "\"");
  const std::string command = app.get_subcommands().front()->get_name();
  return cusplab::cli::run(command, config_path, overrides, std::cout, std::cerr);
}
