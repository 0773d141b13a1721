#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dephcap/cli.hpp"

namespace {

struct Flags {
  std::map<std::string, std::string> values;
  std::string config;
};

void add_flags(CLI::App* sub, Flags& f) {
  const std::vector<std::pair<std::string, std::string>> opts{
      {"gamma", "noise parameter: MIN:MAX:STEP or a single value"},
      {"dim", "input truncation dimension d"},
      {"energy", "mean photon number cap N, or inf"},
      {"out", "write the table to this file"},
      {"seed", "multistart seed"},
      {"max_iters", "optimizer iteration limit per start"},
      {"objective_tol", "optimality certificate in bits"},
      {"multistarts", "number of optimizer starts"},
  };
  for (const auto& [key, help] : opts) {
    std::string name = "--" + key;
    for (char& c : name)
      if (c == '_') c = '-';
    sub->add_option_function<std::string>(name, [&f, key](const std::string& v) { f.values[key] = v; }, help);
  }
  sub->add_option("--config", f.config, "key=value file; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on the LOCC-assisted quantum capacity of the bosonic dephasing channel"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"bounds", "lower and upper bounds over a gamma grid"},
      {"capacity", "optimized coherent information over a gamma grid"},
      {"qubit-squash", "symmetric-qubit squashing bound at d = 2"},
      {"saturation", "bounds versus dimension 2..d"},
      {"verify", "run the built-in consistency suites"},
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags[name]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Flags& f = flags[name];
  dephcap::cli::RunConfig cfg;
  cfg.command = *dephcap::cli::parse_command(name);
  if (cfg.command == dephcap::cli::Command::QubitSquash) cfg.dim = 2;
  cfg.threads = dephcap::cli::default_threads();
  try {
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) {
        std::cerr << "error: cannot read config '" << f.config << "'\n";
        return 1;
      }
      dephcap::cli::apply_entries(cfg, dephcap::cli::parse_config_text(in));
    }
    dephcap::cli::apply_entries(cfg, f.values);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (cfg.command == dephcap::cli::Command::QubitSquash && cfg.dim != 2) {
    std::cerr << "note: qubit-squash runs at d = 2\n";
    cfg.dim = 2;
  }
  return dephcap::cli::execute(cfg, std::cout, std::cerr);
}
