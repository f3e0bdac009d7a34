#include <iostream>

#include <CLI11.hpp>

#include "beltrami/experiments.hpp"

int main(int argc, char** argv) {
  using namespace beltrami;
  CLI::App app{"Desk-scale experiments for localized Beltrami data and vortex reconnection"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  bool print_config = false;
  app.add_option("command", command, "theorem1 | theorem2 | oracle | lemma-sweep | first-zero")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized parts");
  app.add_flag("--print-config", print_config, "print the effective config and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  ExperimentConfig cfg;
  try {
    if (config_path.empty()) {
      if (!print_config) throw ConfigError("--config is required");
      cfg = default_config(command);
    } else {
      cfg = load_config(command, KeyValueFile::load(config_path));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.seed = seed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  }
  if (print_config) {
    cfg.print(std::cout);
    return 0;
  }

  try {
    const Report rep = run_command(cfg, [](const std::string& s) { std::cerr << s << '\n'; });
    for (const auto& line : rep.summary) std::cout << line << '\n';
    std::cout << command << ": " << to_string(rep.verdict) << '\n';
    return exit_code(rep.verdict);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    std::cout << command << ": FAIL\n";
    return 1;
  }
}
