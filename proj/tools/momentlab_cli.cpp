#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "momentlab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"momentlab: Hilbertian seminorms, moment functionals and concentration checks"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "execute a scenario config and write its report");
  run->add_option("config", config, "scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (overrides MOMENTLAB_THREADS)")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "override the config seed");

  auto* validate = app.add_subcommand("validate", "check a config against the schema without running it");
  validate->add_option("config", config, "scenario config (JSON)")->required();

  auto* list = app.add_subcommand("list", "list scenario kinds and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : momentlab::kExitConfig;
  }

  if (run->parsed()) return momentlab::run_command(config, {out_dir, threads, seed}, std::cout, std::cerr);
  if (validate->parsed()) return momentlab::validate_command(config, std::cout, std::cerr);
  if (list->parsed()) return momentlab::list_command(std::cout);
  return momentlab::kExitConfig;
}
