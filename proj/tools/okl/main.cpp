#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "harness/commands.hpp"
#include "harness/config.hpp"
#include "okl/errors.hpp"

namespace {

constexpr int kUsageExit = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"okl: Orlicz-Kantorovich lattice experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "key = value experiment file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "root seed (overrides seed)");
  app.add_flag("--quiet", quiet, "suppress the human-readable report");

  const std::pair<const char*, const char*> commands[] = {
      {"conjugate", "tabulate M, p, N, q and the Young gap"},
      {"norms", "Luxemburg and Orlicz norms of every section"},
      {"verify", "admissibility conditions of the operator"},
      {"converge", "weighted averages, dominant sup and o-limit detection"},
      {"suite", "run every acceptance criterion"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  okl::harness::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = okl::harness::load_config(config_path);
  } catch (const okl::ParseError& e) {
    std::cerr << config_path << ":" << e.line() << ": " << e.what() << '\n';
    return kUsageExit;
  } catch (const okl::UsageError& e) {
    std::cerr << "okl: " << e.what() << '\n';
    return kUsageExit;
  }
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  const std::string command = app.get_subcommands().front()->get_name();
  std::ostringstream sink;
  std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cout;
  try {
    return okl::harness::run_command(command, cfg, log);
  } catch (const okl::ParseError& e) {
    std::cerr << "okl: input file " << e.what() << '\n';
    return kUsageExit;
  } catch (const okl::UsageError& e) {
    std::cerr << "okl: " << e.what() << '\n';
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "okl: " << e.what() << '\n';
    return 3;
  }
}
