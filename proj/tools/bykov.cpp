// Batch front end: bykov <command> --config run.json [--out DIR] [--seed N]
// [--threads N] [--verbose].  Exit 0 on success, 1 on rejected input, 2 when
// the computation fails.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "bykov/io/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitFailed = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace bykov::io;

  CLI::App app{"Return-map dynamics near a Bykov heteroclinic network"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--threads", threads, "scan worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose", verbose, "progress on stderr");

  int period = 0;
  for (Command c : all_commands()) {
    auto* sub = app.add_subcommand(command_name(c));
    if (c == Command::Superstable) {
      sub->add_option("--period", period, "orbit period (1 or 2)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const Command command = *parse_command(app.get_subcommands().front()->get_name());
  RunConfig config;
  std::filesystem::path dir;
  try {
    config = load_config(config_path);
    if (*seed_opt) apply_seed(config, seed);
    if (period != 0) {
      if (period != 1 && period != 2) throw bykov::ConfigError("--period must be 1 or 2");
      ensure_section(Command::Superstable, config);
      config.superstable->options.period = period;
    }
    dir = config.output_dir;
    if (const char* env = std::getenv("BYKOV_OUT_DIR"); env && *env) dir = env;
    if (*out_opt) dir = out_dir;
    ensure_section(command, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  RunOptions options;
  options.threads = threads;
  if (verbose) options.log = &std::cerr;
  try {
    CommandResult result = run_command(command, config, dir, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& path : result.outputs.commit()) {
      if (verbose) std::cerr << "wrote " << path.string() << '\n';
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << command_name(command) << " failed: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitOk;
}
