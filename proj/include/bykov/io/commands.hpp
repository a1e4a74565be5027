#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bykov/io/config.hpp"
#include "bykov/io/output.hpp"

namespace bykov::io {

enum class Command {
  Iterate,
  Lyapunov,
  Scan,
  Audit,
  Misiurewicz,
  Superstable,
  Rotation,
  SingularLimit
};

const char* command_name(Command command);
std::optional<Command> parse_command(std::string_view name);
std::vector<Command> all_commands();

struct RunOptions {
  /// Scan workers; 0 = hardware concurrency.  Never affects the outputs.
  unsigned threads = 1;
  /// Progress lines go here when set.
  std::ostream* log = nullptr;
};

struct CommandResult {
  OutputSet outputs;
  std::vector<std::string> warnings;
};

/// Adds the command's section with all defaults when the config has none.
/// Throws ConfigError when the section has required keys (scan grids).
void ensure_section(Command command, RunConfig& config);

/// Runs one command and returns its files without writing them.
CommandResult run_command(Command command, const RunConfig& config,
                          const std::filesystem::path& output_dir,
                          const RunOptions& options = {});

/// JSON bodies shared with tests.
Json audit_json(const HypothesisAudit& audit, const AuditOptions& options,
                const RunConfig& config, const Provenance& provenance);
Json scan_json(const ScanResult& scan, const Budget& budget, const RunConfig& config,
               const Provenance& provenance);
std::string scan_csv(const ScanResult& scan, const Provenance& provenance);

}  // namespace bykov::io
