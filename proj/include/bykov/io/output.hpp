#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bykov/io/config.hpp"

namespace bykov::io {

inline constexpr const char* kToolName = "bykov";
inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
  std::string tool_version = kToolVersion;
  /// SHA-256 of the resolved config, dumped compactly.
  std::string config_hash;
  std::uint64_t seed = 0;

  static Provenance of(const RunConfig& config);
  Json to_json() const;
  /// One-line "key=value" summary for CSV and SVG headers.
  std::string header() const;
};

/// Shortest decimal that round-trips to the same double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double value);

/// Files of one command, held in memory until commit().  Nothing is written
/// if the command fails before that, and a failing commit removes what it
/// already wrote.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content);
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// Writes every file and returns their paths.
  std::vector<std::filesystem::path> commit() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// CSV with '#' provenance lines, a header row and one row per record.
class CsvTable {
 public:
  CsvTable(const Provenance& provenance, std::vector<std::string> columns);

  CsvTable& row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_; }
  std::string str() const { return out_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string out_;
};

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& doc);

}  // namespace bykov::io
