#include "bykov/io/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace bykov::io {

Provenance Provenance::of(const RunConfig& config) {
  Provenance p;
  p.config_hash = sha256_hex(config.resolved().dump());
  p.seed = config.seed;
  return p;
}

Json Provenance::to_json() const {
  return {{"tool", kToolName},
          {"tool_version", tool_version},
          {"config_hash", config_hash},
          {"seed", seed}};
}

std::string Provenance::header() const {
  return std::string("tool=") + kToolName + " version=" + tool_version +
         " config_sha256=" + config_hash + " seed=" + std::to_string(seed);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, res.ptr);
}

void OutputSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<std::filesystem::path> OutputSet::commit() const {
  std::filesystem::create_directories(dir_);
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& [name, content] : files_) {
      const auto path = dir_ / name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
      written.push_back(path);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("write to " + path.string() + " failed");
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

CsvTable::CsvTable(const Provenance& provenance, std::vector<std::string> columns)
    : width_(columns.size()) {
  out_ = "# " + provenance.header() + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ += ',';
    out_ += columns[i];
  }
  out_ += '\n';
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
  ++rows_;
  return *this;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace bykov::io
