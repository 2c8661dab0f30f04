#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace cavity_cli {

/// File-system failures; mapped to exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed numeric formatting: 17 significant digits, '.' decimal, no locale.
std::string number(double v);

struct CsvTable {
  std::vector<std::string> comments;  ///< written as leading "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(const std::string& name) const;
  double number_at(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Writes `text` to path, or to stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

std::string sha256_hex(const std::string& data);

/// Run manifest: command, resolved parameters, version, timing, output digests.
/// The parameters are stored under the command name, so the file can be fed
/// back through --config to repeat the run.
struct Manifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  double wall_clock_seconds = 0.0;
  std::map<std::string, std::string> digests;  ///< output path -> sha256

  nlohmann::json to_json() const;
};

/// Writes the manifest next to `output` (output + ".manifest.json"); skipped for stdout.
void write_manifest(const Manifest& m, const std::string& output);

}  // namespace cavity_cli
