#include "io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "casimir/errors.hpp"

#ifndef CASIMIR_TOOL_VERSION
#define CASIMIR_TOOL_VERSION "unknown"
#endif

namespace cavity_cli {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string CsvTable::render() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

double CsvTable::number_at(std::size_t row, const std::string& name) const {
  const auto c = column(name);
  if (!c) throw casimir::DomainError("input has no column '" + name + "'");
  const std::string& cell = rows.at(row).at(*c);
  if (cell == "nan") return NAN;
  try {
    return std::stod(cell);
  } catch (const std::exception&) {
    throw casimir::DomainError("bad number '" + cell + "' in column " + name);
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
    } else {
      cells.resize(t.header.size());
      t.rows.push_back(cells);
    }
  }
  if (t.header.empty()) throw IoError(path + " has no header line");
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j[command] = parameters;
  j["tool_version"] = CASIMIR_TOOL_VERSION;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["units"] = "lengths in R, energies in hbar*c/R, forces in hbar*c/R^2";
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, digest] : digests) outs.push_back({{"path", path}, {"sha256", digest}});
  j["outputs"] = outs;
  return j;
}

void write_manifest(const Manifest& m, const std::string& output) {
  if (output == "-") return;
  write_text(output + ".manifest.json", m.to_json().dump(2) + "\n");
}

}  // namespace cavity_cli
