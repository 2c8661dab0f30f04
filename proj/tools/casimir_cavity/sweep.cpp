#include "sweep.hpp"

#include <cmath>
#include <sstream>

#include "casimir/errors.hpp"

namespace cavity_cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw casimir::DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw casimir::DomainError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw casimir::DomainError("grid must be start:stop:step");
    const double a = to_double(p[0]);
    const double b = to_double(p[1]);
    const double h = to_double(p[2]);
    if (!(h > 0.0) || b < a) throw casimir::DomainError("grid needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + static_cast<double>(i) * h;
    return g;
  }
  std::vector<double> g;
  for (const auto& s : split(spec, ',')) g.push_back(to_double(s));
  if (g.empty()) throw casimir::DomainError("empty grid");
  return g;
}

std::vector<int> parse_int_range(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_grid(spec)) {
    if (v != std::round(v)) throw casimir::DomainError("expected integers in '" + spec + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace cavity_cli
