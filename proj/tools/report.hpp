#pragma once

#include <chrono>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "formbound/domain.hpp"

namespace formbound::cli {

using nlohmann::json;

struct Check {
  std::string name;
  bool pass = false;
  double value = 0;
  double limit = 0;
  std::string detail;
};

struct Report {
  std::string command;
  json parameters = json::object();
  std::vector<Check> checks;
  json data = json::object();

  bool pass() const;
  void add(Check c) { checks.push_back(std::move(c)); }
  const Check* first_failure() const;
};

enum class Format { pretty, csv, json };

Format parse_format(const std::string& name);

/// Writes the report's checks in the chosen format.
void write_report(const Report& r, Format format, std::ostream& out);

/// Run manifest: command, parameters, seed, versions, wall time and per-check results.
json manifest(const Report& r, const QuadratureConfig& cfg, double wall_seconds);

/// %.10g, the precision used for every CSV number.
std::string csv_number(double v);

}  // namespace formbound::cli
