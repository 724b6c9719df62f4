#include "report.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <gmp.h>
#include <ostream>

#include "formbound/errors.hpp"

#ifndef FORMBOUND_VERSION
#define FORMBOUND_VERSION "unknown"
#endif

namespace formbound::cli {

bool Report::pass() const { return first_failure() == nullptr; }

const Check* Report::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

Format parse_format(const std::string& name) {
  if (name == "pretty") return Format::pretty;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ParameterError("unknown format '" + name + "'");
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

json check_json(const Check& c) {
  return {{"name", c.name},   {"pass", c.pass},           {"value", c.value},
          {"limit", c.limit}, {"margin", c.limit - c.value}, {"detail", c.detail}};
}

}  // namespace

void write_report(const Report& r, Format format, std::ostream& out) {
  switch (format) {
    case Format::json: {
      json j = {{"command", r.command}, {"parameters", r.parameters}, {"pass", r.pass()}};
      j["checks"] = json::array();
      for (const auto& c : r.checks) j["checks"].push_back(check_json(c));
      j["data"] = r.data;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "check,pass,value,limit,margin\n";
      for (const auto& c : r.checks) {
        out << c.name << ',' << (c.pass ? "true" : "false") << ',' << csv_number(c.value) << ','
            << csv_number(c.limit) << ',' << csv_number(c.limit - c.value) << '\n';
      }
      break;
    case Format::pretty:
      for (const auto& c : r.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      }
      out << (r.pass() ? "all checks passed" : "check failed") << '\n';
      break;
  }
}

json manifest(const Report& r, const QuadratureConfig& cfg, double wall_seconds) {
  json m = {{"command", r.command},
            {"parameters", r.parameters},
            {"seed", cfg.seed},
            {"samples", cfg.sample_count},
            {"t_steps", cfg.t_subdivisions},
            {"versions",
             {{"formbound", FORMBOUND_VERSION},
              {"gmp", gmp_version},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}}},
            {"wall_time_seconds", wall_seconds},
            {"pass", r.pass()}};
  m["checks"] = json::array();
  for (const auto& c : r.checks) m["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
  return m;
}

}  // namespace formbound::cli
