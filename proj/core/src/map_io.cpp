#include "formbound/map_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"

namespace formbound {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_constant(const std::string& key, const std::string& value) {
  const Polynomial c = parse_polynomial(value, 1);
  if (c.degree() > 0) throw ParseError("map: " + key + " must be a number");
  const double v = c.coefficient({0}).get_d();
  if (!(v > 0)) throw ParseError("map: " + key + " must be positive");
  return v;
}

// Index i of "phi<i>" / "inv<i>", or 0 if the key has another shape.
int component_index(const std::string& key, const std::string& prefix) {
  if (key.rfind(prefix, 0) != 0 || key.size() == prefix.size()) return 0;
  for (std::size_t i = prefix.size(); i < key.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(key[i]))) return 0;
  }
  return std::stoi(key.substr(prefix.size()));
}

}  // namespace

MapSpec parse_map(std::string_view text) {
  std::optional<int> n;
  std::optional<double> C, inverse_C;
  std::map<int, std::string> phi, inv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("map: line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "n") {
      const double v = parse_constant(key, value);
      if (v != static_cast<int>(v)) throw ParseError("map: n must be an integer");
      n = static_cast<int>(v);
    } else if (key == "C") {
      C = parse_constant(key, value);
    } else if (key == "inverse_C") {
      inverse_C = parse_constant(key, value);
    } else if (int i = component_index(key, "phi"); i > 0) {
      phi[i] = value;
    } else if (int j = component_index(key, "inv"); j > 0) {
      inv[j] = value;
    } else {
      throw ParseError("map: line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!n) throw ParseError("map: missing n");
  if (!C) throw ParseError("map: missing C");
  auto components = [&](const std::map<int, std::string>& src, const char* name) {
    std::vector<Polynomial> out;
    for (int i = 1; i <= *n; ++i) {
      const auto it = src.find(i);
      if (it == src.end()) throw ParseError(std::string("map: missing ") + name + std::to_string(i));
      out.push_back(parse_polynomial(it->second, *n));
    }
    if (static_cast<int>(src.size()) != *n) throw ParseError(std::string("map: too many ") + name + " components");
    return out;
  };
  MapSpec spec{LipschitzMap::polynomial(components(phi, "phi"), *C), std::nullopt};
  if (!inv.empty() || inverse_C) {
    if (!inverse_C) throw ParseError("map: inverse components given without inverse_C");
    spec.inverse = LipschitzMap::polynomial(components(inv, "inv"), *inverse_C);
    spec.map = spec.map.with_inverse(*spec.inverse);
  }
  return spec;
}

MapSpec read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("map: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_map(text.str());
}

}  // namespace formbound
