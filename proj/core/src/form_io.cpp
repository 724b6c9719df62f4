#include "formbound/form_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "formbound/errors.hpp"

namespace formbound {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawTerm {
  Rational coefficient = 1;
  std::vector<std::pair<int, int>> factors;  // (zero-based variable, power)
};

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_space();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = (peek() == '-') ? -1 : 1;
        ++pos_;
        skip_space();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      RawTerm term = parse_term();
      if (sign < 0) term.coefficient = -term.coefficient;
      terms.push_back(std::move(term));
      first = false;
      skip_space();
    }
    return terms;
  }

  int max_variable() const { return max_variable_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial: " + msg + " at column " + std::to_string(pos_ + 1) + " in '" +
                     std::string(text_) + "'");
  }

  std::string digits() {
    std::string out;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) out += text_[pos_++];
    return out;
  }

  Rational parse_number() {
    std::string whole = digits();
    Rational value(whole.empty() ? "0" : whole);
    if (!at_end() && peek() == '.') {
      ++pos_;
      std::string frac = digits();
      if (whole.empty() && frac.empty()) fail("malformed number");
      if (!frac.empty()) {
        mpz_class denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), 10, frac.size());
        value += Rational(mpz_class(frac), denom);
      }
    } else if (whole.empty()) {
      fail("expected a number");
    }
    skip_space();
    if (!at_end() && peek() == '/') {
      ++pos_;
      skip_space();
      std::string d = digits();
      if (d.empty()) fail("expected a denominator");
      mpz_class denom(d);
      if (denom == 0) fail("zero denominator");
      value /= Rational(denom);
    }
    value.canonicalize();
    return value;
  }

  bool at_factor() const {
    if (at_end()) return false;
    const char c = peek();
    return c == 'x' || c == '*' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }

  RawTerm parse_term() {
    RawTerm term;
    bool any = false;
    while (true) {
      skip_space();
      if (!at_factor()) break;
      if (peek() == '*') {
        if (!any) fail("dangling '*'");
        ++pos_;
        skip_space();
        if (!at_factor() || peek() == '*') fail("expected a factor after '*'");
        continue;
      }
      if (peek() == 'x') {
        ++pos_;
        std::string idx = digits();
        if (idx.empty()) fail("expected a variable index after 'x'");
        const int var = std::stoi(idx);
        if (var < 1) fail("variables are numbered from x1");
        int power = 1;
        skip_space();
        if (!at_end() && peek() == '^') {
          ++pos_;
          skip_space();
          std::string e = digits();
          if (e.empty()) fail("expected an exponent after '^'");
          power = std::stoi(e);
        }
        max_variable_ = std::max(max_variable_, var);
        term.factors.emplace_back(var - 1, power);
      } else {
        term.coefficient *= parse_number();
      }
      any = true;
    }
    if (!any) fail("expected a term");
    return term;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int max_variable_ = 0;
};

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::optional<int> n) {
  PolynomialParser parser(text);
  const auto terms = parser.parse();
  const int vars = n.value_or(parser.max_variable());
  if (parser.max_variable() > vars) {
    throw ParseError("polynomial: variable x" + std::to_string(parser.max_variable()) +
                     " exceeds dimension " + std::to_string(vars));
  }
  Polynomial p(vars);
  for (const auto& t : terms) {
    Exponent e(vars, 0);
    for (auto [var, power] : t.factors) e[var] += power;
    p.add_term(e, t.coefficient);
  }
  return p;
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Exponent, Rational>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = total_degree(a.first);
    const int db = total_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool negative = c < 0;
    const Rational magnitude = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    if (magnitude != 1 || total_degree(e) == 0) factors.push_back(magnitude.get_str());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::string f = "x" + std::to_string(i + 1);
      if (e[i] > 1) f += "^" + std::to_string(e[i]);
      factors.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i > 0) out << " * ";
      out << factors[i];
    }
  }
  return out.str();
}

KForm parse_form(std::string_view text) {
  std::optional<int> n;
  std::optional<int> k;
  struct Line {
    std::vector<int> indices;  // one-based
    std::string polynomial;
    int number;
  };
  std::vector<Line> lines;
  int max_index = 0;
  int line_number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) -> ParseError {
      return ParseError("form line " + std::to_string(line_number) + ": " + msg);
    };
    const auto colon = line.find(':');
    const auto eq = line.find('=');
    if (colon == std::string_view::npos && eq != std::string_view::npos) {
      const auto key = trim(line.substr(0, eq));
      const auto value = std::string(trim(line.substr(eq + 1)));
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw fail("header value '" + value + "' is not an integer");
      }
      if (key == "n") {
        n = v;
      } else if (key == "k") {
        k = v;
      } else {
        throw fail("unknown header '" + std::string(key) + "'");
      }
      continue;
    }
    if (colon == std::string_view::npos) throw fail("expected 'j1,...,jk : polynomial'");
    Line entry;
    entry.number = line_number;
    const auto head = trim(line.substr(0, colon));
    entry.polynomial = std::string(trim(line.substr(colon + 1)));
    if (!head.empty()) {
      std::string head_str(head);
      std::istringstream items(head_str);
      std::string item;
      while (std::getline(items, item, ',')) {
        const auto t = std::string(trim(item));
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) {
              return std::isdigit(c);
            })) {
          throw fail("bad component index '" + t + "'");
        }
        const int j = std::stoi(t);
        if (j < 1) throw fail("component indices are one-based");
        entry.indices.push_back(j);
        max_index = std::max(max_index, j);
      }
    }
    lines.push_back(std::move(entry));
  }

  int max_variable = 0;
  for (const auto& l : lines) {
    max_variable = std::max(max_variable, parse_polynomial(l.polynomial).variables());
  }
  const int dim = n.value_or(std::max(max_index, max_variable));
  if (!k) {
    if (lines.empty()) throw ParseError("form: a form without components needs a 'k =' header");
    k = static_cast<int>(lines.front().indices.size());
  }
  if (dim < 1 && !(dim == 0 && *k == 0)) throw ParseError("form: cannot determine dimension");
  if (max_index > dim || max_variable > dim) {
    throw ParseError("form: index or variable exceeds dimension " + std::to_string(dim));
  }
  KForm w(dim, *k);
  for (const auto& l : lines) {
    if (static_cast<int>(l.indices.size()) != *k) {
      throw ParseError("form line " + std::to_string(l.number) + ": component has degree " +
                       std::to_string(l.indices.size()) + ", expected " + std::to_string(*k));
    }
    std::vector<int> zero_based;
    for (int j : l.indices) zero_based.push_back(j - 1);
    try {
      w.add(MultiIndex(dim, zero_based), parse_polynomial(l.polynomial, dim));
    } catch (const DimensionError& e) {
      throw ParseError("form line " + std::to_string(l.number) + ": " + e.what());
    }
  }
  return w;
}

KForm read_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open form file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_form(buffer.str());
}

std::string format_form(const KForm& w) {
  std::ostringstream out;
  out << "n = " << w.dimension() << "\n";
  out << "k = " << w.degree() << "\n";
  for (const auto& [J, f] : w.coefficients()) {
    const auto idx = J.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0) out << ',';
      out << idx[i] + 1;
    }
    out << (idx.empty() ? ": " : " : ") << format_polynomial(f) << "\n";
  }
  return out.str();
}

}  // namespace formbound
