#pragma once

// Line-oriented run configuration and the map-expression grammar.
//
//   # comment
//   algebra = strict-upper-4x4
//   map     = x^3 + a
//   const.a = [0, 1, 2, 0, 1, 0]
//   phi1    = constant(4)
//   phi2    = constant(56)
//   method  = forward
//   tol     = 1e-10
//   n_max   = 40
//   guard   = 1e100
//   probes  = 100
//   radius  = 1
//   seed    = 42
//   csv     = out.csv          (optional outputs: csv, report, trace_csv)
//
// Map grammar:
//   expr := term ('+' term)*
//   term := [real '*'] ('x' | 'x^2' | 'x^3' | 'x^4' | ident)
// x^4 is accepted only on real-line.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hyers/algebra.hpp"
#include "hyers/control.hpp"
#include "hyers/errors.hpp"
#include "hyers/iteration.hpp"
#include "hyers/maps.hpp"

namespace hyers {

/// Syntax error inside a map expression; column is 1-based.
class ExpressionError : public Error {
 public:
  ExpressionError(std::size_t column, const std::string& msg)
      : Error("column " + std::to_string(column) + ": " + msg), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

struct MapTerm {
  std::optional<double> coef;  // absent means an implicit 1
  int power = 0;               // 1..4 for powers of x, 0 for a named constant
  std::string ident;

  double weight() const { return coef.value_or(1.0); }
  friend bool operator==(const MapTerm&, const MapTerm&) = default;
};

struct MapExpression {
  std::vector<MapTerm> terms;

  int max_power() const {
    int m = 0;
    for (const auto& t : terms) m = std::max(m, t.power);
    return m;
  }
  friend bool operator==(const MapExpression&, const MapExpression&) = default;
};

namespace detail {

inline std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Parses a whole string as a finite double.
inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

class ExprLexer {
 public:
  explicit ExprLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t column() const { return pos_ + 1; }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::optional<double> real() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t i = pos_;
    if (i < text_.size() && (text_[i] == '+' || text_[i] == '-')) ++i;
    const std::size_t digits_start = i;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    }
    if (i == digits_start || (i == digits_start + 1 && text_[digits_start] == '.')) return std::nullopt;
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
      if (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) {
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        i = j;
      }
    }
    auto v = parse_real(text_.substr(start, i - start));
    if (!v) throw ExpressionError(start + 1, "malformed number");
    pos_ = i;
    return v;
  }

  std::optional<std::string> ident() {
    skip_ws();
    std::size_t i = pos_;
    if (i >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) {
      return std::nullopt;
    }
    while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) ++i;
    std::string out(text_.substr(pos_, i - pos_));
    pos_ = i;
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MapExpression parse_map_expression(std::string_view text) {
  detail::ExprLexer lex(text);
  MapExpression expr;
  if (lex.done()) throw ExpressionError(1, "empty map expression");
  do {
    MapTerm term;
    if (auto c = lex.real()) {
      term.coef = *c;
      if (!lex.accept('*')) throw ExpressionError(lex.column(), "expected '*' after coefficient");
    }
    const std::size_t id_col = lex.column();
    auto id = lex.ident();
    if (!id) throw ExpressionError(id_col, "expected 'x', 'x^n' or a constant name");
    if (*id == "x") {
      term.power = 1;
      if (lex.accept('^')) {
        const std::size_t pow_col = lex.column();
        const char d = lex.peek();
        if (d < '2' || d > '4') throw ExpressionError(pow_col, "exponent must be 2, 3 or 4");
        lex.accept(d);
        term.power = d - '0';
        const char after = lex.peek();
        if (std::isalnum(static_cast<unsigned char>(after)) || after == '.') {
          throw ExpressionError(lex.column(), "exponent must be 2, 3 or 4");
        }
      }
    } else {
      term.ident = *id;
    }
    expr.terms.push_back(std::move(term));
  } while (lex.accept('+'));
  if (!lex.done()) throw ExpressionError(lex.column(), "unexpected character '" + std::string(1, lex.peek()) + "'");
  return expr;
}

inline std::string to_string(const MapExpression& expr) {
  std::string out;
  for (const auto& t : expr.terms) {
    if (!out.empty()) out += " + ";
    if (t.coef) out += detail::shortest(*t.coef) + "*";
    if (t.power == 0) out += t.ident;
    else if (t.power == 1) out += "x";
    else out += "x^" + std::to_string(t.power);
  }
  return out;
}

struct RunConfig {
  AlgebraDescriptor algebra = AlgebraDescriptor::real_line();
  MapExpression map;
  std::map<std::string, std::vector<double>> constants;
  ControlFunction phi1 = ControlFunction::constant(0.0);
  ControlFunction phi2 = ControlFunction::constant(0.0);
  Direction method = Direction::Forward;
  IterationSettings settings;
  ProbeSpec probes;
  std::optional<std::string> csv_path;
  std::optional<std::string> report_path;
  std::optional<std::string> trace_csv_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline ControlFunction parse_control(std::string_view text, std::size_t line, const std::string& field) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ConfigError(line, field, "expected family(args), got '" + std::string(text) + "'");
  }
  const std::string name(trim(text.substr(0, open)));
  std::vector<double> args;
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  while (true) {
    const auto comma = inner.find(',');
    const auto piece = trim(inner.substr(0, comma));
    auto v = parse_real(piece);
    if (!v) throw ConfigError(line, field, "bad numeric argument '" + std::string(piece) + "'");
    args.push_back(*v);
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw ConfigError(line, field, name + " takes " + std::to_string(n) + " argument(s), got " +
                                         std::to_string(args.size()));
    }
  };
  try {
    if (name == "constant") {
      need(1);
      return ControlFunction::constant(args[0]);
    }
    if (name == "sum_powers") {
      need(2);
      return ControlFunction::sum_powers(args[0], args[1]);
    }
    if (name == "product_powers") {
      need(3);
      return ControlFunction::product_powers(args[0], args[1], args[2]);
    }
    if (name == "power_of_y") {
      need(2);
      return ControlFunction::power_of_y(args[0], args[1]);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line, field, e.what());
  }
  throw ConfigError(line, field, "unknown control family '" + name + "'");
}

inline std::vector<double> parse_vector(std::string_view text, std::size_t line, const std::string& field) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(line, field, "expected [c1, c2, ...]");
  }
  std::vector<double> out;
  std::string_view inner = trim(text.substr(1, text.size() - 2));
  if (inner.empty()) return out;
  while (true) {
    const auto comma = inner.find(',');
    const auto piece = inner.substr(0, comma);
    auto v = parse_real(piece);
    if (!v) throw ConfigError(line, field, "bad coefficient '" + std::string(trim(piece)) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  return out;
}

template <class Int>
Int parse_integer(std::string_view text, std::size_t line, const std::string& field) {
  text = trim(text);
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(line, field, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

inline double parse_positive(std::string_view text, std::size_t line, const std::string& field) {
  auto v = parse_real(text);
  if (!v || !(*v > 0.0)) throw ConfigError(line, field, "expected a positive real, got '" + std::string(trim(text)) + "'");
  return *v;
}

}  // namespace detail

/// Parses and validates configuration text. Errors name the line and field.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, std::size_t> seen;  // key -> line
  std::map<std::string, std::size_t> const_lines;
  std::size_t map_line = 0;
  std::string map_text;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = detail::trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, std::string(raw), "expected key = value");
    const std::string key(detail::trim(raw.substr(0, eq)));
    const std::string_view value = detail::trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "?", "missing key");
    if (!seen.emplace(key, line_no).second) {
      throw ConfigError(line_no, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    }

    if (key == "algebra") {
      auto alg = AlgebraDescriptor::from_name(value);
      if (!alg) throw ConfigError(line_no, key, "unknown algebra '" + std::string(value) + "'");
      cfg.algebra = *alg;
    } else if (key == "map") {
      map_line = line_no;
      map_text = value;
      try {
        cfg.map = parse_map_expression(value);
      } catch (const ExpressionError& e) {
        throw ConfigError(line_no, key, std::string("malformed expression at ") + e.what());
      }
    } else if (key.rfind("const.", 0) == 0) {
      const std::string name = key.substr(6);
      if (name.empty() || name == "x" || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
        throw ConfigError(line_no, key, "invalid constant name");
      }
      cfg.constants[name] = detail::parse_vector(value, line_no, key);
      const_lines[name] = line_no;
    } else if (key == "phi1") {
      cfg.phi1 = detail::parse_control(value, line_no, key);
    } else if (key == "phi2") {
      cfg.phi2 = detail::parse_control(value, line_no, key);
    } else if (key == "method") {
      if (value == "forward") cfg.method = Direction::Forward;
      else if (value == "backward") cfg.method = Direction::Backward;
      else throw ConfigError(line_no, key, "method must be forward or backward");
    } else if (key == "tol") {
      cfg.settings.tol = detail::parse_positive(value, line_no, key);
    } else if (key == "n_max") {
      cfg.settings.n_max = detail::parse_integer<int>(value, line_no, key);
      if (cfg.settings.n_max < 1) throw ConfigError(line_no, key, "n_max must be >= 1");
    } else if (key == "guard") {
      cfg.settings.guard = detail::parse_positive(value, line_no, key);
    } else if (key == "probes") {
      cfg.probes.count = detail::parse_integer<std::size_t>(value, line_no, key);
      if (cfg.probes.count < 1) throw ConfigError(line_no, key, "probes must be >= 1");
    } else if (key == "radius") {
      cfg.probes.radius = detail::parse_positive(value, line_no, key);
    } else if (key == "seed") {
      cfg.probes.seed = detail::parse_integer<std::uint64_t>(value, line_no, key);
    } else if (key == "csv") {
      cfg.csv_path = std::string(value);
    } else if (key == "report") {
      cfg.report_path = std::string(value);
    } else if (key == "trace_csv") {
      cfg.trace_csv_path = std::string(value);
    } else {
      throw ConfigError(line_no, key, "unknown key");
    }
  }

  for (const char* required : {"algebra", "map", "phi2"}) {
    if (!seen.count(required)) throw ConfigError(line_no, required, "missing required key");
  }
  for (const auto& [name, coeffs] : cfg.constants) {
    if (coeffs.size() != cfg.algebra.dim()) {
      throw ConfigError(const_lines[name], "const." + name,
                        "expected " + std::to_string(cfg.algebra.dim()) + " coefficients for " + cfg.algebra.id() +
                            ", got " + std::to_string(coeffs.size()));
    }
  }
  for (const auto& t : cfg.map.terms) {
    if (t.power == 0 && !cfg.constants.count(t.ident)) {
      throw ConfigError(map_line, "map", "undefined constant '" + t.ident + "'");
    }
  }
  if (cfg.map.max_power() == 4 && cfg.algebra.mul_rule() != MulRule::RealLine) {
    throw ConfigError(map_line, "map", "x^4 requires real-line");
  }
  return cfg;
}

/// Normalized text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "algebra = " << cfg.algebra.id() << '\n';
  os << "map = " << to_string(cfg.map) << '\n';
  for (const auto& [name, coeffs] : cfg.constants) {
    os << "const." << name << " = [";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? ", " : "") << detail::shortest(coeffs[i]);
    os << "]\n";
  }
  os << "phi1 = " << cfg.phi1.describe() << '\n';
  os << "phi2 = " << cfg.phi2.describe() << '\n';
  os << "method = " << to_string(cfg.method) << '\n';
  os << "tol = " << detail::shortest(cfg.settings.tol) << '\n';
  os << "n_max = " << cfg.settings.n_max << '\n';
  os << "guard = " << detail::shortest(cfg.settings.guard) << '\n';
  os << "probes = " << cfg.probes.count << '\n';
  os << "radius = " << detail::shortest(cfg.probes.radius) << '\n';
  os << "seed = " << cfg.probes.seed << '\n';
  if (cfg.csv_path) os << "csv = " << *cfg.csv_path << '\n';
  if (cfg.report_path) os << "report = " << *cfg.report_path << '\n';
  if (cfg.trace_csv_path) os << "trace_csv = " << *cfg.trace_csv_path << '\n';
  return os.str();
}

/// Collapses the expression into f(x) = c1·x + c2·x² + c3·x³ + c4·x⁴ + k.
inline MapSpec to_map_spec(const RunConfig& cfg) {
  double c[5] = {0, 0, 0, 0, 0};
  Element k = Element::zero(cfg.algebra);
  for (const auto& t : cfg.map.terms) {
    if (t.power > 0) {
      c[t.power] += t.weight();
    } else {
      k = add(k, scale(t.weight(), Element(cfg.algebra, cfg.constants.at(t.ident))));
    }
  }
  return MapSpec(cfg.algebra, c[1], c[2], c[3], k, c[4]);
}

}  // namespace hyers
