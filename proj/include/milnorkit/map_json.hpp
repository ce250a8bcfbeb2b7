#pragma once

// Map exchange format:
//   {"n": int, "k": int, "label": string, "components": [node, ...]}
//   node := {"const": number} | {"var": index} | {"neg": node}
//         | {"add": [node, ...]} | {"mul": [node, ...]} | {"pow": [node, nonneg-int]}
// Numbers are written in shortest round-trip form.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/error.hpp"

namespace milnorkit {

/// Parse failure with a 1-based line/column when the text itself is malformed,
/// or a JSON path when the document is well-formed but violates the schema.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : InputError(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what : what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline nlohmann::json parse_text(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports the byte just past the offending token
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_column(text, at);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(msg, line, col);
  }
}

inline std::uint64_t require_index(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ParseError(path + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline Expr parse_node(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw ParseError(path + ": expression node must be an object with one key");
  const auto& [key, val] = *j.items().begin();
  const std::string here = path + "." + key;
  if (key == "const") {
    if (!val.is_number()) throw ParseError(here + ": expected a number");
    const double v = val.get<double>();
    if (!std::isfinite(v)) throw ParseError(here + ": constant must be finite");
    return Expr::constant(v);
  }
  if (key == "var") return Expr::variable(static_cast<std::size_t>(require_index(val, here)));
  if (key == "neg") return Expr::negate(parse_node(val, here));
  if (key == "add" || key == "mul") {
    if (!val.is_array()) throw ParseError(here + ": expected an array");
    std::vector<Expr> kids;
    for (std::size_t i = 0; i < val.size(); ++i) kids.push_back(parse_node(val[i], here + "[" + std::to_string(i) + "]"));
    return key == "add" ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
  }
  if (key == "pow") {
    if (!val.is_array() || val.size() != 2) throw ParseError(here + ": expected [node, exponent]");
    const std::uint64_t e = require_index(val[1], here + "[1]");
    if (e > std::numeric_limits<std::uint32_t>::max()) throw ParseError(here + "[1]: exponent too large");
    return Expr::power(parse_node(val[0], here + "[0]"), static_cast<std::uint32_t>(e));
  }
  throw ParseError(path + ": unknown node kind '" + key + "'");
}

inline void write_number(std::string& out, double v) {
  if (v == 0.0 && std::signbit(v)) {
    out += "-0.0";  // a bare "-0" would be read back as the integer 0
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline void write_node(std::string& out, const Expr& e) {
  auto list = [&](const char* key) {
    out += "{\"";
    out += key;
    out += "\":[";
    bool first = true;
    for (const Expr& c : e.children()) {
      if (!first) out += ',';
      first = false;
      write_node(out, c);
    }
    out += "]}";
  };
  switch (e.kind()) {
    case Expr::Kind::constant:
      out += "{\"const\":";
      write_number(out, e.value());
      out += '}';
      break;
    case Expr::Kind::variable:
      out += "{\"var\":" + std::to_string(e.index()) + "}";
      break;
    case Expr::Kind::negation:
      out += "{\"neg\":";
      write_node(out, e.children()[0]);
      out += '}';
      break;
    case Expr::Kind::power:
      out += "{\"pow\":[";
      write_node(out, e.children()[0]);
      out += "," + std::to_string(e.exponent()) + "]}";
      break;
    case Expr::Kind::sum:
      list("add");
      break;
    case Expr::Kind::product:
      list("mul");
      break;
  }
}

}  // namespace detail

inline AnalyticMap map_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("map: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "k" && key != "label" && key != "components")
      throw ParseError("map: unknown field '" + key + "'");
  if (!j.contains("n") || !j.contains("k") || !j.contains("components"))
    throw ParseError("map: fields n, k and components are required");
  const auto n = detail::require_index(j["n"], "map.n");
  const auto k = detail::require_index(j["k"], "map.k");
  const auto& comps = j["components"];
  if (!comps.is_array()) throw ParseError("map.components: expected an array");
  if (comps.size() != k)
    throw ParseError("map.components: length " + std::to_string(comps.size()) + " does not match k=" + std::to_string(k));
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw ParseError("map.label: expected a string");
    label = j["label"].get<std::string>();
  }
  std::vector<Expr> exprs;
  for (std::size_t i = 0; i < comps.size(); ++i)
    exprs.push_back(detail::parse_node(comps[i], "map.components[" + std::to_string(i) + "]"));
  return AnalyticMap(static_cast<std::size_t>(n), std::move(exprs), std::move(label));
}

inline AnalyticMap parse_map(std::string_view text) { return map_from_json(detail::parse_text(text)); }

inline AnalyticMap load_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_map(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Canonical single-line serialization (keys in n, k, label, components order).
inline std::string serialize_map(const AnalyticMap& map) {
  std::string out = "{\"n\":" + std::to_string(map.n()) + ",\"k\":" + std::to_string(map.k()) +
                    ",\"label\":" + nlohmann::json(map.label()).dump() + ",\"components\":[";
  for (std::size_t i = 0; i < map.k(); ++i) {
    if (i) out += ',';
    detail::write_node(out, map.components()[i]);
  }
  out += "]}";
  return out;
}

}  // namespace milnorkit
