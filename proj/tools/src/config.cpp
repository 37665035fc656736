#include "greenlab_tools/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "greenlab/error.hpp"

namespace greenlab::tools {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

class TomlParser {
 public:
  explicit TomlParser(std::string_view s) : s_(s) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws_comments_newlines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        if (!eof() && peek() == '[') fail("arrays of tables are not supported");
        skip_ws();
        const auto path = parse_key_path();
        skip_ws();
        expect(']');
        table = &root;
        for (const auto& k : path) {
          json& next = (*table)[k];
          if (next.is_null()) next = json::object();
          if (!next.is_object()) fail("'" + k + "' is not a table");
          table = &next;
        }
      } else {
        const auto path = parse_key_path();
        skip_ws();
        expect('=');
        skip_ws();
        json value = parse_value();
        json* target = table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          json& next = (*target)[path[i]];
          if (next.is_null()) next = json::object();
          if (!next.is_object()) fail("'" + path[i] + "' is not a table");
          target = &next;
        }
        if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
        (*target)[path.back()] = std::move(value);
      }
      skip_ws();
      if (!eof() && peek() == '#') skip_comment();
      if (!eof() && peek() != '\n' && peek() != '\r') fail("expected end of line");
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    config_error("config line " + std::to_string(line) + ": " + msg);
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_ws_comments_newlines() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  static bool bare(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key() {
    if (!eof() && (peek() == '"' || peek() == '\'')) return parse_string();
    const std::size_t start = pos_;
    while (!eof() && bare(peek())) ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path{parse_key()};
    skip_ws();
    while (!eof() && peek() == '.') {
      ++pos_;
      skip_ws();
      path.push_back(parse_key());
      skip_ws();
    }
    return path;
  }

  std::string parse_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = peek();
      ++pos_;
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (eof()) fail("unterminated string");
        const char e = peek();
        ++pos_;
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  json parse_value() {
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    const std::size_t start = pos_;
    while (!eof() && (bare(peek()) || peek() == '.' || peek() == '+')) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.empty()) fail("expected a value");
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                          digits.find("inf") != std::string::npos ||
                          digits.find("nan") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(digits, &used);
        if (used == digits.size()) return v;
      } else {
        const long long v = std::stoll(digits, &used, 10);
        if (used == digits.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("invalid value '" + tok + "'");
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_ws_comments_newlines();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(parse_value());
      skip_ws_comments_newlines();
      if (!eof() && peek() == ',') {
        ++pos_;
      } else if (eof() || peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json parse_inline_table() {
    expect('{');
    json obj = json::object();
    skip_ws();
    if (!eof() && peek() == '}') {
      ++pos_;
      return obj;
    }
    while (true) {
      skip_ws();
      const auto path = parse_key_path();
      skip_ws();
      expect('=');
      skip_ws();
      json* target = &obj;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        json& next = (*target)[path[i]];
        if (next.is_null()) next = json::object();
        target = &next;
      }
      (*target)[path.back()] = parse_value();
      skip_ws();
      if (!eof() && peek() == ',') {
        ++pos_;
      } else if (!eof() && peek() == '}') {
        ++pos_;
        return obj;
      } else {
        fail("expected ',' or '}' in inline table");
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

json linspace(double a, double b, double step) {
  json out = json::array();
  const int n = static_cast<int>(std::lround((b - a) / step));
  for (int i = 0; i <= n; ++i) out.push_back(a + step * i);
  return out;
}

json logspace(double a, double b, int n) {
  json out = json::array();
  for (int i = 0; i < n; ++i) out.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return out;
}

const char* type_name(const json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_boolean()) return "boolean";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "table";
  return "null";
}

bool compatible(const json& def, const json& v) {
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return false;
}

// Sections whose content is replaced as a whole and checked when used.
bool free_form(const std::string& path) { return path == "map" || path == "observables"; }

void merge(json& into, const json& user, const std::string& prefix) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!into.contains(it.key())) config_error(path + ": unknown field");
    json& def = into[it.key()];
    if (free_form(path)) {
      if (!it.value().is_object()) config_error(path + ": expected a table");
      if (path == "observables") {
        for (auto o = it.value().begin(); o != it.value().end(); ++o) def[o.key()] = o.value();
      } else {
        def = it.value();
      }
      continue;
    }
    if (!compatible(def, it.value())) {
      config_error(path + ": expected " + type_name(def) + ", got " + type_name(it.value()));
    }
    if (def.is_object()) {
      merge(def, it.value(), path);
    } else {
      def = it.value();
    }
  }
}

double number_at(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) config_error(field + "." + key + ": missing field");
  if (!obj.at(key).is_number()) config_error(field + "." + key + ": expected number");
  return obj.at(key).get<double>();
}

std::vector<Complex> coeffs_from(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) config_error(field + ": expected a non-empty array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(complex_from_json(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

json parse_toml(std::string_view text) { return TomlParser(text).parse(); }

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return json::parse(buf.str());
    } catch (const json::parse_error& e) {
      config_error(std::string("config JSON: ") + e.what());
    }
  }
  return parse_toml(buf.str());
}

json default_config() {
  return {
      {"seed", 0},
      {"workers", 1},
      {"map", {{"numer", {0, 0, 1}}, {"denom", {1}}}},
      {"sampler", {{"n_samples", 100000}, {"burn_in", 50}, {"start", {2.0, 1.0}}}},
      {"budget", {{"exact_depth_max", 12}, {"mc_paths", 10000}}},
      {"observables",
       {{"phi", {{"kind", "trig_poly"}, {"coeffs", {0, 1}}}},
        {"psi", {{"kind", "trig_poly"}, {"coeffs", {0, 1}}}}}},
      {"green", {{"n_iter", 40}, {"points", {{0.5, 0.0}, {2.0, 0.0}, {0.0, 3.0}, {1.0, 1.0}}}}},
      {"moderate",
       {{"center", {1.0, 0.0}},
        {"beta", 1.0},
        {"m_grid", linspace(1.0, 8.0, 0.5)},
        {"radii", logspace(0.2, 5e-4, 20)}}},
      {"correlations",
       {{"phi", "phi"}, {"psi", "psi"}, {"n_max", 8}, {"n_orbits", 100000}, {"forward", true}}},
      {"variance",
       {{"observable", "psi"},
        {"n_max", 8},
        {"birkhoff_grid", {8, 16, 32}},
        {"n_orbits", 100000},
        {"expansion_c", 1.0}}},
      {"clt",
       {{"observable", "psi"}, {"n", 1024}, {"n_orbits", 100000}, {"coboundary_tol", 0.01}}},
      {"ldt",
       {{"observable", "psi"}, {"epsilon", 0.2}, {"n_grid", {16, 32, 64}}, {"n_orbits", 100000}}},
      {"decompose",
       {{"observable", "psi"},
        {"tol", 1e-6},
        {"max_points", 2000},
        {"points", 100},
        {"n_orbits", 20000}}},
      {"oracle_suite", {{"exp_series_families", 5}, {"exp_series_depth", 6}}},
  };
}

json resolve_config(const json& user) {
  if (!user.is_object()) config_error("config: expected a table at the top level");
  json cfg = default_config();
  if (!user.empty()) {
    if (!user.contains("map")) config_error("map.numer: missing field (no map given)");
    if (!user.at("map").is_object() || !user.at("map").contains("numer")) {
      config_error("map.numer: missing field");
    }
  }
  merge(cfg, user, "");
  if (!cfg["map"].contains("denom")) cfg["map"]["denom"] = json::array({1});
  for (auto it = cfg["map"].begin(); it != cfg["map"].end(); ++it) {
    if (it.key() != "numer" && it.key() != "denom") config_error("map." + it.key() + ": unknown field");
  }
  map_from_config(cfg);
  for (auto it = cfg["observables"].begin(); it != cfg["observables"].end(); ++it) {
    observable_from_spec(it.value(), "observables." + it.key());
  }
  return cfg;
}

Complex complex_from_json(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  config_error(field + ": expected a number or [re, im]");
}

SpherePoint point_from_json(const json& v, const std::string& field) {
  if (v.is_string() && v.get<std::string>() == "inf") return SpherePoint::infinity();
  return SpherePoint::from_z(complex_from_json(v, field));
}

RationalMap map_from_config(const json& cfg) {
  if (!cfg.contains("map") || !cfg.at("map").contains("numer")) config_error("map.numer: missing field");
  const json& m = cfg.at("map");
  std::vector<Complex> numer = coeffs_from(m.at("numer"), "map.numer");
  std::vector<Complex> denom =
      m.contains("denom") ? coeffs_from(m.at("denom"), "map.denom") : std::vector<Complex>{1.0};
  try {
    return make_rational_map(std::move(numer), std::move(denom));
  } catch (const Error& e) {
    config_error("map: " + std::string(to_string(e.code())) + ": " + e.what());
  }
}

Observable observable_from_spec(const json& spec, const std::string& field) {
  if (!spec.is_object()) config_error(field + ": expected a table");
  if (!spec.contains("kind") || !spec.at("kind").is_string()) config_error(field + ".kind: missing field");
  const std::string kind = spec.at("kind").get<std::string>();
  Observable obs = Observable::constant(0.0);
  try {
    if (kind == "trig_poly") {
      if (!spec.contains("coeffs")) config_error(field + ".coeffs: missing field");
      obs = Observable::trig_poly(coeffs_from(spec.at("coeffs"), field + ".coeffs"));
    } else if (kind == "holder") {
      if (!spec.contains("center")) config_error(field + ".center: missing field");
      obs = Observable::holder_dist_pow(number_at(spec, "nu", field),
                                        point_from_json(spec.at("center"), field + ".center"));
    } else if (kind == "log_singular") {
      if (!spec.contains("center")) config_error(field + ".center: missing field");
      obs = Observable::log_singular(number_at(spec, "beta", field),
                                     point_from_json(spec.at("center"), field + ".center"));
    } else if (kind == "constant") {
      obs = Observable::constant(number_at(spec, "value", field));
    } else if (kind == "sum") {
      if (!spec.contains("terms") || !spec.at("terms").is_array()) {
        config_error(field + ".terms: missing field");
      }
      std::vector<std::pair<double, Observable>> terms;
      const json& ts = spec.at("terms");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string sub = field + ".terms[" + std::to_string(i) + "]";
        if (!ts[i].is_object() || !ts[i].contains("observable")) {
          config_error(sub + ".observable: missing field");
        }
        const double w = ts[i].contains("weight") ? number_at(ts[i], "weight", sub) : 1.0;
        terms.emplace_back(w, observable_from_spec(ts[i].at("observable"), sub + ".observable"));
      }
      if (terms.empty()) config_error(field + ".terms: expected at least one term");
      obs = linear_combination(terms);
    } else {
      config_error(field + ".kind: unknown observable kind '" + kind + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(field + ": " + e.what());
  }
  if (spec.contains("mean")) obs.set_mean_hint(number_at(spec, "mean", field));
  return obs;
}

Observable observable_from_config(const json& cfg, const std::string& name) {
  const json& obs = cfg.at("observables");
  if (!obs.contains(name)) config_error("observables." + name + ": missing field");
  return observable_from_spec(obs.at(name), "observables." + name);
}

}  // namespace greenlab::tools
