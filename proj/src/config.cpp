#include "tfloc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace tfloc {

using io::json;

namespace {

class TomlParser {
 public:
  explicit TomlParser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        skip_ws();
        const auto path = key_path();
        skip_ws();
        expect(']');
        end_of_line();
        table = &root;
        for (const auto& k : path) {
          json& next = (*table)[k];
          if (next.is_null()) next = json::object();
          if (!next.is_object()) fail("key '" + k + "' is not a table");
          table = &next;
        }
        if (!defined_tables_.insert(join(path)).second) fail("table [" + join(path) + "] defined twice");
        continue;
      }
      key_value(*table);
      end_of_line();
    }
    return root;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::set<std::string> defined_tables_;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("toml line " + std::to_string(line_) + ": " + what);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  static std::string join(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : ".") + p;
    return out;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  bool newline() {
    if (peek() == '\r' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\n') ++pos_;
    if (peek() == '\n') {
      ++pos_;
      ++line_;
      return true;
    }
    return false;
  }

  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (!newline()) return;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_space_multiline() {
    while (true) {
      skip_ws();
      skip_comment();
      if (!newline()) return;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (!eof() && !newline()) fail("unexpected text after value");
  }

  std::string simple_key() {
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> path{simple_key()};
    while (true) {
      skip_ws();
      if (peek() != '.') return path;
      ++pos_;
      skip_ws();
      path.push_back(simple_key());
    }
  }

  void key_value(json& table) {
    const auto path = key_path();
    skip_ws();
    expect('=');
    skip_ws();
    json* target = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      json& next = (*target)[path[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) fail("key '" + path[i] + "' is not a table");
      target = &next;
    }
    if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*target)[path.back()] = value();
  }

  json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      const char e = s_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  std::string literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    return s_.substr(start, pos_++ - start);
  }

  json array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_space_multiline();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(value());
      skip_space_multiline();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  json inline_table() {
    expect('{');
    json t = json::object();
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return t;
    }
    while (true) {
      skip_ws();
      key_value(t);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return t;
    }
  }

  json number() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_'))
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty()) fail("expected a value");
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    std::string body = tok;
    const bool negative = !body.empty() && body[0] == '-';
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body.erase(0, 1);
    if (body == "inf") return negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = body.find_first_of(".eE") != std::string::npos;
    const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
    const char* e = tok.data() + tok.size();
    if (is_float) {
      double v = 0.0;
      const auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) fail("malformed number '" + tok + "'");
      return v;
    }
    long long v = 0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) fail("malformed value '" + tok + "'");
    return v;
  }
};

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a table");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double as_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
    return std::numeric_limits<double>::infinity();
  throw ConfigError(where + ": expected a number");
}

double positive(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const double v = as_number(obj.at(key), where + "." + key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(where + "." + key + ": must be a positive number");
  return v;
}

double optional_positive(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? positive(obj, key, where) : fallback;
}

std::string text(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

PlanePoint point(const json& obj, const char* key, PlanePoint fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(where + "." + key + ": expected [x, xi]");
  return {as_number(v[0], where + "." + key), as_number(v[1], where + "." + key)};
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected a list");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, where));
  return out;
}

void parse_window(const json& w, const std::filesystem::path& base, ExperimentConfig& cfg) {
  check_keys(w, {"kind", "width", "order", "path"}, "window");
  cfg.window_kind = w.contains("kind") ? text(w, "kind", "window") : "gaussian";
  if (cfg.window_kind == "gaussian") {
    cfg.window = WindowSpec::gaussian(optional_positive(w, "width", 1.0, "window"));
  } else if (cfg.window_kind == "hermite") {
    if (!w.contains("order") || !w.at("order").is_number_integer() || w.at("order").get<long long>() < 0)
      throw ConfigError("window.order: must be a nonnegative integer");
    cfg.window = WindowSpec::hermite(static_cast<unsigned>(w.at("order").get<long long>()));
  } else if (cfg.window_kind == "file") {
    try {
      cfg.window = io::read_window_csv(base / text(w, "path", "window"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("window.path: ") + e.what());
    }
  } else {
    throw ConfigError("window.kind: expected gaussian, hermite or file");
  }
}

void parse_grid(const json& g, ExperimentConfig& cfg) {
  check_keys(g, {"dt", "dx", "dxi", "margins", "cap"}, "grid");
  Resolution& r = cfg.resolution;
  r.dt_max = optional_positive(g, "dt", r.dt_max, "grid");
  r.dx = optional_positive(g, "dx", r.dx, "grid");
  r.dxi = optional_positive(g, "dxi", r.dxi, "grid");
  if (g.contains("margins")) {
    const auto m = number_list(g.at("margins"), "grid.margins");
    if (m.size() != 2 || !(m[0] > 0.0) || !(m[1] > 0.0) || !std::isfinite(m[0]) || !std::isfinite(m[1]))
      throw ConfigError("grid.margins: expected two positive numbers [x, xi]");
    r.margins = Margins{m[0], m[1]};
  }
  if (g.contains("cap")) {
    if (!g.at("cap").is_number_integer() || g.at("cap").get<long long>() < 2)
      throw ConfigError("grid.cap: must be an integer of at least 2");
    r.cap = static_cast<std::size_t>(g.at("cap").get<long long>());
  }
}

void parse_domain(const json& d, const std::filesystem::path& base, ExperimentConfig& cfg) {
  if (!d.is_object()) throw ConfigError("domain: expected a table");
  cfg.domain_kind = text(d, "kind", "domain");
  const std::string& kind = cfg.domain_kind;
  if (kind == "disk") {
    check_keys(d, {"kind", "radius", "area", "center"}, "domain");
    if (d.contains("radius") == d.contains("area")) throw ConfigError("domain: give exactly one of radius and area");
    const double r = d.contains("radius") ? positive(d, "radius", "domain")
                                          : std::sqrt(positive(d, "area", "domain") / std::numbers::pi);
    cfg.domain = DomainSpec::of(DiskShape{point(d, "center", {}, "domain"), r});
  } else if (kind == "rect") {
    check_keys(d, {"kind", "width", "height", "center"}, "domain");
    cfg.domain = DomainSpec::of(
        RectShape{point(d, "center", {}, "domain"), positive(d, "width", "domain"), positive(d, "height", "domain")});
  } else if (kind == "star") {
    check_keys(d, {"kind", "points", "r_in", "r_out", "area", "ratio", "center"}, "domain");
    unsigned points = 5;
    if (d.contains("points")) {
      if (!d.at("points").is_number_integer() || d.at("points").get<long long>() < 2)
        throw ConfigError("domain.points: must be an integer of at least 2");
      points = static_cast<unsigned>(d.at("points").get<long long>());
    }
    const PlanePoint c = point(d, "center", {}, "domain");
    StarShape s;
    if (d.contains("area")) {
      if (d.contains("r_in") || d.contains("r_out")) throw ConfigError("domain: give area/ratio or r_in/r_out");
      const double ratio = optional_positive(d, "ratio", 0.6, "domain");
      if (ratio >= 1.0) throw ConfigError("domain.ratio: must lie in (0, 1)");
      s = StarShape::with_area(points, positive(d, "area", "domain"), ratio, c);
    } else {
      if (d.contains("ratio")) throw ConfigError("domain: ratio requires area");
      s = StarShape{points, positive(d, "r_in", "domain"), positive(d, "r_out", "domain"), c};
    }
    cfg.domain = DomainSpec::of(s);
  } else if (kind == "pgm") {
    check_keys(d, {"kind", "path", "x0", "xi0", "threshold"}, "domain");
    io::Graymap img;
    try {
      img = io::decode_pgm(io::read_file(base / text(d, "path", "domain")));
    } catch (const Error& e) {
      throw ConfigError(std::string("domain.path: ") + e.what());
    }
    const double dx = cfg.resolution.dx, dxi = cfg.resolution.dxi;
    // Default placement centers the image on the origin.
    const double x0 = d.contains("x0") ? as_number(d.at("x0"), "domain.x0")
                                       : -0.5 * static_cast<double>(img.width - 1) * dx;
    const double xi0 = d.contains("xi0") ? as_number(d.at("xi0"), "domain.xi0")
                                         : -0.5 * static_cast<double>(img.height - 1) * dxi;
    const double threshold = d.contains("threshold") ? as_number(d.at("threshold"), "domain.threshold") : 0.5;
    if (!(threshold >= 0.0 && threshold < 1.0)) throw ConfigError("domain.threshold: must lie in [0, 1)");
    DomainMask m = io::graymap_to_mask(img, PlaneGrid(img.width, img.height, dx, dxi, x0, xi0), threshold);
    if (m.empty()) throw ConfigError("domain: graymap contains no domain cells");
    cfg.domain = DomainSpec::of(std::move(m));
  } else {
    throw ConfigError("domain.kind: expected disk, rect, star or pgm");
  }
}

}  // namespace

json parse_toml(const std::string& text) { return TomlParser(text).parse(); }

json load_document(const std::filesystem::path& path) {
  std::string data;
  try {
    data = io::read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const std::string ext = path.extension().string();
  if (ext == ".toml") return parse_toml(data);
  try {
    return json::parse(data);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base) {
  check_keys(doc, {"window", "grid", "domain", "dilation", "deltas", "norms", "cross_section", "outputs", "seed"},
             "config");
  ExperimentConfig cfg;
  if (doc.contains("window")) parse_window(doc.at("window"), base, cfg);
  if (doc.contains("grid")) parse_grid(doc.at("grid"), cfg);
  if (!doc.contains("domain")) throw ConfigError("config: missing domain");
  parse_domain(doc.at("domain"), base, cfg);
  if (doc.contains("dilation")) {
    const json& dl = doc.at("dilation");
    check_keys(dl, {"radii"}, "dilation");
    if (dl.contains("radii")) cfg.radii = number_list(dl.at("radii"), "dilation.radii");
    for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
      if (!(cfg.radii[i] > 0.0) || !std::isfinite(cfg.radii[i])) throw ConfigError("dilation.radii: must be positive");
      if (i && !(cfg.radii[i] > cfg.radii[i - 1])) throw ConfigError("dilation.radii: must be strictly ascending");
    }
  }
  if (doc.contains("deltas")) {
    cfg.deltas = number_list(doc.at("deltas"), "deltas");
    for (double d : cfg.deltas)
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("deltas: must be positive");
  }
  if (doc.contains("norms")) {
    cfg.norms = number_list(doc.at("norms"), "norms");
    for (double p : cfg.norms)
      if (!(p >= 1.0)) throw ConfigError("norms: exponents must be at least 1");
  }
  if (doc.contains("cross_section")) {
    const json& cs = doc.at("cross_section");
    check_keys(cs, {"from", "to", "samples"}, "cross_section");
    cfg.cross_section.from = point(cs, "from", cfg.cross_section.from, "cross_section");
    cfg.cross_section.to = point(cs, "to", cfg.cross_section.to, "cross_section");
    if (cs.contains("samples")) {
      if (!cs.at("samples").is_number_integer() || cs.at("samples").get<long long>() < 2)
        throw ConfigError("cross_section.samples: must be an integer of at least 2");
      cfg.cross_section.samples = static_cast<std::size_t>(cs.at("samples").get<long long>());
    }
  }
  if (doc.contains("outputs")) {
    if (!doc.at("outputs").is_string()) throw ConfigError("outputs: must be a path string");
    cfg.outputs = base / doc.at("outputs").get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer() || doc.at("seed").get<long long>() < 0)
      throw ConfigError("seed: must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(doc.at("seed").get<long long>());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_config(load_document(path), base);
}

}  // namespace tfloc
