#include "tfloc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace tfloc::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

namespace {

void write_string(std::string& out, const std::string& s) {
  // Delegate escaping to the library's own serializer.
  out += json(s).dump();
}

void write_value(std::string& out, const json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        write_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_value(out, e, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const json& value, int indent) {
  std::string out;
  write_value(out, value, indent, 0);
  out += '\n';
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable& CsvTable::cell(long long v) { return cell(std::to_string(v)); }

CsvTable& CsvTable::cell(const std::string& v) {
  if (rows_.empty()) throw ContractViolation("csv: cell before row");
  if (rows_.back().size() >= header_.size()) throw ContractViolation("csv: row has more cells than the header");
  rows_.back().push_back(v);
  return *this;
}

namespace {

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string q = "\"";
  for (char c : f) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void append_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw ContractViolation("csv: incomplete row");
    append_line(out, r);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error("csv: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string encode_pgm(const Graymap& image, bool plain) {
  if (image.maxval < 1 || image.maxval > 65535) throw ContractViolation("pgm: maxval out of range");
  if (image.pixels.size() != image.width * image.height) throw ContractViolation("pgm: pixel count mismatch");
  std::string out = plain ? "P2\n" : "P5\n";
  out += std::to_string(image.width) + " " + std::to_string(image.height) + "\n" + std::to_string(image.maxval) + "\n";
  if (plain) {
    for (std::size_t r = 0; r < image.height; ++r) {
      for (std::size_t c = 0; c < image.width; ++c) {
        if (c) out += ' ';
        out += std::to_string(image.at(c, r));
      }
      out += '\n';
    }
    return out;
  }
  for (std::uint16_t p : image.pixels) {
    if (image.maxval > 255) out += static_cast<char>(p >> 8);
    out += static_cast<char>(p & 0xff);
  }
  return out;
}

Graymap decode_pgm(const std::string& data) {
  std::size_t pos = 0;
  const auto skip = [&] {
    while (pos < data.size()) {
      if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  const auto number = [&]() -> unsigned long {
    skip();
    unsigned long v = 0;
    const auto res = std::from_chars(data.data() + pos, data.data() + data.size(), v);
    if (res.ec != std::errc() || res.ptr == data.data() + pos) throw Error("pgm: malformed header");
    pos = static_cast<std::size_t>(res.ptr - data.data());
    return v;
  };
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5')) throw Error("pgm: not a P2/P5 graymap");
  const bool plain = data[1] == '2';
  pos = 2;
  Graymap img;
  img.width = number();
  img.height = number();
  img.maxval = static_cast<unsigned>(number());
  if (img.width == 0 || img.height == 0 || img.maxval < 1 || img.maxval > 65535) throw Error("pgm: bad dimensions");
  img.pixels.resize(img.width * img.height);
  if (plain) {
    for (auto& p : img.pixels) {
      const unsigned long v = number();
      if (v > img.maxval) throw Error("pgm: sample exceeds maxval");
      p = static_cast<std::uint16_t>(v);
    }
    return img;
  }
  ++pos;  // single whitespace after maxval
  const std::size_t bytes = img.maxval > 255 ? 2 : 1;
  if (data.size() < pos + bytes * img.pixels.size()) throw Error("pgm: truncated raster");
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos + i * bytes);
    img.pixels[i] = static_cast<std::uint16_t>(bytes == 2 ? (p[0] << 8) | p[1] : p[0]);
    if (img.pixels[i] > img.maxval) throw Error("pgm: sample exceeds maxval");
  }
  return img;
}

Graymap field_to_graymap(const PlaneField& field, double lo, double hi, unsigned maxval) {
  if (!(hi > lo)) throw ContractViolation("graymap: hi must exceed lo");
  const PlaneGrid& g = field.grid();
  Graymap img{g.nx(), g.nxi(), maxval, std::vector<std::uint16_t>(g.size())};
  for (std::size_t j = 0; j < g.nx(); ++j)
    for (std::size_t k = 0; k < g.nxi(); ++k) {
      const double u = std::clamp((field.at(j, k) - lo) / (hi - lo), 0.0, 1.0);
      img.pixels[(g.nxi() - 1 - k) * g.nx() + j] = static_cast<std::uint16_t>(std::lround(u * maxval));
    }
  return img;
}

json graymap_sidecar(const PlaneGrid& grid, double lo, double hi, unsigned maxval) {
  json j;
  j["width"] = grid.nx();
  j["height"] = grid.nxi();
  j["maxval"] = maxval;
  j["value_at_zero"] = lo;
  j["value_at_maxval"] = hi;
  j["x0"] = grid.x0();
  j["xi0"] = grid.xi0();
  j["dx"] = grid.dx();
  j["dxi"] = grid.dxi();
  j["orientation"] = "columns along x, rows along xi descending from the top";
  return j;
}

DomainMask graymap_to_mask(const Graymap& image, const PlaneGrid& grid, double threshold, Margins margins) {
  if (image.width != grid.nx() || image.height != grid.nxi())
    throw ContractViolation("graymap_to_mask: image size does not match the grid");
  std::vector<std::uint8_t> inside(grid.size());
  for (std::size_t j = 0; j < grid.nx(); ++j)
    for (std::size_t k = 0; k < grid.nxi(); ++k)
      inside[grid.index(j, k)] = image.at(j, grid.nxi() - 1 - k) > threshold * image.maxval ? 1 : 0;
  return DomainMask(grid, std::move(inside), {}, margins);
}

Graymap mask_to_graymap(const DomainMask& mask) { return field_to_graymap(indicator_field(mask), 0.0, 1.0, 255); }

CsvTable field_csv(const PlaneField& field) {
  CsvTable t({"x", "xi", "value"});
  const PlaneGrid& g = field.grid();
  for (std::size_t j = 0; j < g.nx(); ++j)
    for (std::size_t k = 0; k < g.nxi(); ++k) t.row().cell(g.x(j)).cell(g.xi(k)).cell(field.at(j, k));
  return t;
}

namespace {

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

}  // namespace

WindowSpec read_window_csv(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_file(path));
  if (rows.size() < 3) throw Error(path.string() + ": window file needs a header and at least two samples");
  const auto& h = rows[0];
  if (h.size() < 2 || h[0] != "t" || h[1] != "re" || (h.size() > 2 && h[2] != "im"))
    throw Error(path.string() + ": window header must be t,re[,im]");
  std::vector<double> t;
  std::vector<cplx> s;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != h.size()) throw Error(path.string() + ": ragged row " + std::to_string(r + 1));
    t.push_back(parse_number(rows[r][0]));
    s.emplace_back(parse_number(rows[r][1]), h.size() > 2 ? parse_number(rows[r][2]) : 0.0);
  }
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw Error(path.string() + ": times must increase");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[0] - static_cast<double>(i) * dt) > 1e-9 * std::max(1.0, std::abs(t[i])))
      throw Error(path.string() + ": times are not uniformly spaced");
  return WindowSpec::tabulated(std::move(s), dt, t[0], path.filename().string());
}

json to_json(const ErrorReport& r) {
  const auto keyed = [](const std::map<double, double>& m) {
    json o = json::object();
    for (const auto& [k, v] : m) o[format_double(k)] = v;
    return o;
  };
  json j;
  j["l1_raw"] = r.l1_raw;
  j["l1_normalized"] = r.l1_normalized;
  j["lp"] = keyed(r.lp);
  j["level_measures"] = keyed(r.level_measures);
  j["e_omega"] = r.e_omega;
  j["bound_thm13"] = r.bound_mollified;
  j["eqc_ratio"] = r.eqc_ratio;
  j["bound_prop34"] = r.bound_count;
  j["recovery_symdiff"] = r.recovery_symdiff;
  j["gap_at_cut"] = r.gap_at_cut;
  j["basis_dependent"] = r.basis_dependent;
  j["measure"] = r.measure;
  j["perimeter"] = r.perimeter;
  j["mstar"] = r.mstar;
  j["a_omega"] = r.a_omega;
  j["l1_mollified"] = r.l1_mollified;
  j["bound_indicator"] = r.bound_indicator;
  j["bound_tail"] = r.bound_tail;
  j["weak_l2_constants"] = keyed(r.weak_l2_constants);
  j["weak_l2_applicable"] = r.weak_l2_applicable;
  return j;
}

}  // namespace tfloc::io
