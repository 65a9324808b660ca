#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "tfloc/domain.hpp"
#include "tfloc/experiment.hpp"

namespace tfloc::io {

using json = nlohmann::ordered_json;

/// Scientific notation with 12 significant digits and a lowercase exponent,
/// independent of the locale. Non-finite values print as inf, -inf or nan.
std::string format_double(double v);

/// Serializes with format_double for every floating value; non-finite numbers become null.
std::string dump_json(const json& value, int indent = 2);

/// Writes to a temporary file next to path and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

/// RFC-4180 table: header row first, CRLF line ends, fields quoted when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& cell(double v);
  CsvTable& cell(long long v);
  CsvTable& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvTable& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvTable& cell(const std::string& v);
  CsvTable& cell(const char* v) { return cell(std::string(v)); }

  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parses an RFC-4180 document into rows of fields (header included).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Portable graymap. Row 0 is the top of the image.
struct Graymap {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major

  std::uint16_t at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }
};

/// P2 (plain) when plain is set, P5 otherwise; 16-bit P5 samples are big-endian.
std::string encode_pgm(const Graymap& image, bool plain = false);
Graymap decode_pgm(const std::string& data);

/// Linear map value lo -> 0, hi -> maxval with clamping; x runs along columns and
/// xi upwards, so the top row holds the largest xi.
Graymap field_to_graymap(const PlaneField& field, double lo = 0.0, double hi = 1.0, unsigned maxval = 65535);

/// Sidecar describing the scaling and the plane geometry of a graymap.
json graymap_sidecar(const PlaneGrid& grid, double lo, double hi, unsigned maxval);

/// Cells whose pixel value exceeds threshold * maxval; the image must match the grid size.
DomainMask graymap_to_mask(const Graymap& image, const PlaneGrid& grid, double threshold = 0.5,
                           Margins margins = {0.0, 0.0});
Graymap mask_to_graymap(const DomainMask& mask);

/// Table with columns x, xi, value.
CsvTable field_csv(const PlaneField& field);

/// Window samples from a CSV with header t,re,im on a uniform time lattice.
WindowSpec read_window_csv(const std::filesystem::path& path);

json to_json(const ErrorReport& report);

}  // namespace tfloc::io
