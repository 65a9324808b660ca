#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfloc/experiment.hpp"
#include "tfloc/io.hpp"

namespace tfloc {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Straight line in the plane sampled at evenly spaced points.
struct CrossSection {
  PlanePoint from{-6.0, 0.0};
  PlanePoint to{6.0, 0.0};
  std::size_t samples = 241;
};

struct ExperimentConfig {
  std::string window_kind = "gaussian";  // gaussian | hermite | file
  WindowSpec window = WindowSpec::gaussian(1.0);
  std::string domain_kind;  // disk | rect | star | pgm
  DomainSpec domain;
  Resolution resolution;
  std::vector<double> radii;
  std::vector<double> deltas{0.1, 0.2, 0.5};
  std::vector<double> norms{1.0, 2.0, std::numeric_limits<double>::infinity()};
  CrossSection cross_section;
  std::filesystem::path outputs = "out";
  std::uint64_t seed = 0;
};

/// Parses the subset of TOML used by configs: tables, dotted keys, strings,
/// numbers (including inf and nan), booleans, arrays and inline tables.
io::json parse_toml(const std::string& text);

/// Reads a .toml or .json document.
io::json load_document(const std::filesystem::path& path);

/// Validates and converts a document; relative paths resolve against base_dir.
/// Throws ConfigError on unknown keys, wrong types or nonpositive physical parameters.
ExperimentConfig parse_config(const io::json& doc, const std::filesystem::path& base_dir = ".");

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace tfloc
