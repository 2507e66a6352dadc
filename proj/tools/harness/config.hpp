#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "morphtip/fingertip.hpp"

namespace morphtip::cli {

/// Malformed or out-of-contract configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double start_deg = 18.0;
  double step_deg = -3.0;
  int count = 13;
};

struct PointerSpec {
  double psi_max_deg = 5.0;
  int points_per_edge = 4;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: stdout
};

struct RunConfig {
  FingertipConfig fingertip;
  SweepSpec sweep;
  PointerSpec pointer;
  OutputSpec output;
};

/// Parses a config document. Angles are degrees, lengths millimetres. Every
/// key is optional; unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

OutputFormat parse_format(std::string_view text);

/// "flat", "concave:<deg>", "convex:<deg>" (negative), "tilted:<x_deg>,<y_deg>".
MorphPrimitive parse_primitive(std::string_view text);

}  // namespace morphtip::cli
