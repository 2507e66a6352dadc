#include "harness/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <vector>

#include "morphtip/errors.hpp"

namespace morphtip::cli {

namespace {

using nlohmann::json;

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + " must be an object");
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto k : keys) {
      known = known || key == k;
    }
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  return v.get<int>();
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

FingertipConfig parse_fingertip(const json& f) {
  only_keys(f, "fingertip",
            {"linkage", "theta_min_deg", "theta_max_deg", "facet_len_mm", "spring_k_nmm_per_rad",
             "rod_len_mm", "step_deg", "step_count"});
  FingertipConfig cfg;
  if (f.contains("linkage")) {
    const json& l = f.at("linkage");
    only_keys(l, "fingertip.linkage", {"l_oc_mm", "l_ab_mm", "oa_x_mm", "oa_y_mm", "alpha0_deg"});
    const LinkageParams d = LinkageParams::defaults();
    const double l_oc = number(l, "l_oc_mm", d.l_oc());
    const double l_ab = number(l, "l_ab_mm", d.l_ab());
    const double oa_x = number(l, "oa_x_mm", d.oa().x());
    const double alpha0 =
        l.contains("alpha0_deg") ? deg_to_rad(number(l, "alpha0_deg", 0.0)) : d.alpha0();
    try {
      cfg.linkage = l.contains("oa_y_mm")
                        ? LinkageParams::make(l_oc, l_ab, Vec2(oa_x, number(l, "oa_y_mm", 0.0)), alpha0)
                        : LinkageParams::neutral_flat(l_oc, l_ab, oa_x, alpha0);
    } catch (const ModelError& e) {
      throw ConfigError(std::string("fingertip.linkage: ") + e.what());
    }
  }
  auto degrees = [&](const char* key, double& target) {
    if (f.contains(key)) {
      target = deg_to_rad(number(f, key, 0.0));
    }
  };
  degrees("theta_min_deg", cfg.range.theta_min);
  degrees("theta_max_deg", cfg.range.theta_max);
  cfg.facet_len = number(f, "facet_len_mm", cfg.facet_len);
  cfg.spring_k = number(f, "spring_k_nmm_per_rad", cfg.spring_k);
  cfg.rod_len = number(f, "rod_len_mm", cfg.rod_len);
  degrees("step_deg", cfg.step);
  cfg.step_count = integer(f, "step_count", cfg.step_count);
  return cfg;
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("output format must be 'csv' or 'json'");
}

RunConfig parse_config(const json& doc) {
  only_keys(doc, "config", {"fingertip", "sweep", "pointer", "output"});
  RunConfig rc;
  if (doc.contains("fingertip")) {
    rc.fingertip = parse_fingertip(doc.at("fingertip"));
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    only_keys(s, "sweep", {"start_deg", "step_deg", "count"});
    rc.sweep.start_deg = number(s, "start_deg", rc.sweep.start_deg);
    rc.sweep.step_deg = number(s, "step_deg", rc.sweep.step_deg);
    rc.sweep.count = integer(s, "count", rc.sweep.count);
  }
  if (doc.contains("pointer")) {
    const json& p = doc.at("pointer");
    only_keys(p, "pointer", {"psi_max_deg", "points_per_edge"});
    rc.pointer.psi_max_deg = number(p, "psi_max_deg", rc.pointer.psi_max_deg);
    rc.pointer.points_per_edge = integer(p, "points_per_edge", rc.pointer.points_per_edge);
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    only_keys(o, "output", {"format", "path"});
    if (o.contains("format")) {
      if (!o.at("format").is_string()) throw ConfigError("output.format must be a string");
      rc.output.format = parse_format(o.at("format").get<std::string>());
    }
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw ConfigError("output.path must be a string");
      rc.output.path = o.at("path").get<std::string>();
    }
  }
  try {
    rc.fingertip.validate();
  } catch (const ModelError& e) {
    throw ConfigError(std::string("fingertip: ") + e.what());
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

MorphPrimitive parse_primitive(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view mode = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  try {
    if (mode == "flat" && arg.empty()) {
      return MorphPrimitive::flat();
    }
    if (mode == "concave") {
      return MorphPrimitive::concave(deg_to_rad(parse_double(arg)));
    }
    if (mode == "convex") {
      return MorphPrimitive::convex(deg_to_rad(parse_double(arg)));
    }
    if (mode == "tilted") {
      const auto comma = arg.find(',');
      if (comma == std::string_view::npos) {
        throw ConfigError("tilted primitive needs '<x_deg>,<y_deg>'");
      }
      return MorphPrimitive::tilted(deg_to_rad(parse_double(arg.substr(0, comma))),
                                    deg_to_rad(parse_double(arg.substr(comma + 1))));
    }
  } catch (const ModelError& e) {
    throw ConfigError("primitive '" + std::string(text) + "': " + e.what());
  }
  throw ConfigError("unknown primitive '" + std::string(text) + "'");
}

}  // namespace morphtip::cli
