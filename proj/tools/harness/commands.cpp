#include "harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "harness/report.hpp"
#include "morphtip/errors.hpp"

namespace morphtip::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kCradleProbe = 0.1;  // mm

ordered_json point(const Vec2& p) { return ordered_json::array({p.x(), p.y()}); }

ordered_json polyline(const Polyline& line) {
  ordered_json arr = ordered_json::array();
  for (const Vec2& p : line) arr.push_back(point(p));
  return arr;
}

ordered_json per_facet(const std::array<double, 4>& values) {
  return ordered_json{{"+x", rad_to_deg(values[0])},
                      {"-x", rad_to_deg(values[1])},
                      {"+y", rad_to_deg(values[2])},
                      {"-y", rad_to_deg(values[3])}};
}

ordered_json pose_record(const LinkagePose& pose) {
  return ordered_json{{"theta_deg", rad_to_deg(pose.theta)},
                      {"phi_deg", rad_to_deg(pose.phi)},
                      {"B", point(pose.b)},
                      {"C", point(pose.c)},
                      {"CB", point(pose.cb)}};
}

RunConfig config_from(const std::string& path) {
  return path.empty() ? parse_config(json::object()) : load_config(path);
}

void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.output.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(rc.output.path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot write output '" + rc.output.path + "'");
  }
  file << text;
  if (!file) {
    throw ConfigError("failed writing output '" + rc.output.path + "'");
  }
}

std::string table(const std::vector<std::string>& header, const std::vector<ordered_json>& rows,
                  OutputFormat format) {
  if (format == OutputFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back(r);
    return dump(arr, 2) + "\n";
  }
  std::string csv;
  for (std::size_t i = 0; i < header.size(); ++i) {
    csv += (i ? "," : "") + header[i];
  }
  csv += '\n';
  for (const auto& r : rows) {
    bool first = true;
    for (const auto& key : header) {
      if (!first) csv += ',';
      first = false;
      const auto& v = r.at(key);
      csv += v.is_string() ? v.get<std::string>() : dump(v);
    }
    csv += '\n';
  }
  return csv;
}

Vec2 vec2(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string(what) + " must be a [x, y] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ordered_json error_object(std::string_view kind, const std::string& message) {
  return ordered_json{{"error", ordered_json{{"kind", kind}, {"message", message}}}};
}

ordered_json model_error_object(const ModelError& e) {
  ordered_json obj = error_object(to_string(e.kind()), e.what());
  auto& body = obj["error"];
  if (const auto* u = dynamic_cast<const UnreachableError*>(&e)) {
    body["attainable_deg"] =
        ordered_json::array({rad_to_deg(u->attainable_lo()), rad_to_deg(u->attainable_hi())});
  } else if (const auto* o = dynamic_cast<const OutOfRangeError*>(&e); o && o->step()) {
    body["step"] = *o->step();
  } else if (const auto* p = dynamic_cast<const PenetrationError*>(&e)) {
    body["witness_mm"] = point(p->witness());
    body["depth_mm"] = p->depth();
  }
  return obj;
}

// Pointer walks counter-clockwise from +x. Each entry is the
// terrace tilt (x-plane, y-plane) in units of psi_max.
struct PointerPose {
  const char* label;
  double tx;
  double ty;
};
constexpr PointerPose kPointerLoop[] = {
    {"E", -1, 0}, {"NE", -1, -1}, {"N", 0, -1}, {"NW", 1, -1},
    {"W", 1, 0},  {"SW", 1, 1},   {"S", 0, 1},  {"SE", -1, 1},
};

}  // namespace

ordered_json fk_record(const RunConfig& rc, double theta_deg) {
  const double theta = deg_to_rad(theta_deg);
  if (!rc.fingertip.range.contains(theta)) {
    throw OutOfRangeError("theta " + format_number(theta_deg) + " deg outside the operating range");
  }
  return pose_record(solve_forward(rc.fingertip.linkage, theta));
}

ordered_json ik_record(const RunConfig& rc, double phi_deg, bool bisection) {
  const double phi = deg_to_rad(phi_deg);
  const auto& f = rc.fingertip;
  const double theta = bisection ? inverse_facet_bisection(f.linkage, phi, f.range)
                                 : inverse_facet(f.linkage, phi, f.range);
  return pose_record(solve_forward(f.linkage, theta));
}

ordered_json state_record(const FingertipState& s) {
  return ordered_json{
      {"thetas_deg", per_facet(s.thetas)},
      {"phis_deg", per_facet(s.phis)},
      {"terrace_deg", ordered_json{{"x", rad_to_deg(s.terrace.x)}, {"y", rad_to_deg(s.terrace.y)}}},
      {"collinearity", ordered_json{{"x", s.collinearity[0]}, {"y", s.collinearity[1]}}},
      {"profile_x_mm", polyline(s.profile_x)},
      {"profile_y_mm", polyline(s.profile_y)},
  };
}

std::string sweep_table(const RunConfig& rc) {
  const SweepSpec& sw = rc.sweep;
  if (sw.count < 2) throw ConfigError("sweep.count must be at least 2");
  if (sw.step_deg == 0.0 || !std::isfinite(sw.step_deg) || !std::isfinite(sw.start_deg)) {
    throw ConfigError("sweep.step_deg must be finite and non-zero");
  }
  const auto& f = rc.fingertip;
  std::vector<ordered_json> rows;
  std::vector<double> phis;
  for (int i = 0; i < sw.count; ++i) {
    const std::size_t step = static_cast<std::size_t>(i) + 1;
    const double theta_deg = sw.start_deg + i * sw.step_deg;
    const double theta = deg_to_rad(theta_deg);
    if (theta < f.range.theta_min - 1e-12 || theta > f.range.theta_max + 1e-12) {
      throw OutOfRangeError("sweep leaves the operating range at theta " +
                                format_number(theta_deg) + " deg",
                            step);
    }
    LinkagePose pose;
    try {
      pose = solve_forward(f.linkage, theta);
    } catch (const OutOfRangeError& e) {
      throw OutOfRangeError(e.what(), step);
    }
    phis.push_back(pose.phi);
    rows.push_back(ordered_json{{"step", step},
                                {"theta_deg", theta_deg},
                                {"phi_deg", rad_to_deg(pose.phi)},
                                {"B_x_mm", pose.b.x()},
                                {"B_y_mm", pose.b.y()}});
  }
  const bool rising = phis.back() > phis.front();
  for (std::size_t i = 1; i < phis.size(); ++i) {
    if ((phis[i] > phis[i - 1]) != rising || phis[i] == phis[i - 1]) {
      throw OutOfRangeError("facet angle is not strictly monotone along the sweep", i + 1);
    }
  }
  return table({"step", "theta_deg", "phi_deg", "B_x_mm", "B_y_mm"}, rows, rc.output.format);
}

std::vector<PointerSample> pointer_loop(const RunConfig& rc) {
  const PointerSpec& ps = rc.pointer;
  if (ps.points_per_edge < 1) throw ConfigError("pointer.points_per_edge must be at least 1");
  if (!std::isfinite(ps.psi_max_deg) || ps.psi_max_deg < 0.0) {
    throw ConfigError("pointer.psi_max_deg must be finite and >= 0");
  }
  const double m = deg_to_rad(ps.psi_max_deg);
  const std::size_t poses = std::size(kPointerLoop);
  std::vector<PointerSample> samples;
  for (std::size_t p = 0; p <= poses; ++p) {
    const PointerPose& a = kPointerLoop[p % poses];
    const PointerPose& b = kPointerLoop[(p + 1) % poses];
    const int subdivisions = p == poses ? 1 : ps.points_per_edge;
    for (int k = 0; k < subdivisions; ++k) {
      const double t = static_cast<double>(k) / ps.points_per_edge;
      const double tx = m * (a.tx + t * (b.tx - a.tx));
      const double ty = m * (a.ty + t * (b.ty - a.ty));
      const FingertipState s = plan_primitive(rc.fingertip, MorphPrimitive::tilted(tx, ty));
      samples.push_back({samples.size(), k == 0 ? a.label : "", s.terrace,
                         pointer_for_tilt(rc.fingertip, s.terrace)});
    }
  }
  return samples;
}

std::string pointer_table(const RunConfig& rc) {
  std::vector<ordered_json> rows;
  for (const PointerSample& s : pointer_loop(rc)) {
    rows.push_back(ordered_json{{"index", s.index},
                                {"pose", s.pose},
                                {"psi_x_deg", rad_to_deg(s.tilt.x)},
                                {"psi_y_deg", rad_to_deg(s.tilt.y)},
                                {"x_mm", s.tip.x()},
                                {"y_mm", s.tip.y()},
                                {"z_mm", s.tip.z()}});
  }
  return table({"index", "pose", "psi_x_deg", "psi_y_deg", "x_mm", "y_mm", "z_mm"}, rows,
               rc.output.format);
}

GraspRequest parse_scene(const RunConfig& rc, const json& doc) {
  if (!doc.is_object()) throw ConfigError("scene must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "plane" && key != "left" && key != "right" && key != "object" && key != "mu" &&
        key != "gap_mm") {
      throw ConfigError("unknown key '" + key + "' in scene");
    }
  }
  const std::string plane = doc.value("plane", std::string("x"));
  if (plane != "x" && plane != "y") throw ConfigError("scene.plane must be 'x' or 'y'");
  const Plane which = plane == "x" ? Plane::X : Plane::Y;

  auto profile = [&](const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_string()) {
      throw ConfigError(std::string("scene.") + key + " must be a primitive string");
    }
    const MorphPrimitive prim = parse_primitive(doc.at(key).get<std::string>());
    return plan_primitive(rc.fingertip, prim).profile(which);
  };

  GraspRequest req;
  req.left = profile("left");
  req.right = profile("right");

  if (!doc.contains("object") || !doc.at("object").is_object()) {
    throw ConfigError("scene.object must be an object");
  }
  const json& obj = doc.at("object");
  const std::string type = obj.value("type", std::string());
  try {
    if (type == "circle") {
      if (!obj.contains("radius_mm") || !obj.at("radius_mm").is_number()) {
        throw ConfigError("circle needs radius_mm");
      }
      const Vec2 center = obj.contains("center_mm") ? vec2(obj.at("center_mm"), "center_mm")
                                                    : Vec2::Zero();
      req.object = Circle{obj.at("radius_mm").get<double>(), center};
    } else if (type == "polygon") {
      if (!obj.contains("vertices_mm") || !obj.at("vertices_mm").is_array()) {
        throw ConfigError("polygon needs vertices_mm");
      }
      std::vector<Vec2> verts;
      for (const auto& v : obj.at("vertices_mm")) verts.push_back(vec2(v, "vertex"));
      req.object = ConvexPolygon(std::move(verts));
    } else if (type == "square") {
      if (!obj.contains("side_mm") || !obj.at("side_mm").is_number()) {
        throw ConfigError("square needs side_mm");
      }
      const Vec2 center = obj.contains("center_mm") ? vec2(obj.at("center_mm"), "center_mm")
                                                    : Vec2::Zero();
      req.object = ConvexPolygon::square(obj.at("side_mm").get<double>(), center);
    } else {
      throw ConfigError("scene.object.type must be circle, polygon or square");
    }
  } catch (const ModelError& e) {
    throw ConfigError(std::string("scene.object: ") + e.what());
  }

  if (doc.contains("mu")) {
    if (!doc.at("mu").is_number()) throw ConfigError("scene.mu must be a number");
    req.mu = doc.at("mu").get<double>();
  }
  if (doc.contains("gap_mm")) {
    if (!doc.at("gap_mm").is_number()) throw ConfigError("scene.gap_mm must be a number");
    req.gap = doc.at("gap_mm").get<double>();
  }
  return req;
}

GraspScene build_scene(const GraspRequest& req) {
  if (!req.gap) {
    return seat_object(req.left, req.right, req.object, req.mu);
  }
  GraspScene scene;
  scene.left_profile = req.left;
  scene.right_profile = req.right;
  scene.gap = *req.gap;
  scene.object = req.object;
  scene.mu = req.mu;
  scene.validate();
  return scene;
}

ordered_json grasp_report(const GraspScene& scene) {
  const std::vector<Contact> contacts = find_contacts(scene);
  ordered_json list = ordered_json::array();
  for (const Contact& c : contacts) {
    list.push_back(ordered_json{{"side", c.side == Side::Left ? "left" : "right"},
                                {"segment", c.segment},
                                {"point_mm", point(c.point)},
                                {"normal", point(c.normal)}});
  }
  ordered_json cradle = nullptr;
  if (const auto* circle = std::get_if<Circle>(&scene.object)) {
    const double u = circle->center.y();
    try {
      const auto h = [&](double at) {
        return cradle_height(scene.left_profile, scene.right_profile, circle->radius, at);
      };
      const double curvature = h(u + kCradleProbe) + h(u - kCradleProbe) - 2.0 * h(u);
      cradle = curvature > 1e-12 ? 1 : (curvature < -1e-12 ? -1 : 0);
    } catch (const ModelError& e) {
      if (e.kind() != ErrorKind::Unsupported) throw;
    }
  }
  return ordered_json{{"gap_mm", scene.gap},
                      {"contacts", list},
                      {"pivot_feasible", pivot_feasible(contacts)},
                      {"closure_class", to_string(closure_classify(contacts, scene.mu))},
                      {"cradle_curvature_sign", cradle}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinematics and grasp analysis for a four-facet morphing fingertip", "morphtip"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config (degrees, millimetres)");
  };

  double theta_deg = 0.0;
  auto* fk = app.add_subcommand("fk", "Facet angle for a servo angle");
  fk->add_option("--theta", theta_deg, "Servo angle, deg")->required();
  add_config(fk);

  double phi_deg = 0.0;
  bool bisection = false;
  auto* ik = app.add_subcommand("ik", "Servo angle for a facet angle");
  ik->add_option("--phi", phi_deg, "Facet angle, deg")->required();
  ik->add_flag("--bisection", bisection, "Use the bracketed root-finder");
  add_config(ik);

  std::string mode;
  std::string from;
  auto* plan = app.add_subcommand("plan", "Plan a morphing primitive or a transition");
  plan->add_option("--mode", mode, "flat | concave:<deg> | convex:<deg> | tilted:<x>,<y>")->required();
  plan->add_option("--from", from, "Start primitive; emits the transition trajectory");
  add_config(plan);

  std::optional<double> start;
  std::optional<double> step;
  std::optional<int> count;
  std::string out_path;
  std::string format;
  auto* sweep = app.add_subcommand("sweep", "Angular stroke sweep (CSV)");
  sweep->add_option("--start", start, "First servo angle, deg");
  sweep->add_option("--step", step, "Increment, deg");
  sweep->add_option("--count", count, "Number of rows");
  sweep->add_option("--out", out_path, "Output file (default stdout)");
  sweep->add_option("--format", format, "csv | json");
  add_config(sweep);

  std::optional<double> psi_max;
  std::optional<int> per_edge;
  auto* trace = app.add_subcommand("trace-pointer", "Pointer-top loop over the eight planar poses");
  trace->add_option("--psi-max", psi_max, "Tilt magnitude, deg");
  trace->add_option("--points-per-edge", per_edge, "Samples between adjacent poses");
  trace->add_option("--out", out_path, "Output file (default stdout)");
  trace->add_option("--format", format, "csv | json");
  add_config(trace);

  std::string scene_path;
  auto* grasp = app.add_subcommand("grasp", "Contact and closure report for a scene");
  grasp->add_option("--scene", scene_path, "Scene JSON")->required();
  add_config(grasp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << dump(error_object("ConfigError", e.what())) << '\n';
    return kConfigError;
  }

  try {
    RunConfig rc = config_from(config_path);
    if (!out_path.empty()) rc.output.path = out_path;
    if (!format.empty()) rc.output.format = parse_format(format);

    if (*fk) {
      out << dump(fk_record(rc, theta_deg)) << '\n';
    } else if (*ik) {
      out << dump(ik_record(rc, phi_deg, bisection)) << '\n';
    } else if (*plan) {
      const MorphPrimitive target = parse_primitive(mode);
      if (from.empty()) {
        ordered_json rec{{"mode", mode}};
        rec.update(state_record(plan_primitive(rc.fingertip, target)));
        out << dump(rec, 2) << '\n';
      } else {
        ordered_json states = ordered_json::array();
        for (const auto& s : transition_trajectory(rc.fingertip, parse_primitive(from), target)) {
          states.push_back(state_record(s));
        }
        out << dump(ordered_json{{"from", from}, {"to", mode}, {"trajectory", states}}, 2) << '\n';
      }
    } else if (*sweep) {
      if (start) rc.sweep.start_deg = *start;
      if (step) rc.sweep.step_deg = *step;
      if (count) rc.sweep.count = *count;
      emit(rc, sweep_table(rc), out);
    } else if (*trace) {
      if (psi_max) rc.pointer.psi_max_deg = *psi_max;
      if (per_edge) rc.pointer.points_per_edge = *per_edge;
      emit(rc, pointer_table(rc), out);
    } else if (*grasp) {
      std::ifstream in(scene_path);
      if (!in) throw ConfigError("cannot open scene '" + scene_path + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene is not valid JSON: ") + e.what());
      }
      out << dump(grasp_report(build_scene(parse_scene(rc, doc))), 2) << '\n';
    }
  } catch (const ConfigError& e) {
    err << dump(error_object("ConfigError", e.what())) << '\n';
    return kConfigError;
  } catch (const ModelError& e) {
    err << dump(model_error_object(e)) << '\n';
    return e.kind() == ErrorKind::InvalidParams ? kConfigError : kModelError;
  }
  return kOk;
}

}  // namespace morphtip::cli
