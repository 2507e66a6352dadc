#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness/config.hpp"
#include "morphtip/grasp.hpp"

namespace morphtip::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kModelError = 3 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Results go to `out`, machine-readable error objects to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Command bodies, exposed so tests can compare against the library directly.
nlohmann::ordered_json fk_record(const RunConfig& rc, double theta_deg);
nlohmann::ordered_json ik_record(const RunConfig& rc, double phi_deg, bool bisection = false);
nlohmann::ordered_json state_record(const FingertipState& state);
std::string sweep_table(const RunConfig& rc);

/// One sample of the pointer loop. `pose` labels the eight compass poses and
/// is empty for interpolated samples; the last sample repeats the first pose.
struct PointerSample {
  std::size_t index;
  std::string pose;
  TerraceTilt tilt;  // as settled, rad
  Vec3 tip;          // mm
};

std::vector<PointerSample> pointer_loop(const RunConfig& rc);
std::string pointer_table(const RunConfig& rc);

struct GraspRequest {
  Polyline left;
  Polyline right;
  ObjectXSection object;
  double mu = 0.0;
  std::optional<double> gap;
};

GraspRequest parse_scene(const RunConfig& rc, const nlohmann::json& doc);
GraspScene build_scene(const GraspRequest& req);
nlohmann::ordered_json grasp_report(const GraspScene& scene);

}  // namespace morphtip::cli
