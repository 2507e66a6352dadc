#pragma once

// Four-facet fingertip assembled from two orthogonal, decoupled linkage
// planes. The x plane carries facets +x and -x, the y plane carries +y and -y.
// Inside one plane the -side half is the mirror image of the +side half, so
// both halves share LinkageParams and report angles in their own outward
// frame.

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "morphtip/linkage.hpp"

namespace morphtip {

using Vec3 = Eigen::Vector3d;
using Polyline = std::vector<Vec2>;

enum class Facet : std::size_t { PosX = 0, NegX = 1, PosY = 2, NegY = 3 };

enum class Plane { X, Y };

struct FingertipConfig {
  LinkageParams linkage = LinkageParams::defaults();
  OperatingRange range{};
  double facet_len = 17.5;  // hinge C to facet tip, mm
  double spring_k = 10.0;   // crease stiffness, N mm / rad
  double rod_len = 100.0;   // pointer rod, mm
  double step = deg_to_rad(3.0);
  int step_count = 13;

  /// Throws ModelError(InvalidParams) on a non-positive length, stiffness or
  /// step, or if the operating range jams the linkage.
  void validate() const;
};

struct Flat {};
struct Convex {
  double depth;  // facet angle, < 0
};
struct Concave {
  double depth;  // facet angle, > 0
};
struct TiltedPlanar {
  double phi_x;  // tilt of the x-plane line, +x side up
  double phi_y;  // tilt of the y-plane line, +y side up
};

class MorphPrimitive {
 public:
  using Variant = std::variant<Flat, Convex, Concave, TiltedPlanar>;

  static MorphPrimitive flat() { return MorphPrimitive(Flat{}); }
  static MorphPrimitive convex(double depth);
  static MorphPrimitive concave(double depth);
  static MorphPrimitive tilted(double phi_x, double phi_y);

  const Variant& value() const noexcept { return value_; }

 private:
  explicit MorphPrimitive(Variant v) : value_(v) {}
  Variant value_;
};

/// Orientation of the terrace in the two fingertip planes.
struct TerraceTilt {
  double x = 0.0;  // x-plane tilt, +x edge up
  double y = 0.0;  // y-plane tilt, +y edge up
};

struct FingertipState {
  std::array<double, 4> thetas{};  // indexed by Facet
  std::array<double, 4> phis{};    // forward_facet(thetas[i])
  TerraceTilt terrace;
  Polyline profile_x;  // [tip -x, C -x, C +x, tip +x]
  Polyline profile_y;
  std::array<double, 2> collinearity{};  // B1-O-B2 residual per plane

  double theta(Facet f) const { return thetas[static_cast<std::size_t>(f)]; }
  double phi(Facet f) const { return phis[static_cast<std::size_t>(f)]; }
  const Polyline& profile(Plane p) const { return p == Plane::X ? profile_x : profile_y; }
};

struct ExternalLoad {
  double tau_x = 0.0;  // torque driving the x-plane tilt, N mm
  double tau_y = 0.0;
};

/// Argmin of E(psi) = k/2 [(phi_pos - psi)^2 + (phi_neg + psi)^2] - tau psi with
/// facet angles frozen. phi_pos and phi_neg are outward-frame facet angles of
/// one opposing pair.
double terrace_equilibrium(double phi_pos, double phi_neg, double spring_k, double load_torque = 0.0);

/// Crease-spring energy of one plane when the hinge follows the terrace: each
/// facet lies along C(psi) -> B instead of its neutral-hinge FK direction.
double crease_energy(const FingertipConfig& cfg, double theta_pos, double theta_neg, double psi,
                     double load_torque = 0.0);

/// Terrace tilt minimising crease_energy over |psi| < 45 deg. Equals 0 for
/// symmetric actuation and the planar tilt when B1, O, B2 are collinear.
double settle_terrace(const FingertipConfig& cfg, double theta_pos, double theta_neg,
                      double load_torque = 0.0);

/// Cross-section polyline of one plane, ordered from the -side tip to the
/// +side tip. Throws OutOfRange if a slider would sit inside its hinge.
Polyline surface_profile(const FingertipConfig& cfg, double theta_pos, double theta_neg, double psi);

FingertipState plan_primitive(const FingertipConfig& cfg, const MorphPrimitive& prim);

/// Builds the full state for arbitrary servo angles with zero load.
FingertipState state_from_thetas(const FingertipConfig& cfg, const std::array<double, 4>& thetas);

/// Tip of the pointer rod after rotating the terrace normal about x by
/// `about_x`, then about the fixed y axis by `about_y`.
Vec3 pointer_top(const FingertipConfig& cfg, double about_x, double about_y);

/// Pointer tip for a terrace pose: the +x edge rising turns the normal toward
/// -x, the +y edge rising turns it toward -y.
Vec3 pointer_for_tilt(const FingertipConfig& cfg, const TerraceTilt& tilt);

/// Servo-space linear interpolation between two planned primitives with at
/// most cfg.step per servo per step. Throws OutOfRangeError carrying the step
/// index if an intermediate state jams.
std::vector<FingertipState> transition_trajectory(const FingertipConfig& cfg,
                                                  const MorphPrimitive& from,
                                                  const MorphPrimitive& to);

}  // namespace morphtip
