#pragma once

// Planar cross-section grasp model for two opposing fingertips on a parallel
// gripper.
//
// Profiles are stored in fingertip-local coordinates (s, n): s runs along the
// surface, n along the surface normal, solid material below the profile. The
// left fingertip's ball joint sits at world (-gap/2, 0) facing +x, the right
// one is its mirror image at (+gap/2, 0) facing -x; s maps to world y for both.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "morphtip/fingertip.hpp"

namespace morphtip {

struct Circle {
  double radius;
  Vec2 center;
};

/// Convex polygon with counter-clockwise vertices.
class ConvexPolygon {
 public:
  /// Throws ModelError(InvalidParams) unless the vertices form a strictly
  /// convex counter-clockwise polygon with at least three vertices.
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  /// Axis-aligned square of side `side` centred at `center`.
  static ConvexPolygon square(double side, const Vec2& center = Vec2::Zero());

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  Vec2 centroid() const;
  ConvexPolygon translated(const Vec2& offset) const;

 private:
  std::vector<Vec2> vertices_;
};

using ObjectXSection = std::variant<Circle, ConvexPolygon>;

enum class Side { Left, Right };

struct Contact {
  Vec2 point;   // world frame, mm
  Vec2 normal;  // unit, pointing into the object
  Side side;
  std::size_t segment;  // index of the profile segment (or vertex) touched
};

struct GraspScene {
  Polyline left_profile;   // local frame
  Polyline right_profile;  // local frame
  double gap = 0.0;        // ball joint to ball joint, mm
  ObjectXSection object = Circle{1.0, Vec2::Zero()};
  double mu = 0.0;

  /// Throws ModelError(InvalidParams) on a non-positive gap, negative mu, a
  /// bad object, or profiles that are not simple polylines monotone in s.
  void validate() const;

  Polyline world_profile(Side side) const;
};

/// Maps a local profile point into the world frame for `side`.
Vec2 to_world(const Vec2& local, Side side, double gap);

/// Places `object` between the two profiles as a closing parallel gripper
/// would: shifts it along x and picks the gap so that it touches both sides.
GraspScene seat_object(Polyline left, Polyline right, const ObjectXSection& object, double mu);

/// Height of the profile above s, or nothing when s is outside its span.
std::optional<double> profile_height(const Polyline& local, double s);

bool is_simple(const Polyline& line);

/// Every touching point between object and profiles within 1e-7 mm,
/// deduplicated within 1e-4 mm. Throws PenetrationError when the object
/// overlaps a profile by more than 1e-6 mm.
std::vector<Contact> find_contacts(const GraspScene& scene);

/// Resting centre height of a circle lowered onto one local profile at
/// lateral offset u. Throws ModelError(Unsupported) if nothing supports it.
double rest_height(const Polyline& local, double radius, double u);

/// Mean of the left and right rest heights: half the closing gap needed, the
/// squeeze potential that centres the object.
double cradle_height(const Polyline& left, const Polyline& right, double radius, double u);

enum class Closure { None, ForceClosure, FormClosure };

std::string_view to_string(Closure c);

/// Planar wrench (fx, fy, torque) of a unit force along `force` applied at
/// `point`, torque taken about `ref` and divided by `length`.
Eigen::Vector3d planar_wrench(const Vec2& point, const Vec2& force, const Vec2& ref, double length);

/// True iff the rays spanned by `wrenches` cover all of R^3 with margin:
/// no non-zero direction c has c . w >= -1e-9 for every unit-scaled w.
bool positively_spans(std::span<const Eigen::Vector3d> wrenches);

/// Frictionless normal wrenches positively span the wrench space.
bool form_closure(std::span<const Contact> contacts);

/// Two-edge friction cones with coefficient mu positively span it.
bool force_closure(std::span<const Contact> contacts, double mu);

/// FormClosure if frictionless normals already close the grasp, ForceClosure
/// if the two-edge friction cones do, None otherwise. Throws
/// ModelError(Degenerate) when two or more contacts all coincide.
Closure closure_classify(std::span<const Contact> contacts, double mu);

/// One contact per side with anti-parallel, collinear normals (1e-3 rad): a
/// pinch line the object can pivot about.
bool pivot_feasible(std::span<const Contact> contacts);

}  // namespace morphtip
