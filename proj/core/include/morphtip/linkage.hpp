#pragma once

// Planar slider-crank half of the fingertip transmission.
//
// Frame: origin at the ball joint O, x horizontal and outward, y up. The
// terrace hinge C sits at (l_oc, 0). The servo axis A sits at `oa`, the crank
// AB has length l_ab and makes the angle a = alpha0 - theta with the plumb
// line. The slider B rides on the facet guide CB, so the facet angle phi is
// the direction of CB measured from +x. Positive theta raises the facet
// (concave), negative theta lowers it (convex).

#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace morphtip {

using Vec2 = Eigen::Vector2d;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

class LinkageParams {
 public:
  /// Builds parameters with oa.y derived from the neutral-flatness constraint
  /// oa.y = -l_ab cos(alpha0).
  static LinkageParams neutral_flat(double l_oc, double l_ab, double oa_x, double alpha0);

  /// Builds fully specified parameters. Throws ModelError(InvalidParams) if any
  /// value is non-finite, a length is not positive, alpha0 is outside
  /// (0, pi/2), oa.y violates the neutral-flatness constraint, or the slider
  /// is not outward of the hinge at neutral.
  static LinkageParams make(double l_oc, double l_ab, const Vec2& oa, double alpha0);

  /// Placeholder geometry used when no config overrides it.
  static LinkageParams defaults();

  double l_oc() const noexcept { return l_oc_; }
  double l_ab() const noexcept { return l_ab_; }
  const Vec2& oa() const noexcept { return oa_; }
  double alpha0() const noexcept { return alpha0_; }

 private:
  LinkageParams(double l_oc, double l_ab, const Vec2& oa, double alpha0)
      : l_oc_(l_oc), l_ab_(l_ab), oa_(oa), alpha0_(alpha0) {}

  double l_oc_;
  double l_ab_;
  Vec2 oa_;
  double alpha0_;
};

/// Closed servo-angle interval [theta_min, theta_max], radians.
struct OperatingRange {
  double theta_min = deg_to_rad(-18.0);
  double theta_max = deg_to_rad(18.0);

  bool contains(double theta) const noexcept {
    return theta >= theta_min && theta <= theta_max;
  }
  void validate() const;
};

/// Everything the vector chain produces for one servo angle.
struct LinkagePose {
  double theta;
  double phi;
  Vec2 b;   // slider position
  Vec2 c;   // hinge position
  Vec2 cb;  // guide vector C -> B
};

/// Position of slider B for servo angle theta. Throws OutOfRange if the
/// crank angle alpha0 - theta leaves (0, pi).
Vec2 slider_position(const LinkageParams& params, double theta);

LinkagePose solve_forward(const LinkageParams& params, double theta);

/// Facet angle for servo angle theta; throws OutOfRange on jam (CB.x <= 0).
double forward_facet(const LinkageParams& params, double theta);

/// Attainable facet interval [phi(theta_min), phi(theta_max)].
std::pair<double, double> facet_range(const LinkageParams& params, const OperatingRange& range);

/// Closed-form inverse. Throws UnreachableError carrying the attainable
/// interval when no servo angle in `range` produces `phi`.
double inverse_facet(const LinkageParams& params, double phi, const OperatingRange& range = {});

/// Bracketed bisection over `range` on the guide-direction residual; the
/// cross-check route for inverse_facet.
double inverse_facet_bisection(const LinkageParams& params, double phi,
                               const OperatingRange& range = {});

struct PlanarReading {
  double angle;      // polar angle of B seen from O
  double magnitude;  // |OB|, the dependent l_ob
};

PlanarReading planar_condition_angle(const LinkageParams& params, double theta);

std::pair<double, double> planar_range(const LinkageParams& params, const OperatingRange& range);

/// Servo angle whose slider lies on the ray from O at `angle`.
double inverse_planar(const LinkageParams& params, double angle, const OperatingRange& range = {});

struct PlanarPair {
  double theta_pos;  // half on the +axis side, rises for positive tilt
  double theta_neg;  // mirrored opposing half
};

/// Servo pair that puts B1, O, B2 on one straight line tilted by `tilt`.
PlanarPair solve_planar_pair(const LinkageParams& params, double tilt,
                             const OperatingRange& range = {});

/// |OB1 x OB2| / (|OB1| |OB2|) with OB2 mirrored into the common frame.
double planar_collinearity_residual(const LinkageParams& params, double theta_pos,
                                    double theta_neg);

/// Attainable symmetric tilt magnitude for solve_planar_pair.
double max_planar_tilt(const LinkageParams& params, const OperatingRange& range);

}  // namespace morphtip
