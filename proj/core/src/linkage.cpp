#include "morphtip/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "morphtip/errors.hpp"

namespace morphtip {

namespace {

constexpr double kPi = std::numbers::pi;
// Slack allowed when a closed-form root lands a hair outside the range ends.
constexpr double kRangeSlack = 1e-9;

bool finite(double v) { return std::isfinite(v); }

std::string fmt_deg(double rad) {
  std::ostringstream os;
  os << rad_to_deg(rad) << " deg";
  return os.str();
}

void require_finite(double v, const char* what) {
  if (!finite(v)) {
    throw ModelError(ErrorKind::InvalidParams, std::string(what) + " is not finite");
  }
}

// Servo angles whose slider B lies on the ray from `hinge` with direction
// `angle`. Writing the ray condition (B - H) x dir = 0 with
// B = oa + l_ab (sin a, cos a) gives
//   l_ab cos(a + angle) = (oa.x - H.x) sin(angle) - (oa.y - H.y) cos(angle),
// two crank angles per turn; only forward hits with a in (0, pi) and the
// slider outward of the hinge are kept.
std::vector<double> ray_solutions(const LinkageParams& p, const Vec2& hinge, double angle) {
  const double s = std::sin(angle);
  const double c = std::cos(angle);
  const Vec2 d = p.oa() - hinge;
  const double q = (d.x() * s - d.y() * c) / p.l_ab();
  std::vector<double> thetas;
  if (q < -1.0 || q > 1.0) {
    return thetas;
  }
  const double base = std::acos(q);
  for (double sum : {base, -base}) {
    double a = std::remainder(sum - angle, 2.0 * kPi);
    if (!(a > 0.0 && a < kPi)) {
      continue;
    }
    const Vec2 b = p.oa() + p.l_ab() * Vec2(std::sin(a), std::cos(a));
    const Vec2 hb = b - hinge;
    if (hb.x() <= 0.0 || hb.dot(Vec2(c, s)) <= 0.0) {
      continue;
    }
    thetas.push_back(p.alpha0() - a);
  }
  return thetas;
}

std::optional<double> pick_in_range(const std::vector<double>& candidates,
                                    const OperatingRange& range) {
  std::optional<double> best;
  for (double t : candidates) {
    if (t < range.theta_min - kRangeSlack || t > range.theta_max + kRangeSlack) {
      continue;
    }
    t = std::clamp(t, range.theta_min, range.theta_max);
    if (!best || std::abs(t) < std::abs(*best)) {
      best = t;
    }
  }
  return best;
}

[[noreturn]] void throw_unreachable(const char* what, double target, double lo, double hi) {
  std::ostringstream os;
  os << what << " " << rad_to_deg(target) << " deg is outside the attainable interval ["
     << rad_to_deg(lo) << ", " << rad_to_deg(hi) << "] deg";
  throw UnreachableError(os.str(), lo, hi);
}

}  // namespace

LinkageParams LinkageParams::neutral_flat(double l_oc, double l_ab, double oa_x, double alpha0) {
  return make(l_oc, l_ab, Vec2(oa_x, -l_ab * std::cos(alpha0)), alpha0);
}

LinkageParams LinkageParams::make(double l_oc, double l_ab, const Vec2& oa, double alpha0) {
  require_finite(l_oc, "l_oc");
  require_finite(l_ab, "l_ab");
  require_finite(oa.x(), "oa.x");
  require_finite(oa.y(), "oa.y");
  require_finite(alpha0, "alpha0");
  if (l_oc <= 0.0 || l_ab <= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "link lengths must be positive");
  }
  if (!(alpha0 > 0.0 && alpha0 < kPi / 2.0)) {
    throw ModelError(ErrorKind::InvalidParams, "alpha0 must lie in (0, 90) deg");
  }
  const double flat_residual = oa.y() + l_ab * std::cos(alpha0);
  if (std::abs(flat_residual) > 1e-9 * std::max(1.0, l_ab)) {
    throw ModelError(ErrorKind::InvalidParams,
                     "neutral-flatness violated: oa.y must equal -l_ab cos(alpha0)");
  }
  if (oa.x() + l_ab * std::sin(alpha0) - l_oc <= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "slider must lie outward of the hinge at neutral");
  }
  return LinkageParams(l_oc, l_ab, oa, alpha0);
}

LinkageParams LinkageParams::defaults() {
  return neutral_flat(15.0, 20.0, 12.0, deg_to_rad(30.0));
}

void OperatingRange::validate() const {
  require_finite(theta_min, "theta_min");
  require_finite(theta_max, "theta_max");
  if (!(theta_min < theta_max)) {
    throw ModelError(ErrorKind::InvalidParams, "operating range must satisfy theta_min < theta_max");
  }
}

Vec2 slider_position(const LinkageParams& params, double theta) {
  require_finite(theta, "theta");
  const double a = params.alpha0() - theta;
  if (!(a > 0.0 && a < kPi)) {
    throw OutOfRangeError("crank angle leaves (0, 180) deg at theta = " + fmt_deg(theta));
  }
  return params.oa() + params.l_ab() * Vec2(std::sin(a), std::cos(a));
}

LinkagePose solve_forward(const LinkageParams& params, double theta) {
  LinkagePose pose;
  pose.theta = theta;
  pose.b = slider_position(params, theta);
  pose.c = Vec2(params.l_oc(), 0.0);
  pose.cb = pose.b - pose.c;
  if (pose.cb.x() <= 0.0) {
    throw OutOfRangeError("slider passes inside the hinge (jam) at theta = " + fmt_deg(theta));
  }
  pose.phi = std::atan2(pose.cb.y(), pose.cb.x());
  return pose;
}

double forward_facet(const LinkageParams& params, double theta) {
  return solve_forward(params, theta).phi;
}

std::pair<double, double> facet_range(const LinkageParams& params, const OperatingRange& range) {
  return {forward_facet(params, range.theta_min), forward_facet(params, range.theta_max)};
}

double inverse_facet(const LinkageParams& params, double phi, const OperatingRange& range) {
  require_finite(phi, "phi");
  const auto [lo, hi] = facet_range(params, range);
  const auto theta =
      pick_in_range(ray_solutions(params, Vec2(params.l_oc(), 0.0), phi), range);
  if (!theta) {
    throw_unreachable("facet angle", phi, lo, hi);
  }
  return *theta;
}

double inverse_facet_bisection(const LinkageParams& params, double phi,
                               const OperatingRange& range) {
  require_finite(phi, "phi");
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  auto residual = [&](double theta) {
    const Vec2 cb = solve_forward(params, theta).cb;
    return cb.y() * c - cb.x() * s;
  };
  double lo = range.theta_min;
  double hi = range.theta_max;
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  if (r_lo == 0.0) return lo;
  if (r_hi == 0.0) return hi;
  if ((r_lo > 0.0) == (r_hi > 0.0)) {
    const auto [phi_lo, phi_hi] = facet_range(params, range);
    throw_unreachable("facet angle", phi, phi_lo, phi_hi);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (r == 0.0) {
      return mid;
    }
    if ((r > 0.0) == (r_hi > 0.0)) {
      hi = mid;
      r_hi = r;
    } else {
      lo = mid;
      r_lo = r;
    }
  }
  return 0.5 * (lo + hi);
}

PlanarReading planar_condition_angle(const LinkageParams& params, double theta) {
  const Vec2 ob = slider_position(params, theta);
  if (ob.x() <= 0.0) {
    throw OutOfRangeError("slider crosses the ball joint plumb line at theta = " + fmt_deg(theta));
  }
  return {std::atan2(ob.y(), ob.x()), ob.norm()};
}

std::pair<double, double> planar_range(const LinkageParams& params, const OperatingRange& range) {
  return {planar_condition_angle(params, range.theta_min).angle,
          planar_condition_angle(params, range.theta_max).angle};
}

double inverse_planar(const LinkageParams& params, double angle, const OperatingRange& range) {
  require_finite(angle, "planar angle");
  // Neutral flatness puts B on the x axis at theta = 0.
  if (angle == 0.0 && range.contains(0.0)) {
    return 0.0;
  }
  const auto theta = pick_in_range(ray_solutions(params, Vec2::Zero(), angle), range);
  if (!theta) {
    const auto [lo, hi] = planar_range(params, range);
    throw_unreachable("planar angle", angle, lo, hi);
  }
  return *theta;
}

double max_planar_tilt(const LinkageParams& params, const OperatingRange& range) {
  const auto [lo, hi] = planar_range(params, range);
  return std::max(0.0, std::min(hi, -lo));
}

PlanarPair solve_planar_pair(const LinkageParams& params, double tilt,
                             const OperatingRange& range) {
  require_finite(tilt, "tilt");
  const double limit = max_planar_tilt(params, range);
  if (std::abs(tilt) > limit + 1e-12) {
    throw_unreachable("planar tilt", tilt, -limit, limit);
  }
  return {inverse_planar(params, tilt, range), inverse_planar(params, -tilt, range)};
}

double planar_collinearity_residual(const LinkageParams& params, double theta_pos,
                                    double theta_neg) {
  const Vec2 ob1 = slider_position(params, theta_pos);
  const Vec2 own = slider_position(params, theta_neg);
  const Vec2 ob2(-own.x(), own.y());
  const double cross = ob1.x() * ob2.y() - ob1.y() * ob2.x();
  return std::abs(cross) / (ob1.norm() * ob2.norm());
}

}  // namespace morphtip
