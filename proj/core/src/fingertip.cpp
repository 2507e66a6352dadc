#include "morphtip/fingertip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Geometry>

#include "morphtip/errors.hpp"

namespace morphtip {

namespace {

constexpr double kMaxTerraceTilt = std::numbers::pi / 4.0;
constexpr int kSettleGrid = 720;

std::size_t idx(Facet f) { return static_cast<std::size_t>(f); }

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, std::string(what) + " must be positive and finite");
  }
}

// Facet direction of a half seen from its own outward frame when the terrace
// is tilted by psi in that frame: the guide runs from the displaced hinge
// l_oc (cos psi, sin psi) to the slider.
Vec2 guide(const LinkageParams& p, const Vec2& slider, double psi) {
  return slider - p.l_oc() * Vec2(std::cos(psi), std::sin(psi));
}

double guide_angle(const LinkageParams& p, const Vec2& slider, double psi) {
  const Vec2 g = guide(p, slider, psi);
  return std::atan2(g.y(), g.x());
}

double guide_angle_rate(const LinkageParams& p, const Vec2& slider, double psi) {
  const Vec2 g = guide(p, slider, psi);
  return -p.l_oc() * (std::cos(psi) * g.x() + std::sin(psi) * g.y()) / g.squaredNorm();
}

struct PlaneSliders {
  Vec2 pos;
  Vec2 neg;  // in the mirrored half's own frame
};

double energy_at(const FingertipConfig& cfg, const PlaneSliders& b, double psi, double tau) {
  const double rel_pos = guide_angle(cfg.linkage, b.pos, psi) - psi;
  const double rel_neg = guide_angle(cfg.linkage, b.neg, -psi) + psi;
  return 0.5 * cfg.spring_k * (rel_pos * rel_pos + rel_neg * rel_neg) - tau * psi;
}

double energy_slope(const FingertipConfig& cfg, const PlaneSliders& b, double psi, double tau) {
  const auto& p = cfg.linkage;
  const double rel_pos = guide_angle(p, b.pos, psi) - psi;
  const double rel_neg = guide_angle(p, b.neg, -psi) + psi;
  return cfg.spring_k * (rel_pos * (guide_angle_rate(p, b.pos, psi) - 1.0) +
                         rel_neg * (1.0 - guide_angle_rate(p, b.neg, -psi))) -
         tau;
}

void check_in_range(const FingertipConfig& cfg, const std::array<double, 4>& thetas) {
  for (double t : thetas) {
    if (!std::isfinite(t)) {
      throw ModelError(ErrorKind::InvalidParams, "servo angle is not finite");
    }
    if (!cfg.range.contains(t)) {
      throw OutOfRangeError("servo angle " + std::to_string(rad_to_deg(t)) +
                            " deg outside the operating range");
    }
  }
}

FingertipState build_state(const FingertipConfig& cfg, const std::array<double, 4>& thetas,
                           const TerraceTilt& terrace) {
  FingertipState s;
  s.thetas = thetas;
  for (std::size_t i = 0; i < 4; ++i) {
    s.phis[i] = forward_facet(cfg.linkage, thetas[i]);
  }
  s.terrace = terrace;
  s.profile_x = surface_profile(cfg, thetas[idx(Facet::PosX)], thetas[idx(Facet::NegX)], terrace.x);
  s.profile_y = surface_profile(cfg, thetas[idx(Facet::PosY)], thetas[idx(Facet::NegY)], terrace.y);
  s.collinearity[0] =
      planar_collinearity_residual(cfg.linkage, thetas[idx(Facet::PosX)], thetas[idx(Facet::NegX)]);
  s.collinearity[1] =
      planar_collinearity_residual(cfg.linkage, thetas[idx(Facet::PosY)], thetas[idx(Facet::NegY)]);
  return s;
}

}  // namespace

void FingertipConfig::validate() const {
  require_positive(facet_len, "facet_len");
  require_positive(spring_k, "spring_k");
  require_positive(rod_len, "rod_len");
  require_positive(step, "step");
  if (step_count < 1) {
    throw ModelError(ErrorKind::InvalidParams, "step_count must be at least 1");
  }
  range.validate();
  try {
    facet_range(linkage, range);
    planar_range(linkage, range);
  } catch (const ModelError& e) {
    throw ModelError(ErrorKind::InvalidParams,
                     std::string("operating range is not jam-free: ") + e.what());
  }
}

MorphPrimitive MorphPrimitive::convex(double depth) {
  if (!std::isfinite(depth) || depth >= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "convex depth must be a negative facet angle");
  }
  return MorphPrimitive(Convex{depth});
}

MorphPrimitive MorphPrimitive::concave(double depth) {
  if (!std::isfinite(depth) || depth <= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "concave depth must be a positive facet angle");
  }
  return MorphPrimitive(Concave{depth});
}

MorphPrimitive MorphPrimitive::tilted(double phi_x, double phi_y) {
  if (!std::isfinite(phi_x) || !std::isfinite(phi_y)) {
    throw ModelError(ErrorKind::InvalidParams, "tilt angles must be finite");
  }
  return MorphPrimitive(TiltedPlanar{phi_x, phi_y});
}

double terrace_equilibrium(double phi_pos, double phi_neg, double spring_k, double load_torque) {
  if (!std::isfinite(phi_pos) || !std::isfinite(phi_neg) || !std::isfinite(load_torque)) {
    throw ModelError(ErrorKind::InvalidParams, "terrace inputs must be finite");
  }
  require_positive(spring_k, "spring_k");
  return 0.5 * (phi_pos - phi_neg) + load_torque / (2.0 * spring_k);
}

double crease_energy(const FingertipConfig& cfg, double theta_pos, double theta_neg, double psi,
                     double load_torque) {
  const PlaneSliders b{slider_position(cfg.linkage, theta_pos),
                       slider_position(cfg.linkage, theta_neg)};
  return energy_at(cfg, b, psi, load_torque);
}

double settle_terrace(const FingertipConfig& cfg, double theta_pos, double theta_neg,
                      double load_torque) {
  if (!std::isfinite(load_torque)) {
    throw ModelError(ErrorKind::InvalidParams, "load torque is not finite");
  }
  const PlaneSliders b{slider_position(cfg.linkage, theta_pos),
                       slider_position(cfg.linkage, theta_neg)};
  auto slope = [&](double psi) { return energy_slope(cfg, b, psi, load_torque); };

  std::optional<double> best;
  double best_energy = std::numeric_limits<double>::infinity();
  const double h = 2.0 * kMaxTerraceTilt / kSettleGrid;
  double lo = -kMaxTerraceTilt;
  double s_lo = slope(lo);
  for (int i = 1; i <= kSettleGrid; ++i) {
    double hi = -kMaxTerraceTilt + i * h;
    double s_hi = slope(hi);
    // A minimum sits where the slope crosses from negative to non-negative.
    if (s_lo < 0.0 && s_hi >= 0.0) {
      double a = lo;
      double c = hi;
      for (int it = 0; it < 200 && c - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + c);
        if (slope(mid) < 0.0) {
          a = mid;
        } else {
          c = mid;
        }
      }
      const double root = 0.5 * (a + c);
      const double e = energy_at(cfg, b, root, load_torque);
      if (e < best_energy) {
        best_energy = e;
        best = root;
      }
    }
    lo = hi;
    s_lo = s_hi;
  }
  if (!best) {
    throw OutOfRangeError("no terrace equilibrium within +-45 deg");
  }
  return *best;
}

Polyline surface_profile(const FingertipConfig& cfg, double theta_pos, double theta_neg,
                         double psi) {
  if (!std::isfinite(psi)) {
    throw ModelError(ErrorKind::InvalidParams, "terrace tilt is not finite");
  }
  const auto& p = cfg.linkage;
  const Vec2 axis(std::cos(psi), std::sin(psi));
  const Vec2 c_pos = p.l_oc() * axis;
  const Vec2 c_neg = -c_pos;

  const Vec2 b_pos = slider_position(p, theta_pos);
  const Vec2 own_neg = slider_position(p, theta_neg);
  const Vec2 b_neg(-own_neg.x(), own_neg.y());

  const Vec2 g_pos = b_pos - c_pos;
  const Vec2 g_neg = b_neg - c_neg;
  if (g_pos.dot(axis) <= 0.0 || g_neg.dot(-axis) <= 0.0) {
    throw OutOfRangeError("slider sits inside its hinge for the requested terrace tilt");
  }
  return {c_neg + cfg.facet_len * g_neg.normalized(), c_neg, c_pos,
          c_pos + cfg.facet_len * g_pos.normalized()};
}

FingertipState plan_primitive(const FingertipConfig& cfg, const MorphPrimitive& prim) {
  std::array<double, 4> thetas{};
  TerraceTilt terrace;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Convex> || std::is_same_v<T, Concave>) {
          thetas.fill(inverse_facet(cfg.linkage, v.depth, cfg.range));
        } else if constexpr (std::is_same_v<T, TiltedPlanar>) {
          const PlanarPair px = solve_planar_pair(cfg.linkage, v.phi_x, cfg.range);
          const PlanarPair py = solve_planar_pair(cfg.linkage, v.phi_y, cfg.range);
          thetas[idx(Facet::PosX)] = px.theta_pos;
          thetas[idx(Facet::NegX)] = px.theta_neg;
          thetas[idx(Facet::PosY)] = py.theta_pos;
          thetas[idx(Facet::NegY)] = py.theta_neg;
          terrace = {v.phi_x, v.phi_y};
        }
      },
      prim.value());
  return build_state(cfg, thetas, terrace);
}

FingertipState state_from_thetas(const FingertipConfig& cfg, const std::array<double, 4>& thetas) {
  check_in_range(cfg, thetas);
  const TerraceTilt terrace{
      settle_terrace(cfg, thetas[idx(Facet::PosX)], thetas[idx(Facet::NegX)]),
      settle_terrace(cfg, thetas[idx(Facet::PosY)], thetas[idx(Facet::NegY)])};
  return build_state(cfg, thetas, terrace);
}

Vec3 pointer_top(const FingertipConfig& cfg, double about_x, double about_y) {
  if (!(std::abs(about_x) < kMaxTerraceTilt) || !(std::abs(about_y) < kMaxTerraceTilt)) {
    throw ModelError(ErrorKind::InvalidParams, "pointer rotations must stay below 45 deg");
  }
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(about_y, Vec3::UnitY()) *
                             Eigen::AngleAxisd(about_x, Vec3::UnitX()))
                                .toRotationMatrix();
  return cfg.rod_len * (r * Vec3::UnitZ());
}

Vec3 pointer_for_tilt(const FingertipConfig& cfg, const TerraceTilt& tilt) {
  return pointer_top(cfg, tilt.y, -tilt.x);
}

std::vector<FingertipState> transition_trajectory(const FingertipConfig& cfg,
                                                  const MorphPrimitive& from,
                                                  const MorphPrimitive& to) {
  const FingertipState start = plan_primitive(cfg, from);
  const FingertipState end = plan_primitive(cfg, to);

  std::size_t steps = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double span = std::abs(end.thetas[i] - start.thetas[i]) / cfg.step;
    steps = std::max(steps, static_cast<std::size_t>(std::ceil(span - 1e-9)));
  }

  std::vector<FingertipState> out;
  out.reserve(steps + 1);
  out.push_back(start);
  for (std::size_t k = 1; k < steps; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(steps);
    std::array<double, 4> thetas{};
    for (std::size_t i = 0; i < 4; ++i) {
      thetas[i] = start.thetas[i] + frac * (end.thetas[i] - start.thetas[i]);
    }
    try {
      out.push_back(state_from_thetas(cfg, thetas));
    } catch (const OutOfRangeError& e) {
      throw OutOfRangeError(std::string(e.what()) + " (step " + std::to_string(k) + ")", k);
    }
  }
  if (steps > 0) {
    out.push_back(end);
  }
  return out;
}

}  // namespace morphtip
