#include "morphtip/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "morphtip/errors.hpp"

namespace morphtip {

namespace {

constexpr double kTouchTol = 1e-7;
constexpr double kPenetrationTol = 1e-6;
constexpr double kDedupTol = 1e-4;
constexpr double kHullMargin = 1e-9;
constexpr double kPivotTol = 1e-3;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) {
    return a;
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

Vec2 to_local(const Vec2& world, Side side, double gap) {
  return side == Side::Left ? Vec2(world.y(), world.x() + 0.5 * gap)
                            : Vec2(world.y(), 0.5 * gap - world.x());
}

// Linear part of to_world, for directions.
Vec2 dir_to_world(const Vec2& local, Side side) {
  return side == Side::Left ? Vec2(local.y(), local.x()) : Vec2(-local.y(), local.x());
}

// Unit normal of local segment a -> b pointing out of the fingertip (+n side).
Vec2 local_outward(const Vec2& a, const Vec2& b) {
  const Vec2 d = (b - a).normalized();
  return Vec2(-d.y(), d.x());
}

void require_profile(const Polyline& line, const char* which) {
  if (line.size() < 2) {
    throw ModelError(ErrorKind::InvalidParams, std::string(which) + " profile needs 2+ points");
  }
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (!line[i].allFinite() || !line[i + 1].allFinite() || !(line[i + 1].x() > line[i].x())) {
      throw ModelError(ErrorKind::InvalidParams,
                       std::string(which) + " profile must be finite and strictly monotone in s");
    }
  }
  if (!is_simple(line)) {
    throw ModelError(ErrorKind::InvalidParams, std::string(which) + " profile self-intersects");
  }
}

void validate_object(const ObjectXSection& object) {
  if (const auto* c = std::get_if<Circle>(&object)) {
    if (!std::isfinite(c->radius) || c->radius <= 0.0 || !c->center.allFinite()) {
      throw ModelError(ErrorKind::InvalidParams, "circle needs a positive radius and finite centre");
    }
  }
}

// Lowest n of the convex polygon (given in some local frame) above s.
std::optional<double> polygon_lower(const std::vector<Vec2>& poly, double s) {
  std::optional<double> lower;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double s0 = std::min(a.x(), b.x());
    const double s1 = std::max(a.x(), b.x());
    if (s < s0 || s > s1) {
      continue;
    }
    const double n = (a.x() == b.x()) ? std::min(a.y(), b.y())
                                      : a.y() + (b.y() - a.y()) * (s - a.x()) / (b.x() - a.x());
    lower = lower ? std::min(*lower, n) : n;
  }
  return lower;
}

// Lift needed so the object, expressed with the fingertip base at n = 0,
// clears the profile with a single touching point.
double clearance_lift(const Polyline& local, const ObjectXSection& object_base) {
  if (const auto* c = std::get_if<Circle>(&object_base)) {
    return rest_height(local, c->radius, c->center.x()) - c->center.y();
  }
  const auto& poly = std::get<ConvexPolygon>(object_base).vertices();
  double lift = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : poly) {
    if (const auto h = profile_height(local, v.x())) {
      lift = std::max(lift, *h - v.y());
    }
  }
  for (const Vec2& p : local) {
    if (const auto lo = polygon_lower(poly, p.x())) {
      lift = std::max(lift, p.y() - *lo);
    }
  }
  if (!std::isfinite(lift)) {
    throw ModelError(ErrorKind::Unsupported, "object does not overlap the profile span");
  }
  return lift;
}

void add_contact(std::vector<Contact>& out, const Contact& c) {
  for (const Contact& existing : out) {
    if ((existing.point - c.point).norm() <= kDedupTol) {
      return;
    }
  }
  out.push_back(c);
}

void circle_contacts(const GraspScene& scene, Side side, const Circle& circle,
                     std::vector<Contact>& out) {
  const Polyline& local = side == Side::Left ? scene.left_profile : scene.right_profile;
  const Polyline world = scene.world_profile(side);
  const Vec2 centre_local = to_local(circle.center, side, scene.gap);
  if (const auto h = profile_height(local, centre_local.x()); h && centre_local.y() < *h) {
    throw PenetrationError("circle centre lies inside the fingertip", circle.center,
                           *h - centre_local.y() + circle.radius);
  }
  for (std::size_t i = 0; i + 1 < world.size(); ++i) {
    const Vec2 q = closest_on_segment(circle.center, world[i], world[i + 1]);
    const double d = (circle.center - q).norm();
    if (d < circle.radius - kPenetrationTol) {
      throw PenetrationError("circle overlaps the profile", q, circle.radius - d);
    }
    if (std::abs(d - circle.radius) <= kTouchTol) {
      add_contact(out, {q, (circle.center - q) / d, side, i});
    }
  }
}

void polygon_contacts(const GraspScene& scene, Side side, const ConvexPolygon& polygon,
                      std::vector<Contact>& out) {
  const Polyline& local = side == Side::Left ? scene.left_profile : scene.right_profile;
  const Polyline world = scene.world_profile(side);
  const auto& verts = polygon.vertices();

  for (const Vec2& v : verts) {
    const Vec2 vl = to_local(v, side, scene.gap);
    if (const auto h = profile_height(local, vl.x()); h && vl.y() < *h - kPenetrationTol) {
      throw PenetrationError("polygon vertex lies inside the fingertip", v, *h - vl.y());
    }
    for (std::size_t i = 0; i + 1 < world.size(); ++i) {
      const Vec2 q = closest_on_segment(v, world[i], world[i + 1]);
      if ((v - q).norm() <= kTouchTol) {
        const Vec2 n = dir_to_world(local_outward(local[i], local[i + 1]), side);
        add_contact(out, {v, n, side, i});
      }
    }
  }

  for (std::size_t j = 0; j < world.size(); ++j) {
    const Vec2& p = world[j];
    double depth = -std::numeric_limits<double>::infinity();
    std::size_t edge = 0;
    for (std::size_t e = 0; e < verts.size(); ++e) {
      const Vec2& a = verts[e];
      const Vec2& b = verts[(e + 1) % verts.size()];
      const Vec2 d = (b - a).normalized();
      const Vec2 outward(d.y(), -d.x());
      const double sd = (p - a).dot(outward);
      if (sd > depth) {
        depth = sd;
        edge = e;
      }
    }
    if (depth < -kPenetrationTol) {
      throw PenetrationError("profile vertex lies inside the object", p, -depth);
    }
    if (std::abs(depth) <= kTouchTol) {
      const Vec2& a = verts[edge];
      const Vec2& b = verts[(edge + 1) % verts.size()];
      if ((p - closest_on_segment(p, a, b)).norm() <= kTouchTol) {
        const Vec2 d = (b - a).normalized();
        add_contact(out, {p, Vec2(-d.y(), d.x()), side, std::min(j, world.size() - 2)});
      }
    }
  }
}

double segment_support(const Vec2& a, const Vec2& b, double radius, double u) {
  // max over the segment of y(s) + sqrt(r^2 - (s - u)^2); concave in s.
  const double s0 = std::max(a.x(), u - radius);
  const double s1 = std::min(b.x(), u + radius);
  if (s0 > s1) {
    return -std::numeric_limits<double>::infinity();
  }
  auto y_at = [&](double s) { return a.y() + (b.y() - a.y()) * (s - a.x()) / (b.x() - a.x()); };
  auto f = [&](double s) {
    const double dx = s - u;
    return y_at(s) + std::sqrt(std::max(0.0, radius * radius - dx * dx));
  };
  const double slope = (b.y() - a.y()) / (b.x() - a.x());
  const double s_tangent = u + radius * slope / std::sqrt(1.0 + slope * slope);
  if (s_tangent > s0 && s_tangent < s1) {
    return f(s_tangent);
  }
  return std::max(f(s0), f(s1));
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw ModelError(ErrorKind::InvalidParams, "polygon needs at least three vertices");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if (!a.allFinite() || cross(b - a, c - b) <= 0.0) {
      throw ModelError(ErrorKind::InvalidParams, "polygon must be strictly convex and CCW");
    }
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    turning += std::atan2(cross(e0, e1), e0.dot(e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw ModelError(ErrorKind::InvalidParams, "polygon winds more than once");
  }
}

ConvexPolygon ConvexPolygon::square(double side, const Vec2& center) {
  const double h = 0.5 * side;
  return ConvexPolygon({center + Vec2(-h, -h), center + Vec2(h, -h), center + Vec2(h, h),
                        center + Vec2(-h, h)});
}

Vec2 ConvexPolygon::centroid() const {
  double area = 0.0;
  Vec2 acc = Vec2::Zero();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % vertices_.size()];
    const double w = cross(a, b);
    area += w;
    acc += w * (a + b);
  }
  return acc / (3.0 * area);
}

ConvexPolygon ConvexPolygon::translated(const Vec2& offset) const {
  std::vector<Vec2> moved = vertices_;
  for (Vec2& v : moved) {
    v += offset;
  }
  return ConvexPolygon(std::move(moved));
}

Vec2 to_world(const Vec2& local, Side side, double gap) {
  return side == Side::Left ? Vec2(-0.5 * gap + local.y(), local.x())
                            : Vec2(0.5 * gap - local.y(), local.x());
}

void GraspScene::validate() const {
  if (!std::isfinite(gap) || gap <= 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "gap must be positive");
  }
  if (!std::isfinite(mu) || mu < 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "friction coefficient must be >= 0");
  }
  require_profile(left_profile, "left");
  require_profile(right_profile, "right");
  validate_object(object);
}

Polyline GraspScene::world_profile(Side side) const {
  const Polyline& local = side == Side::Left ? left_profile : right_profile;
  Polyline out;
  out.reserve(local.size());
  for (const Vec2& p : local) {
    out.push_back(to_world(p, side, gap));
  }
  return out;
}

GraspScene seat_object(Polyline left, Polyline right, const ObjectXSection& object, double mu) {
  require_profile(left, "left");
  require_profile(right, "right");
  validate_object(object);

  auto base = [&](Side side) -> ObjectXSection {
    auto map = [side](const Vec2& w) {
      return side == Side::Left ? Vec2(w.y(), w.x()) : Vec2(w.y(), -w.x());
    };
    if (const auto* c = std::get_if<Circle>(&object)) {
      return Circle{c->radius, map(c->center)};
    }
    std::vector<Vec2> pts;
    for (const Vec2& v : std::get<ConvexPolygon>(object).vertices()) {
      pts.push_back(map(v));
    }
    // (x, y) -> (y, x) is a reflection; restore CCW order.
    if (side == Side::Left) {
      std::reverse(pts.begin(), pts.end());
    }
    return ConvexPolygon(std::move(pts));
  };

  const double lift_left = clearance_lift(left, base(Side::Left));
  const double lift_right = clearance_lift(right, base(Side::Right));

  GraspScene scene;
  scene.left_profile = std::move(left);
  scene.right_profile = std::move(right);
  scene.gap = lift_left + lift_right;
  scene.mu = mu;
  const Vec2 shift(0.5 * (lift_left - lift_right), 0.0);
  if (const auto* c = std::get_if<Circle>(&object)) {
    scene.object = Circle{c->radius, c->center + shift};
  } else {
    scene.object = std::get<ConvexPolygon>(object).translated(shift);
  }
  scene.validate();
  return scene;
}

std::optional<double> profile_height(const Polyline& local, double s) {
  for (std::size_t i = 0; i + 1 < local.size(); ++i) {
    const Vec2& a = local[i];
    const Vec2& b = local[i + 1];
    if (s >= a.x() && s <= b.x()) {
      return a.y() + (b.y() - a.y()) * (s - a.x()) / (b.x() - a.x());
    }
  }
  return std::nullopt;
}

bool is_simple(const Polyline& line) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); };
  const std::size_t segs = line.size() < 2 ? 0 : line.size() - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    for (std::size_t j = i + 2; j < segs; ++j) {
      const Vec2 &a = line[i], &b = line[i + 1], &c = line[j], &d = line[j + 1];
      const double o1 = orient(a, b, c);
      const double o2 = orient(a, b, d);
      const double o3 = orient(c, d, a);
      const double o4 = orient(c, d, b);
      if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
          o4 != 0) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Contact> find_contacts(const GraspScene& scene) {
  scene.validate();
  std::vector<Contact> out;
  for (Side side : {Side::Left, Side::Right}) {
    if (const auto* c = std::get_if<Circle>(&scene.object)) {
      circle_contacts(scene, side, *c, out);
    } else {
      polygon_contacts(scene, side, std::get<ConvexPolygon>(scene.object), out);
    }
  }
  return out;
}

double rest_height(const Polyline& local, double radius, double u) {
  if (!std::isfinite(radius) || radius <= 0.0 || !std::isfinite(u)) {
    throw ModelError(ErrorKind::InvalidParams, "rest height needs a positive radius and finite u");
  }
  double h = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < local.size(); ++i) {
    h = std::max(h, segment_support(local[i], local[i + 1], radius, u));
  }
  if (!std::isfinite(h)) {
    throw ModelError(ErrorKind::Unsupported, "circle falls past the profile at this offset");
  }
  return h;
}

double cradle_height(const Polyline& left, const Polyline& right, double radius, double u) {
  return 0.5 * (rest_height(left, radius, u) + rest_height(right, radius, u));
}

std::string_view to_string(Closure c) {
  switch (c) {
    case Closure::None: return "None";
    case Closure::ForceClosure: return "ForceClosure";
    case Closure::FormClosure: return "FormClosure";
  }
  return "None";
}

Eigen::Vector3d planar_wrench(const Vec2& point, const Vec2& force, const Vec2& ref, double length) {
  return {force.x(), force.y(), cross(point - ref, force) / length};
}

bool positively_spans(std::span<const Eigen::Vector3d> wrenches) {
  std::vector<Eigen::Vector3d> w;
  for (const auto& v : wrenches) {
    const double n = v.norm();
    if (n > 1e-12) {
      w.push_back(v / n);
    }
  }
  if (w.size() < 4) {
    return false;
  }
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = w[i];
  }
  if (Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() < 3) {
    return false;
  }
  // The cone misses part of R^3 iff its dual cone has an extreme ray, and every
  // extreme ray is orthogonal to two independent generators.
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      Eigen::Vector3d c = w[i].cross(w[j]);
      const double n = c.norm();
      if (n < 1e-12) {
        continue;
      }
      c /= n;
      for (double sign : {1.0, -1.0}) {
        const bool supporting = std::all_of(w.begin(), w.end(), [&](const Eigen::Vector3d& x) {
          return sign * c.dot(x) >= -kHullMargin;
        });
        if (supporting) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

struct WrenchFrame {
  Vec2 ref;
  double length;
};

WrenchFrame wrench_frame(std::span<const Contact> contacts) {
  Vec2 ref = Vec2::Zero();
  for (const Contact& c : contacts) {
    ref += c.point;
  }
  ref /= static_cast<double>(contacts.size());
  double length = 0.0;
  for (const Contact& c : contacts) {
    length = std::max(length, (c.point - ref).norm());
  }
  return {ref, length > 1e-12 ? length : 1.0};
}

}  // namespace

bool form_closure(std::span<const Contact> contacts) {
  if (contacts.empty()) {
    return false;
  }
  const WrenchFrame f = wrench_frame(contacts);
  std::vector<Eigen::Vector3d> w;
  for (const Contact& c : contacts) {
    w.push_back(planar_wrench(c.point, c.normal, f.ref, f.length));
  }
  return positively_spans(w);
}

bool force_closure(std::span<const Contact> contacts, double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "friction coefficient must be >= 0");
  }
  if (contacts.empty()) {
    return false;
  }
  if (mu == 0.0) {
    return form_closure(contacts);
  }
  const WrenchFrame f = wrench_frame(contacts);
  std::vector<Eigen::Vector3d> w;
  for (const Contact& c : contacts) {
    const Vec2 t(-c.normal.y(), c.normal.x());
    w.push_back(planar_wrench(c.point, c.normal + mu * t, f.ref, f.length));
    w.push_back(planar_wrench(c.point, c.normal - mu * t, f.ref, f.length));
  }
  return positively_spans(w);
}

Closure closure_classify(std::span<const Contact> contacts, double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw ModelError(ErrorKind::InvalidParams, "friction coefficient must be >= 0");
  }
  if (contacts.empty()) {
    return Closure::None;
  }
  if (contacts.size() >= 2 &&
      std::all_of(contacts.begin(), contacts.end(), [&](const Contact& c) {
        return (c.point - contacts.front().point).norm() <= kDedupTol;
      })) {
    throw ModelError(ErrorKind::Degenerate, "all contacts coincide");
  }
  if (form_closure(contacts)) {
    return Closure::FormClosure;
  }
  if (force_closure(contacts, mu)) {
    return Closure::ForceClosure;
  }
  return Closure::None;
}

bool pivot_feasible(std::span<const Contact> contacts) {
  if (contacts.size() != 2 || contacts[0].side == contacts[1].side) {
    return false;
  }
  const Contact& a = contacts[0].side == Side::Left ? contacts[0] : contacts[1];
  const Contact& b = contacts[0].side == Side::Left ? contacts[1] : contacts[0];
  auto angle = [](const Vec2& u, const Vec2& v) { return std::abs(std::atan2(cross(u, v), u.dot(v))); };
  if (angle(a.normal, -b.normal) > kPivotTol) {
    return false;
  }
  const Vec2 line = b.point - a.point;
  if (line.norm() < kDedupTol) {
    return false;
  }
  return angle(a.normal, line) <= kPivotTol;
}

}  // namespace morphtip
