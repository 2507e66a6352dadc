#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code path they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "morphtip/grasp.hpp"
#include "morphtip/linkage.hpp"

namespace morphtip::oracle {

/// Facet angle straight from the vector chain OA + AB - OC, no validation.
inline double facet_angle(double l_oc, double l_ab, double oa_x, double alpha0, double theta) {
  const double oa_y = -l_ab * std::cos(alpha0);
  const double bx = oa_x + l_ab * std::sin(alpha0 - theta);
  const double by = oa_y + l_ab * std::cos(alpha0 - theta);
  return std::atan2(by, bx - l_oc);
}

/// [min, max] of f over an n-point uniform grid on [lo, hi].
inline std::pair<double, double> scan_range(const std::function<double(double)>& f, double lo,
                                            double hi, int n) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (int i = 0; i <= n; ++i) {
    const double v = f(lo + (hi - lo) * i / n);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

/// Zooming grid search: 1001 samples, then repeatedly re-grid +-2 cells
/// around the best sample until the cell is below `tol`.
/// `f` may return a wider type than double to resolve flat minima.
template <typename F>
double grid_argmin(F&& f, double lo, double hi, double tol = 1e-13) {
  double best = lo;
  while (hi - lo > tol) {
    const int n = 1000;
    const double h = (hi - lo) / n;
    decltype(f(lo)) best_val = f(lo);
    best = lo;
    for (int i = 1; i <= n; ++i) {
      const double x = lo + h * i;
      const auto v = f(x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
    }
    lo = best - 2 * h;
    hi = best + 2 * h;
    if (h < 1e-15) break;
  }
  return best;
}

/// Quadratic crease energy of one terrace plane in quad precision, so that a
/// grid search can resolve the minimiser well below 1e-9 rad.
inline __float128 terrace_energy(double phi_pos, double phi_neg, double k, double tau, double psi) {
  const __float128 a = static_cast<__float128>(phi_pos) - psi;
  const __float128 b = static_cast<__float128>(phi_neg) + psi;
  return static_cast<__float128>(k) * (a * a + b * b) / 2 - static_cast<__float128>(tau) * psi;
}

/// Contact wrenches with torque about the world origin, unscaled.
inline std::vector<Eigen::Vector3d> raw_wrenches(const std::vector<Contact>& contacts, double mu,
                                                 bool friction) {
  std::vector<Eigen::Vector3d> out;
  auto push = [&](const Vec2& p, const Vec2& f) {
    out.emplace_back(f.x(), f.y(), p.x() * f.y() - p.y() * f.x());
  };
  for (const auto& c : contacts) {
    if (!friction || mu == 0.0) {
      push(c.point, c.normal);
    } else {
      const Vec2 t(-c.normal.y(), c.normal.x());
      push(c.point, c.normal + mu * t);
      push(c.point, c.normal - mu * t);
    }
  }
  return out;
}

/// Inverses of every non-singular triple of generators. A direction lies in
/// the cone iff some triple expresses it with non-negative weights
/// (Caratheodory), so membership is a brute-force scan over these.
inline std::vector<Eigen::Matrix3d> simplicial_inverses(const std::vector<Eigen::Vector3d>& w) {
  std::vector<Eigen::Matrix3d> inv;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d m;
        m << w[i], w[j], w[k];
        if (std::abs(m.determinant()) < 1e-12 * w[i].norm() * w[j].norm() * w[k].norm()) {
          continue;
        }
        inv.push_back(m.inverse());
      }
    }
  }
  return inv;
}

inline bool in_cone(const std::vector<Eigen::Matrix3d>& inverses, const Eigen::Vector3d& d) {
  for (const auto& m : inverses) {
    if (((m * d).array() >= -1e-12).all()) {
      return true;
    }
  }
  return false;
}

/// Every one of `samples` random unit wrenches can be resisted.
inline bool resists_all(const std::vector<Eigen::Vector3d>& w, std::mt19937_64& rng,
                        int samples = 10000) {
  const auto inverses = simplicial_inverses(w);
  std::normal_distribution<double> g;
  for (int s = 0; s < samples; ++s) {
    Eigen::Vector3d d(g(rng), g(rng), g(rng));
    d.normalize();
    if (!in_cone(inverses, -d)) {
      return false;
    }
  }
  return true;
}

inline Closure sampled_closure(const std::vector<Contact>& contacts, double mu,
                               std::mt19937_64& rng, int samples = 10000) {
  if (resists_all(raw_wrenches(contacts, mu, false), rng, samples)) {
    return Closure::FormClosure;
  }
  if (mu > 0.0 && resists_all(raw_wrenches(contacts, mu, true), rng, samples)) {
    return Closure::ForceClosure;
  }
  return Closure::None;
}

/// Brute-force rest height: densely sample each segment and take the highest
/// point the lowered circle would hit.
inline double sampled_rest_height(const Polyline& line, double r, double u, int per_segment = 20000) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    for (int k = 0; k <= per_segment; ++k) {
      const Vec2 p = line[i] + (line[i + 1] - line[i]) * (static_cast<double>(k) / per_segment);
      const double dx = p.x() - u;
      if (std::abs(dx) <= r) {
        best = std::max(best, p.y() + std::sqrt(r * r - dx * dx));
      }
    }
  }
  return best;
}

}  // namespace morphtip::oracle
