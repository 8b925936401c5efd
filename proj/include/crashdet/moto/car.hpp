#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/types.hpp"

namespace crashdet::moto {

// Rigid rectangular car stand-in. The footprint lives in the top-view (x-y)
// plane; the planar simulation reduces it to an effective barrier on the
// motorcycle's travel line. Yaw 0 presents the car's side (long axis across
// the travel line). The car is kinematic: it moves at a prescribed velocity
// and does not recoil.
struct CarObstacle {
  double length = 4.67;  // m (long axis)
  double width = 1.77;   // m
  double yaw = 0.0;      // rad, in [0, 2*pi)
  double center_x = 20.0;
  double offset_y = 0.0;       // lateral displacement of the car center
  double speed_x = 0.0;        // barrier velocity along the travel axis
  double body_z_low = 0.22;    // vertical band of contactable bodywork
  double body_z_high = 1.30;
  double contact_k = 120e3;    // N/m effective crush stiffness
  double contact_c = 4e3;      // N s/m
  double corner_radius = 0.45;  // plan-view corner rounding
  double face_camber = 0.10;    // plan-view convexity of the body sides
  double long_scale = 1.0;      // longitudinal projection of the impact

  void validate() const {
    if (!(length > 0.0 && width > 0.0)) throw ValidationError("car length/width must be > 0");
    if (!(yaw >= 0.0 && yaw < 2.0 * M_PI)) throw ValidationError("car yaw must lie in [0, 2*pi)");
    if (!(contact_k > 0.0 && contact_c >= 0.0)) throw ValidationError("car contact stiffness invalid");
  }
};

// The top-view footprint collapsed onto the travel line: where car material
// first appears ahead of the motorcycle, how much of the motorcycle's width
// actually engages it, and the lateral coordinate of the leading contact
// point (which drives the left/right contact sensors).
struct EffectiveBarrier {
  bool hit = false;
  double face_x0 = 0.0;     // leading material x at t = 0
  double speed_x = 0.0;
  int approach = +1;        // +1: barrier ahead of the moto, -1: behind
  double engagement = 1.0;  // scales contact stiffness/damping
  double y_contact = 0.0;   // lateral coord of leading contact, moto frame
  double z_low = 0.0, z_high = 0.0;
  double contact_k = 0.0, contact_c = 0.0;

  double face_x(double t) const { return face_x0 + speed_x * t; }
};

namespace detail {

// Signed distance from a point (in car coordinates) to the rounded rectangle,
// with the plan camber bowing the two long faces outward at their middle.
inline double car_plan_distance(const CarObstacle& car, const Vec2& p_car) {
  const double a = 0.5 * car.length - car.corner_radius;   // half core long
  const double b = 0.5 * car.width - car.corner_radius;    // half core short
  // camber: the short half-extent grows toward the middle of the long axis
  const double u = std::clamp(std::abs(p_car.x()) / std::max(a, 1e-9), 0.0, 1.0);
  const double bow = car.face_camber * (1.0 - u * u);
  const double dx = std::abs(p_car.x()) - a;
  const double dy = std::abs(p_car.y()) - (b + bow);
  const Vec2 d(std::max(dx, 0.0), std::max(dy, 0.0));
  return d.norm() + std::min(std::max(dx, dy), 0.0) - car.corner_radius;
}

}  // namespace detail

// Collapse the yawed footprint onto the moto travel line (y = 0, width
// strip_width). Returns the leading-material abscissa, engagement fraction
// and leading contact lateral coordinate. `moto_x_hint` bounds the search
// from the moto side.
inline EffectiveBarrier make_effective_barrier(const CarObstacle& car,
                                               double strip_width = 0.7,
                                               int approach = +1) {
  constexpr int kStripSamples = 21;
  constexpr double kEngageDepth = 0.15;  // m of leading material that counts

  EffectiveBarrier eb;
  eb.speed_x = car.speed_x;
  eb.approach = approach;
  eb.z_low = car.body_z_low;
  eb.z_high = car.body_z_high;
  eb.contact_k = car.contact_k;
  eb.contact_c = car.contact_c;

  const Eigen::Matrix2d r = rot2(car.yaw);
  const Eigen::Matrix2d rt = r.transpose();
  const Vec2 c(car.center_x, car.offset_y);
  const double reach = 0.5 * std::hypot(car.length, car.width) + car.face_camber + 0.05;

  double best_x = std::numeric_limits<double>::infinity();
  double best_y = 0.0;
  std::vector<double> entry(kStripSamples, std::numeric_limits<double>::infinity());

  for (int i = 0; i < kStripSamples; ++i) {
    const double y = (-0.5 + static_cast<double>(i) / (kStripSamples - 1)) * strip_width;
    // scan for the first x (from the approach side) with material at this y
    const double x_lo = car.center_x - reach, x_hi = car.center_x + reach;
    const int n = 256;
    double found = std::numeric_limits<double>::infinity();
    double prev_d = std::numeric_limits<double>::infinity();
    double prev_x = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double frac = static_cast<double>(k) / n;
      const double x = approach > 0 ? x_lo + frac * (x_hi - x_lo) : x_hi - frac * (x_hi - x_lo);
      const double d = detail::car_plan_distance(car, rt * (Vec2(x, y) - c));
      if (d <= 0.0) {
        // bisect the sign change for a sharp edge
        double xa = k == 0 ? x : prev_x, xb = x;
        if (k > 0 && prev_d > 0.0) {
          for (int it = 0; it < 40; ++it) {
            const double xm = 0.5 * (xa + xb);
            const double dm = detail::car_plan_distance(car, rt * (Vec2(xm, y) - c));
            (dm > 0.0 ? xa : xb) = xm;
          }
        }
        found = xb;
        break;
      }
      prev_d = d;
      prev_x = x;
    }
    entry[static_cast<std::size_t>(i)] = found;
    const bool better = approach > 0 ? found < best_x : (std::isinf(best_x) || found > best_x);
    if (std::isfinite(found) && better) {
      best_x = found;
      best_y = y;
    }
  }

  if (!std::isfinite(best_x)) {
    eb.hit = false;
    return eb;
  }
  eb.hit = true;
  eb.face_x0 = best_x;
  eb.y_contact = best_y;

  int covered = 0;
  for (double e : entry) {
    if (std::isfinite(e) && std::abs(e - best_x) <= kEngageDepth) ++covered;
  }
  const double cover = static_cast<double>(covered) / kStripSamples;

  // Structural engagement decays toward the car's ends: a leading contact far
  // from the presented face's middle grazes rather than engages.
  const Vec2 lead_car = rt * (Vec2(best_x, best_y) - c);
  const double along = std::abs(lead_car.x()) / (0.5 * car.length);
  const double centered = std::clamp(1.0 - 0.55 * along, 0.1, 1.0);
  eb.engagement = std::clamp(cover * centered * car.long_scale, 0.02, 1.0);
  return eb;
}

}  // namespace crashdet::moto
