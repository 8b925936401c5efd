#pragma once

#include <string>
#include <vector>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/types.hpp"

namespace crashdet::moto {

// Mid-size motorcycle parameter set (~245 kg, 1.5 m wheelbase, 0.3 m wheels).
// Geometry is expressed in the frame coordinate system: origin at the frame
// CG, x forward, z up.
struct MotoParams {
  double frame_mass = 210.0;    // kg
  double frame_inertia = 38.0;  // kg m^2, pitch
  double fw_mass = 15.0;
  double rw_mass = 20.0;
  double fw_inertia = 0.6;  // kg m^2, spin
  double rw_inertia = 0.8;
  double fw_radius = 0.30;  // m
  double rw_radius = 0.30;

  Vec2 steer_head{0.45, 0.25};   // steering head, frame coords
  double caster = 0.344;         // rad, fork angle from vertical
  double fork_len = 0.743;       // m, head to wheel center, uncompressed
  Vec2 swing_pivot{-0.35, -0.15};
  double swing_len = 0.541;      // m, pivot to wheel center
  double swing_angle0 = 0.588;   // rad, swing droop below horizontal-backward

  // Front suspension: linear spring-damper on fork travel (compression > 0).
  double fork_k = 25e3;   // N/m
  double fork_c = 1800.0;  // N s/m
  double fork_travel_min = -0.04;  // m (extension stop)
  double fork_travel_max = 0.13;   // m (compression stop)

  // Rear suspension: rotational spring-damper on swing angle (compression > 0).
  double swing_k = 9e3;   // N m/rad
  double swing_c = 500.0;  // N m s/rad
  double swing_min = -0.12;  // rad
  double swing_max = 0.35;

  double stop_k = 2e6;   // travel-stop penalty stiffness
  double stop_c = 5e3;

  // Front deflection: locked below the yield torque, perfectly plastic above.
  double defl_yield = 6000.0;  // N m
  double defl_c = 400.0;       // N m s/rad, resistance while flowing
  double defl_max = 0.6;       // rad, hard stop

  double tire_k = 130e3;  // N/m
  double tire_c = 800.0;  // N s/m
  double friction = 1.0;
  double slip_reg = 0.05;  // m/s, friction regularization velocity

  double brake_front_share = 0.7;
  double spin_reg = 0.5;  // rad/s, brake torque regularization near zero spin

  // Frame-mounted contact probes (local coords) used for car contact and the
  // left/right contact sensors.
  std::vector<Vec2> frame_points{{0.55, -0.20}, {0.50, 0.35}, {0.0, -0.35}, {-0.80, 0.05}};
  double frame_point_radius = 0.06;

  void validate() const {
    std::string bad;
    auto pos = [&](double v, const char* name) {
      if (!(v > 0.0)) bad += std::string(name) + " must be > 0; ";
    };
    auto nonneg = [&](double v, const char* name) {
      if (!(v >= 0.0)) bad += std::string(name) + " must be >= 0; ";
    };
    pos(frame_mass, "frame_mass");
    pos(frame_inertia, "frame_inertia");
    pos(fw_mass, "fw_mass");
    pos(rw_mass, "rw_mass");
    pos(fw_inertia, "fw_inertia");
    pos(rw_inertia, "rw_inertia");
    pos(fw_radius, "fw_radius");
    pos(rw_radius, "rw_radius");
    pos(fork_len, "fork_len");
    pos(swing_len, "swing_len");
    pos(fork_k, "fork_k");
    pos(swing_k, "swing_k");
    pos(tire_k, "tire_k");
    pos(defl_yield, "defl_yield");
    nonneg(fork_c, "fork_c");
    nonneg(swing_c, "swing_c");
    nonneg(tire_c, "tire_c");
    nonneg(defl_c, "defl_c");
    if (!(friction >= 0.0 && friction <= 2.0)) bad += "friction must lie in [0, 2]; ";
    if (!(fork_travel_min < fork_travel_max)) bad += "fork travel limits inverted; ";
    if (!bad.empty()) throw ValidationError("MotoParams: " + bad);
  }

  double total_mass() const { return frame_mass + fw_mass + rw_mass; }
};

}  // namespace crashdet::moto
