#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "crashdet/core/types.hpp"

namespace crashdet::moto {

// Generalized coordinate layout. The model is strictly planar: x is the
// longitudinal direction, z vertical, rotations are about the pitch (y) axis.
enum Dof : int {
  kX = 0,        // frame position x
  kZ = 1,        // frame position z
  kPitch = 2,    // frame pitch
  kFork = 3,     // front fork travel (compression > 0)
  kSwing = 4,    // rear swing angle (compression > 0)
  kFwSpin = 5,   // front wheel spin (absolute)
  kRwSpin = 6,   // rear wheel spin (absolute)
  kDefl = 7,     // front deflection angle (plastic crash DOF)
  kNumDof = 8,
};

using DofVec = Eigen::Matrix<double, kNumDof, 1>;
using DofMat = Eigen::Matrix<double, kNumDof, kNumDof>;

inline const char* dof_name(int i) {
  static constexpr std::array<const char*, kNumDof> names = {
      "frame x", "frame z", "frame pitch", "fork travel",
      "swing angle", "front wheel spin", "rear wheel spin", "front deflection"};
  return names[static_cast<std::size_t>(i)];
}

struct MotoState {
  DofVec q = DofVec::Zero();
  DofVec v = DofVec::Zero();
  // Plastic ratchet direction for the front deflection: 0 before first yield,
  // then +/-1. Once set, the DOF only flows further in that direction.
  int defl_dir = 0;

  double x() const { return q[kX]; }
  double z() const { return q[kZ]; }
  double pitch() const { return q[kPitch]; }
  double fork_travel() const { return q[kFork]; }
  double swing_angle() const { return q[kSwing]; }
  double defl_angle() const { return q[kDefl]; }

  std::optional<int> first_non_finite() const {
    for (int i = 0; i < kNumDof; ++i) {
      if (!std::isfinite(q[i])) return i;
      if (!std::isfinite(v[i])) return i;
    }
    return std::nullopt;
  }
};

enum class MotoPart { FrontWheel, RearWheel, FrameFront, FrameTop, FrameMid, FrameRear };

inline const char* part_name(MotoPart p) {
  switch (p) {
    case MotoPart::FrontWheel: return "front_wheel";
    case MotoPart::RearWheel: return "rear_wheel";
    case MotoPart::FrameFront: return "frame_front";
    case MotoPart::FrameTop: return "frame_top";
    case MotoPart::FrameMid: return "frame_mid";
    case MotoPart::FrameRear: return "frame_rear";
  }
  return "unknown";
}

enum class ContactSide { None, Left, Right };

struct ContactEvent {
  double time = 0.0;
  MotoPart part = MotoPart::FrontWheel;
  bool with_car = false;  // false: wheel-road contact
  double force = 0.0;     // normal force magnitude, N
  ContactSide side = ContactSide::None;
};

// Per-wheel torque command. Braking opposes spin and is split
// front/rear; acceleration drives the rear wheel only.
struct Controls {
  double fw_torque = 0.0;  // N m
  double rw_torque = 0.0;
};

struct Trajectory {
  double dt = 1e-4;
  std::vector<double> time;
  MatX q, v, a;               // n x 8 histories
  MatX wheel_road_force;      // n x 2 (front, rear) normal force magnitude
  MatX wheel_car_force;       // n x 2 contact force magnitude
  MatX frame_contact;         // n x 2 (left, right) in {0,1}
  std::vector<ContactEvent> events;
  std::string scenario_id;
  std::string set_id;

  std::size_t size() const { return time.size(); }

  std::optional<double> first_car_contact_time() const {
    for (const auto& e : events) {
      if (e.with_car) return e.time;
    }
    return std::nullopt;
  }
};

}  // namespace crashdet::moto
