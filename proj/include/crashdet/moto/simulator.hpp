#pragma once

#include <optional>
#include <vector>

#include "crashdet/moto/car.hpp"
#include "crashdet/moto/params.hpp"
#include "crashdet/moto/road.hpp"
#include "crashdet/moto/state.hpp"

namespace crashdet::moto {

struct SimEnv {
  RoadProfile road;
  std::optional<CarObstacle> car;
  int car_approach = +1;    // +1: car ahead of the moto, -1: behind
  double strip_width = 0.7; // moto width presented to the car, top view
};

// World-frame kinematics of the three bodies for a given configuration:
// wheel-center positions/velocities, their 2x8 position Jacobians and the
// velocity-product acceleration terms.
struct Kinematics {
  Vec2 fw_pos, rw_pos;
  Vec2 fw_vel, rw_vel;
  Eigen::Matrix<double, 2, kNumDof> fw_jac, rw_jac;
  Vec2 fw_bias, rw_bias;
};

Kinematics compute_kinematics(const MotoParams& p, const DofVec& q, const DofVec& v);

// Mass matrix from Jacobian projection of the three rigid bodies.
DofMat mass_matrix(const MotoParams& p, const Kinematics& k);

// Kinetic + gravitational + elastic (suspension, tire) energy. Plastic work
// and travel-stop penalties are excluded.
double total_energy(const MotoParams& p, const SimEnv& env, const MotoState& s);

struct PartContact {
  MotoPart part;
  double force = 0.0;        // >= 0
  double penetration = 0.0;  // m
  ContactSide side = ContactSide::None;
};

// Quasi-static car contact query at a given simulation time: returns the
// strongest contacting part, if any, with a penetration-proportional force.
std::optional<ContactEvent> detect_contact(const MotoParams& p, const MotoState& s,
                                           const CarObstacle& car, double t = 0.0,
                                           int approach = +1);

// Per-step outputs consumed by the recording loop.
struct StepInfo {
  DofVec accel = DofVec::Zero();
  double road_force_fw = 0.0, road_force_rw = 0.0;
  double car_force_fw = 0.0, car_force_rw = 0.0;
  bool frame_contact_left = false, frame_contact_right = false;
  std::vector<PartContact> car_contacts;  // all currently penetrating parts
};

// Maps the single A.1-style torque command onto the wheels: braking (cmd < 0)
// splits 70/30 front/rear against the current spin; acceleration drives the
// rear wheel only.
Controls resolve_torque_command(double cmd, const MotoParams& p, const MotoState& s);

class Simulator {
 public:
  Simulator(MotoParams params, SimEnv env);

  // One fixed-step semi-implicit update. dt must lie in (0, 1e-3].
  // Throws IntegrationError naming the offending channel on non-finite state.
  void step(MotoState& s, const Controls& c, double dt, double t, StepInfo* info = nullptr) const;

  // Rests the motorcycle on the road at the given x and lets transients decay;
  // returns a zero-velocity equilibrium state.
  MotoState settle(double x0) const;

  const MotoParams& params() const { return params_; }
  const SimEnv& env() const { return env_; }
  const EffectiveBarrier& barrier() const { return barrier_; }

 private:
  MotoParams params_;
  SimEnv env_;
  EffectiveBarrier barrier_;
};

struct RunSetup {
  double v0 = 0.0;             // initial forward speed
  double x0 = 2.0;             // initial frame x
  double torque_command = 0.0; // A.1 accel/brake parameter, N m
  double horizon = 4.0;        // s
  double post_contact = 0.4;   // s simulated past first car contact
  double dt = 1e-4;
  std::string scenario_id;
  std::string set_id;
};

// Full scenario integration with per-step recording and contact events.
Trajectory run_simulation(const MotoParams& params, const SimEnv& env, const RunSetup& setup);

}  // namespace crashdet::moto
