#include "crashdet/moto/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "crashdet/core/errors.hpp"

namespace crashdet::moto {

namespace {

inline double sat(double x) { return std::clamp(x, -1.0, 1.0); }

constexpr double kCarFriction = 0.3;  // moto-bodywork vs car friction

struct FramePoint {
  MotoPart part;
  Vec2 local;
};

std::vector<FramePoint> frame_probe_points(const MotoParams& p) {
  static constexpr MotoPart kParts[] = {MotoPart::FrameFront, MotoPart::FrameTop,
                                        MotoPart::FrameMid, MotoPart::FrameRear};
  std::vector<FramePoint> pts;
  for (std::size_t i = 0; i < p.frame_points.size(); ++i) {
    pts.push_back({kParts[std::min<std::size_t>(i, 3)], p.frame_points[i]});
  }
  return pts;
}

}  // namespace

Kinematics compute_kinematics(const MotoParams& p, const DofVec& q, const DofVec& v) {
  Kinematics k;
  const double theta = q[kPitch];
  const Eigen::Matrix2d r = rot2(theta);
  const Vec2 base(q[kX], q[kZ]);
  const Vec2 vbase(v[kX], v[kZ]);
  const double w = v[kPitch];

  // Front assembly: fork axis at (caster - deflection) from vertical, length
  // shortens with travel.
  {
    const double psi = p.caster - q[kDefl];
    const Vec2 d(std::sin(psi), -std::cos(psi));
    const Vec2 dp(std::cos(psi), std::sin(psi));
    const double len = p.fork_len - q[kFork];
    const Vec2 r_loc = p.steer_head + len * d;
    const Vec2 world_r = r * r_loc;

    k.fw_pos = base + world_r;
    k.fw_jac.setZero();
    k.fw_jac.col(kX) = Vec2(1, 0);
    k.fw_jac.col(kZ) = Vec2(0, 1);
    k.fw_jac.col(kPitch) = perp(world_r);
    k.fw_jac.col(kFork) = r * (-d);
    k.fw_jac.col(kDefl) = r * (-len * dp);

    const Vec2 rdot_loc = -v[kFork] * d - len * v[kDefl] * dp;
    const Vec2 rquad_loc = 2.0 * v[kFork] * v[kDefl] * dp - len * v[kDefl] * v[kDefl] * d;
    k.fw_vel = vbase + w * perp(world_r) + r * rdot_loc;
    k.fw_bias = -w * w * world_r + 2.0 * w * perp(r * rdot_loc) + r * rquad_loc;
  }

  // Rear assembly: swing arm, compression rotates the wheel up.
  {
    const double sigma = p.swing_angle0 - q[kSwing];
    const Vec2 e(-std::cos(sigma), -std::sin(sigma));
    const Vec2 ep(std::sin(sigma), -std::cos(sigma));
    const Vec2 r_loc = p.swing_pivot + p.swing_len * e;
    const Vec2 world_r = r * r_loc;

    k.rw_pos = base + world_r;
    k.rw_jac.setZero();
    k.rw_jac.col(kX) = Vec2(1, 0);
    k.rw_jac.col(kZ) = Vec2(0, 1);
    k.rw_jac.col(kPitch) = perp(world_r);
    k.rw_jac.col(kSwing) = r * (-p.swing_len * ep);

    const Vec2 rdot_loc = -p.swing_len * v[kSwing] * ep;
    const Vec2 rquad_loc = -p.swing_len * v[kSwing] * v[kSwing] * e;
    k.rw_vel = vbase + w * perp(world_r) + r * rdot_loc;
    k.rw_bias = -w * w * world_r + 2.0 * w * perp(r * rdot_loc) + r * rquad_loc;
  }
  return k;
}

DofMat mass_matrix(const MotoParams& p, const Kinematics& k) {
  DofMat m = DofMat::Zero();
  m(kX, kX) += p.frame_mass;
  m(kZ, kZ) += p.frame_mass;
  m(kPitch, kPitch) += p.frame_inertia;
  m += p.fw_mass * (k.fw_jac.transpose() * k.fw_jac);
  m += p.rw_mass * (k.rw_jac.transpose() * k.rw_jac);
  m(kFwSpin, kFwSpin) += p.fw_inertia;
  m(kRwSpin, kRwSpin) += p.rw_inertia;
  return m;
}

namespace {

struct TireContact {
  bool touching = false;
  double normal_force = 0.0;
  Vec2 force = Vec2::Zero();
  double spin_torque = 0.0;
  double penetration = 0.0;
};

TireContact tire_road_contact(const MotoParams& p, const RoadProfile& road, const Vec2& pos,
                              const Vec2& vel, double spin_rate, double radius) {
  TireContact c;
  const Vec2 n = road.normal(pos.x());
  const Vec2 surf(pos.x(), road.height(pos.x()));
  const double dist = n.dot(pos - surf);
  const double pen = radius - dist;
  if (pen <= 0.0) return c;

  const double pen_rate = -n.dot(vel);
  const double fn = std::max(0.0, p.tire_k * pen + p.tire_c * pen_rate);
  if (fn <= 0.0) return c;

  const Vec2 t(n.y(), -n.x());  // forward tangent
  const double roll_arm = radius - pen;
  const double slip = t.dot(vel) + spin_rate * roll_arm;
  const double ft = -p.friction * fn * sat(slip / p.slip_reg);

  c.touching = true;
  c.penetration = pen;
  c.normal_force = fn;
  c.force = fn * n + ft * t;
  // force acts at the contact point r_c = -(radius - pen) * n from the center
  const Vec2 rc = -roll_arm * n;
  c.spin_torque = rc.x() * c.force.y() - rc.y() * c.force.x();
  return c;
}

struct CarPartHit {
  MotoPart part;
  double penetration = 0.0;
  double force_mag = 0.0;  // along the approach axis
  Vec2 force = Vec2::Zero();
  Vec2 rc = Vec2::Zero();  // lever from body reference to contact point
  ContactSide side = ContactSide::None;
};

// Penalty contact of a circular probe against the effective barrier.
std::optional<CarPartHit> probe_vs_barrier(const EffectiveBarrier& eb, MotoPart part,
                                           const Vec2& pos, const Vec2& vel, double radius,
                                           double t) {
  const double xf = eb.face_x(t);
  const double pen = eb.approach > 0 ? (pos.x() + radius) - xf : xf - (pos.x() - radius);
  if (pen <= 0.0) return std::nullopt;
  if (pos.y() + radius < eb.z_low || pos.y() - radius > eb.z_high) return std::nullopt;

  const double pen_rate = eb.approach > 0 ? vel.x() - eb.speed_x : eb.speed_x - vel.x();
  const double fmag =
      std::max(0.0, eb.engagement * (eb.contact_k * pen + eb.contact_c * pen_rate));
  if (fmag <= 0.0) return std::nullopt;

  CarPartHit hit;
  hit.part = part;
  hit.penetration = pen;
  hit.force_mag = fmag;
  const double fx = -static_cast<double>(eb.approach) * fmag;
  const double fz = -kCarFriction * fmag * sat(vel.y() / 0.2);
  hit.force = Vec2(fx, fz);
  hit.rc = Vec2(static_cast<double>(eb.approach) * radius, 0.0);
  hit.side = eb.y_contact >= 0.0 ? ContactSide::Left : ContactSide::Right;
  return hit;
}

}  // namespace

Controls resolve_torque_command(double cmd, const MotoParams& p, const MotoState& s) {
  Controls c;
  if (cmd >= 0.0) {
    // drive: rear wheel only; forward rolling spin is negative
    c.rw_torque = -cmd;
  } else {
    const double mag = -cmd;
    c.fw_torque = -p.brake_front_share * mag * sat(s.v[kFwSpin] / p.spin_reg);
    c.rw_torque = -(1.0 - p.brake_front_share) * mag * sat(s.v[kRwSpin] / p.spin_reg);
  }
  return c;
}

Simulator::Simulator(MotoParams params, SimEnv env)
    : params_(std::move(params)), env_(std::move(env)) {
  params_.validate();
  if (env_.car) {
    env_.car->validate();
    barrier_ = make_effective_barrier(*env_.car, env_.strip_width, env_.car_approach);
  }
}

void Simulator::step(MotoState& s, const Controls& c, double dt, double t, StepInfo* info) const {
  if (!(dt > 0.0 && dt <= 1e-3)) throw ValidationError("step dt must lie in (0, 1e-3]");
  if (auto bad = s.first_non_finite()) {
    throw IntegrationError(std::string("non-finite state entering step: channel '") +
                           dof_name(*bad) + "'");
  }

  const Kinematics kin = compute_kinematics(params_, s.q, s.v);
  DofMat m = mass_matrix(params_, kin);
  DofVec f = DofVec::Zero();

  // gravity
  f[kZ] -= params_.frame_mass * kGravity;
  f += kin.fw_jac.transpose() * Vec2(0.0, -params_.fw_mass * kGravity);
  f += kin.rw_jac.transpose() * Vec2(0.0, -params_.rw_mass * kGravity);

  // suspension spring-dampers and travel stops
  {
    const double sft = s.q[kFork], sfv = s.v[kFork];
    f[kFork] += -params_.fork_k * sft - params_.fork_c * sfv;
    if (sft > params_.fork_travel_max) {
      f[kFork] += -params_.stop_k * (sft - params_.fork_travel_max) -
                  params_.stop_c * std::max(sfv, 0.0);
    } else if (sft < params_.fork_travel_min) {
      f[kFork] += -params_.stop_k * (sft - params_.fork_travel_min) -
                  params_.stop_c * std::min(sfv, 0.0);
    }
    const double sw = s.q[kSwing], swv = s.v[kSwing];
    f[kSwing] += -params_.swing_k * sw - params_.swing_c * swv;
    if (sw > params_.swing_max) {
      f[kSwing] += -params_.stop_k * 0.1 * (sw - params_.swing_max) -
                   params_.stop_c * 0.1 * std::max(swv, 0.0);
    } else if (sw < params_.swing_min) {
      f[kSwing] += -params_.stop_k * 0.1 * (sw - params_.swing_min) -
                   params_.stop_c * 0.1 * std::min(swv, 0.0);
    }
  }

  // tire-road contact
  const TireContact fw_road = tire_road_contact(params_, env_.road, kin.fw_pos, kin.fw_vel,
                                                s.v[kFwSpin], params_.fw_radius);
  if (fw_road.touching) {
    f += kin.fw_jac.transpose() * fw_road.force;
    f[kFwSpin] += fw_road.spin_torque;
  }
  const TireContact rw_road = tire_road_contact(params_, env_.road, kin.rw_pos, kin.rw_vel,
                                                s.v[kRwSpin], params_.rw_radius);
  if (rw_road.touching) {
    f += kin.rw_jac.transpose() * rw_road.force;
    f[kRwSpin] += rw_road.spin_torque;
  }

  // wheel torques with pitch reaction on the frame
  f[kFwSpin] += c.fw_torque;
  f[kRwSpin] += c.rw_torque;
  f[kPitch] -= c.fw_torque + c.rw_torque;

  // car contact
  if (info) {
    info->road_force_fw = fw_road.normal_force;
    info->road_force_rw = rw_road.normal_force;
    info->car_force_fw = info->car_force_rw = 0.0;
    info->frame_contact_left = info->frame_contact_right = false;
    info->car_contacts.clear();
  }
  if (env_.car && barrier_.hit) {
    const Eigen::Matrix2d r = rot2(s.q[kPitch]);
    const Vec2 base(s.q[kX], s.q[kZ]);
    const Vec2 vbase(s.v[kX], s.v[kZ]);

    auto apply_wheel = [&](MotoPart part, const Vec2& pos, const Vec2& vel,
                           const Eigen::Matrix<double, 2, kNumDof>& jac, double radius,
                           int spin_dof, double* force_out) {
      if (auto hit = probe_vs_barrier(barrier_, part, pos, vel, radius, t)) {
        f += jac.transpose() * hit->force;
        f[spin_dof] += hit->rc.x() * hit->force.y() - hit->rc.y() * hit->force.x();
        if (force_out) *force_out = hit->force_mag;
        if (info) info->car_contacts.push_back({part, hit->force_mag, hit->penetration, hit->side});
      }
    };
    apply_wheel(MotoPart::FrontWheel, kin.fw_pos, kin.fw_vel, kin.fw_jac, params_.fw_radius,
                kFwSpin, info ? &info->car_force_fw : nullptr);
    apply_wheel(MotoPart::RearWheel, kin.rw_pos, kin.rw_vel, kin.rw_jac, params_.rw_radius,
                kRwSpin, info ? &info->car_force_rw : nullptr);

    for (const auto& fp : frame_probe_points(params_)) {
      const Vec2 world_r = r * fp.local;
      const Vec2 pos = base + world_r;
      const Vec2 vel = vbase + s.v[kPitch] * perp(world_r);
      if (auto hit = probe_vs_barrier(barrier_, fp.part, pos, vel, params_.frame_point_radius, t)) {
        f[kX] += hit->force.x();
        f[kZ] += hit->force.y();
        f[kPitch] += world_r.x() * hit->force.y() - world_r.y() * hit->force.x();
        if (info) {
          info->car_contacts.push_back({fp.part, hit->force_mag, hit->penetration, hit->side});
          (hit->side == ContactSide::Left ? info->frame_contact_left
                                          : info->frame_contact_right) = true;
        }
      }
    }
  }

  // velocity-product (Coriolis/centrifugal) terms of the wheel carriers
  f -= params_.fw_mass * (kin.fw_jac.transpose() * kin.fw_bias);
  f -= params_.rw_mass * (kin.rw_jac.transpose() * kin.rw_bias);

  // Front deflection: rigid below yield, ratcheting plastic flow above.
  const double defl_load = f[kDefl];
  const bool at_stop = std::abs(s.q[kDefl]) >= params_.defl_max;
  int flow_dir = s.defl_dir;
  bool flowing = false;
  if (!at_stop) {
    const bool moving = flow_dir != 0 && s.v[kDefl] * flow_dir > 0.0;
    const int load_dir = defl_load > 0.0 ? 1 : -1;
    const bool yields = std::abs(defl_load) > params_.defl_yield &&
                        (flow_dir == 0 || load_dir == flow_dir);
    if (yields && flow_dir == 0) flow_dir = load_dir;
    flowing = moving || yields;
  }
  if (flowing) {
    f[kDefl] -= params_.defl_yield * flow_dir + params_.defl_c * s.v[kDefl];
  } else {
    m.row(kDefl).setZero();
    m.col(kDefl).setZero();
    m(kDefl, kDefl) = 1.0;
    f[kDefl] = 0.0;
    s.v[kDefl] = 0.0;
  }

  const DofVec accel = m.ldlt().solve(f);

  s.v += accel * dt;
  if (flowing) {
    s.defl_dir = flow_dir;
    if (s.v[kDefl] * flow_dir < 0.0) s.v[kDefl] = 0.0;  // no spring-back
  }
  s.q += s.v * dt;
  if (std::abs(s.q[kDefl]) > params_.defl_max) {
    s.q[kDefl] = std::copysign(params_.defl_max, s.q[kDefl]);
    s.v[kDefl] = 0.0;
  }

  if (auto bad = s.first_non_finite()) {
    throw IntegrationError(std::string("integration failure: channel '") + dof_name(*bad) +
                           "' became non-finite");
  }
  if (info) info->accel = accel;
}

MotoState Simulator::settle(double x0) const {
  MotoState s;
  s.q[kX] = x0;
  s.q[kZ] = env_.road.height(x0) + params_.fw_radius + 0.45;

  // Two decay passes with a velocity bleed, then freeze.
  MotoState work = s;
  const double dt = 1e-4;
  for (int round = 0; round < 2; ++round) {
    const int n = static_cast<int>(1.2 / dt);
    for (int i = 0; i < n; ++i) {
      step(work, Controls{}, dt, 0.0);
      work.v *= (1.0 - 60.0 * dt * dt) ;
      work.v[kX] *= (1.0 - 400.0 * dt * dt);
    }
    work.v.setZero();
  }
  work.q[kDefl] = 0.0;
  work.defl_dir = 0;
  return work;
}

std::optional<ContactEvent> detect_contact(const MotoParams& p, const MotoState& s,
                                           const CarObstacle& car, double t, int approach) {
  const EffectiveBarrier eb = make_effective_barrier(car, 0.7, approach);
  if (!eb.hit) return std::nullopt;

  const Kinematics kin = compute_kinematics(p, s.q, s.v);
  std::optional<ContactEvent> best;
  auto consider = [&](MotoPart part, const Vec2& pos, const Vec2&, double radius) {
    // quasi-static: stiffness force only
    const double xf = eb.face_x(t);
    const double pen = eb.approach > 0 ? (pos.x() + radius) - xf : xf - (pos.x() - radius);
    if (pen <= 0.0) return;
    if (pos.y() + radius < eb.z_low || pos.y() - radius > eb.z_high) return;
    ContactEvent e;
    e.time = t;
    e.part = part;
    e.with_car = true;
    e.force = eb.engagement * eb.contact_k * pen;
    e.side = eb.y_contact >= 0.0 ? ContactSide::Left : ContactSide::Right;
    if (!best || e.force > best->force) best = e;
  };
  consider(MotoPart::FrontWheel, kin.fw_pos, Vec2::Zero(), p.fw_radius);
  consider(MotoPart::RearWheel, kin.rw_pos, Vec2::Zero(), p.rw_radius);
  const Eigen::Matrix2d r = rot2(s.q[kPitch]);
  for (const auto& fp : frame_probe_points(p)) {
    consider(fp.part, Vec2(s.q[kX], s.q[kZ]) + r * fp.local, Vec2::Zero(), p.frame_point_radius);
  }
  return best;
}

double total_energy(const MotoParams& p, const SimEnv& env, const MotoState& s) {
  const Kinematics kin = compute_kinematics(p, s.q, s.v);
  const DofMat m = mass_matrix(p, kin);
  double e = 0.5 * s.v.dot(m * s.v);
  e += p.frame_mass * kGravity * s.q[kZ];
  e += p.fw_mass * kGravity * kin.fw_pos.y();
  e += p.rw_mass * kGravity * kin.rw_pos.y();
  e += 0.5 * p.fork_k * s.q[kFork] * s.q[kFork];
  e += 0.5 * p.swing_k * s.q[kSwing] * s.q[kSwing];
  auto tire_pe = [&](const Vec2& pos, double radius) {
    const Vec2 n = env.road.normal(pos.x());
    const Vec2 surf(pos.x(), env.road.height(pos.x()));
    const double pen = radius - n.dot(pos - surf);
    return pen > 0.0 ? 0.5 * p.tire_k * pen * pen : 0.0;
  };
  e += tire_pe(kin.fw_pos, p.fw_radius);
  e += tire_pe(kin.rw_pos, p.rw_radius);
  return e;
}

Trajectory run_simulation(const MotoParams& params, const SimEnv& env, const RunSetup& setup) {
  Simulator sim(params, env);

  MotoState s = sim.settle(setup.x0);
  s.v[kX] = setup.v0;
  s.v[kFwSpin] = -setup.v0 / params.fw_radius;
  s.v[kRwSpin] = -setup.v0 / params.rw_radius;

  const double dt = setup.dt;
  const std::size_t max_steps = static_cast<std::size_t>(std::ceil(setup.horizon / dt));

  Trajectory traj;
  traj.dt = dt;
  traj.scenario_id = setup.scenario_id;
  traj.set_id = setup.set_id;
  traj.time.reserve(max_steps + 1);
  traj.q.resize(max_steps + 1, kNumDof);
  traj.v.resize(max_steps + 1, kNumDof);
  traj.a.resize(max_steps + 1, kNumDof);
  traj.wheel_road_force.resize(max_steps + 1, 2);
  traj.wheel_car_force.resize(max_steps + 1, 2);
  traj.frame_contact.resize(max_steps + 1, 2);

  bool prev_car[6] = {false, false, false, false, false, false};
  bool prev_road[2] = {false, false};
  std::optional<double> first_contact;
  StepInfo info;

  std::size_t n = 0;
  const double road_margin = 5.0;
  for (std::size_t i = 0; i < max_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Controls c = resolve_torque_command(setup.torque_command, params, s);

    MotoState before = s;
    try {
      sim.step(s, c, dt, t, &info);
    } catch (const IntegrationError& e) {
      throw IntegrationError(std::string(e.what()) + " [scenario " + setup.scenario_id + "]");
    }

    traj.time.push_back(t);
    traj.q.row(n) = before.q.transpose();
    traj.v.row(n) = before.v.transpose();
    traj.a.row(n) = info.accel.transpose();
    traj.wheel_road_force(n, 0) = info.road_force_fw;
    traj.wheel_road_force(n, 1) = info.road_force_rw;
    traj.wheel_car_force(n, 0) = info.car_force_fw;
    traj.wheel_car_force(n, 1) = info.car_force_rw;
    traj.frame_contact(n, 0) = info.frame_contact_left ? 1.0 : 0.0;
    traj.frame_contact(n, 1) = info.frame_contact_right ? 1.0 : 0.0;

    // contact onset events
    const bool road_now[2] = {info.road_force_fw > 0.0, info.road_force_rw > 0.0};
    for (int wi = 0; wi < 2; ++wi) {
      if (road_now[wi] && !prev_road[wi]) {
        ContactEvent e;
        e.time = t;
        e.part = wi == 0 ? MotoPart::FrontWheel : MotoPart::RearWheel;
        e.with_car = false;
        e.force = wi == 0 ? info.road_force_fw : info.road_force_rw;
        traj.events.push_back(e);
      }
      prev_road[wi] = road_now[wi];
    }
    bool car_now[6] = {false, false, false, false, false, false};
    for (const auto& pc : info.car_contacts) {
      const int idx = static_cast<int>(pc.part);
      car_now[idx] = true;
      if (!prev_car[idx]) {
        ContactEvent e;
        e.time = t;
        e.part = pc.part;
        e.with_car = true;
        e.force = pc.force;
        e.side = pc.side;
        traj.events.push_back(e);
        if (!first_contact) first_contact = t;
      }
    }
    for (int pi = 0; pi < 6; ++pi) prev_car[pi] = car_now[pi];

    ++n;
    if (first_contact && t - *first_contact >= setup.post_contact) break;
    if (s.q[kX] > env.road.length() - road_margin) break;
  }

  traj.q.conservativeResize(n, kNumDof);
  traj.v.conservativeResize(n, kNumDof);
  traj.a.conservativeResize(n, kNumDof);
  traj.wheel_road_force.conservativeResize(n, 2);
  traj.wheel_car_force.conservativeResize(n, 2);
  traj.frame_contact.conservativeResize(n, 2);
  return traj;
}

}  // namespace crashdet::moto
