#include "crashdet/telemetry/extract.hpp"

#include "crashdet/core/errors.hpp"

namespace crashdet::telemetry {

using moto::Dof;

MatX residual_wheel_force(const moto::Trajectory& traj) {
  return traj.wheel_road_force + traj.wheel_car_force;
}

VecXi label(const moto::Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.size());
  VecXi out = VecXi::Zero(n);
  const auto t_contact = traj.first_car_contact_time();
  if (!t_contact) return out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (traj.time[static_cast<std::size_t>(i)] >= *t_contact) out[i] = 1;
  }
  return out;
}

ScenarioFrames extract_channels(const moto::Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.size());
  if (traj.q.rows() != n || traj.v.rows() != n || traj.a.rows() != n) {
    throw ValidationError("trajectory histories are inconsistent with its length");
  }

  ScenarioFrames f;
  f.scenario_id = traj.scenario_id;
  f.set_id = traj.set_id;
  f.time.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) f.time[i] = traj.time[static_cast<std::size_t>(i)];
  f.labels = label(traj);
  f.features.resize(n, kNumChannels);

  const MatX residual = residual_wheel_force(traj);

  f.features.col(0) = traj.v.col(Dof::kX);      // body lin. vel., x comp
  f.features.col(1) = traj.a.col(Dof::kX);      // body lin. acc., x comp
  f.features.col(2) = traj.v.col(Dof::kPitch);  // body ang. vel., y comp
  f.features.col(3) = traj.a.col(Dof::kPitch);  // body ang. acc., y comp
  f.features.col(4) = traj.v.col(Dof::kFwSpin);
  f.features.col(5) = traj.a.col(Dof::kFwSpin);
  f.features.col(6) = traj.v.col(Dof::kRwSpin);
  f.features.col(7) = traj.a.col(Dof::kRwSpin);
  f.features.col(8) = traj.q.col(Dof::kSwing);
  f.features.col(9) = traj.v.col(Dof::kSwing);
  f.features.col(10) = traj.a.col(Dof::kSwing);
  f.features.col(11) = traj.q.col(Dof::kFork);
  f.features.col(12) = traj.v.col(Dof::kFork);
  f.features.col(13) = traj.a.col(Dof::kFork);
  f.features.col(14) = traj.q.col(Dof::kDefl);
  f.features.col(15) = traj.v.col(Dof::kDefl);
  f.features.col(16) = traj.a.col(Dof::kDefl);
  f.features.col(17) = residual.col(0);
  f.features.col(18) = residual.col(1);
  f.features.col(19) = traj.v.col(Dof::kFwSpin) - traj.v.col(Dof::kRwSpin);
  f.features.col(20) = traj.a.col(Dof::kFwSpin) - traj.a.col(Dof::kRwSpin);
  f.features.col(21) = traj.frame_contact.col(0);
  f.features.col(22) = traj.frame_contact.col(1);
  return f;
}

}  // namespace crashdet::telemetry
