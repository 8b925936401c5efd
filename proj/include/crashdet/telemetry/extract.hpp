#pragma once

#include "crashdet/moto/state.hpp"
#include "crashdet/telemetry/dataset.hpp"

namespace crashdet::telemetry {

// Per-frame residual wheel contact forces: tire-road plus tire-car, per wheel.
MatX residual_wheel_force(const moto::Trajectory& traj);

// Latched crash label: 0 before the first moto-car contact, 1 from it onward.
VecXi label(const moto::Trajectory& traj);

// Full 23-channel extraction at the trajectory's native rate.
ScenarioFrames extract_channels(const moto::Trajectory& traj);

}  // namespace crashdet::telemetry
