#pragma once

#include <vector>

#include "crashdet/moto/simulator.hpp"
#include "crashdet/scenario/spec.hpp"

namespace crashdet::scenario {

// --- road construction -------------------------------------------------

// Sinusoidal base profile with superimposed uniform noise and a flat start
// platform. The fixed base wavenumber (period ~ road length) caps the
// steepest base slope at 12% when the amplitude reaches its 6 m maximum.
moto::RoadProfile build_road_a1(double amplitude, double phase_deg, double noise_amp,
                                std::uint64_t seed);

enum class ObstacleKind { Pothole, CurbUp, CurbsDown, Speedbump };

inline const char* obstacle_name(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::Pothole: return "pothole";
    case ObstacleKind::CurbUp: return "curb_up";
    case ObstacleKind::CurbsDown: return "curbs_down";
    case ObstacleKind::Speedbump: return "speedbump";
  }
  return "?";
}

struct ObstacleParams {
  double depth = 0.08;    // pothole depth, m
  double height = 0.10;   // curb/bump height, m
  double length = 1.0;    // pothole/bump extent, m
  double start_x = 15.0;  // obstacle leading edge
};

// Localized obstacle archetype on an otherwise flat road.
moto::RoadProfile build_obstacle_a2(ObstacleKind kind, const ObstacleParams& params);

// --- scenario families --------------------------------------------------

std::vector<ScenarioSpec> make_set_a1(int n, std::uint64_t seed, double horizon = 4.0);
std::vector<ScenarioSpec> make_set_a2(int n, std::uint64_t seed);

// Single-spec builders with Table-range validation.
ScenarioSpec build_crash_b1(double v, double alpha_deg, double offset_y);
ScenarioSpec build_crash_b2(double v_car, double beta_deg, double gamma_deg);

std::vector<ScenarioSpec> make_set_b1(int n, std::uint64_t seed);
std::vector<ScenarioSpec> make_set_b2(int n, std::uint64_t seed);

// --- lowering into the simulator ----------------------------------------

struct Lowered {
  moto::SimEnv env;
  moto::RunSetup run;
};

// Interprets a spec's parameter map per set family and produces the
// simulation environment and run setup. For crash sets the car placement is
// nudged toward the travel line if the sampled geometry would miss entirely
// (B.* scenarios must collide by definition).
Lowered lower_scenario(const ScenarioSpec& spec);

// Convenience: lower + integrate, attaching the scenario id.
moto::Trajectory simulate(const ScenarioSpec& spec, const moto::MotoParams& params);

}  // namespace crashdet::scenario
