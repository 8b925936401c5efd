#include "crashdet/scenario/sets.hpp"

#include <cmath>
#include <cstdio>

#include "crashdet/core/random.hpp"
#include "crashdet/scenario/iso.hpp"
#include "crashdet/scenario/lhs.hpp"

namespace crashdet::scenario {

namespace {

constexpr double kPlatformLen = 20.0;  // flat start platform, m
// Base wavenumber: period ~ road length, calibrated so the steepest base
// slope reaches exactly 12% at the 6 m amplitude cap.
constexpr double kBaseWavenumber = 0.12 / 6.0;  // rad/m

constexpr double kCrashGap = 15.0;  // m between moto front and car material
constexpr double kIsoGap = 12.0;
constexpr double kCarHalfLen = 0.5 * 4.67;

std::string make_id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%03d", prefix, i);
  return buf;
}

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    throw ValidationError(std::string(name) + " = " + std::to_string(v) +
                          " outside its range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  }
}

// Shrinks the lateral offset until the footprint reaches the travel strip;
// crash scenarios collide by definition.
void ensure_barrier_hits(moto::SimEnv& env) {
  for (int i = 0; i < 32; ++i) {
    const auto eb = moto::make_effective_barrier(*env.car, env.strip_width, env.car_approach);
    if (eb.hit) return;
    env.car->offset_y *= 0.9;
  }
  env.car->offset_y = 0.0;
}

// Translates the car so its leading material sits at target_x.
void place_barrier(moto::SimEnv& env, double target_x) {
  ensure_barrier_hits(env);
  const auto eb = moto::make_effective_barrier(*env.car, env.strip_width, env.car_approach);
  env.car->center_x += target_x - eb.face_x0;
}

}  // namespace

moto::RoadProfile build_road_a1(double amplitude, double phase_deg, double noise_amp,
                                std::uint64_t seed) {
  check_range(amplitude, 0.0, 6.0, "sine amplitude");
  check_range(phase_deg, 0.0, 360.0, "phase shift");
  check_range(noise_amp, 0.0, 0.025, "road noise");

  const double phase = deg2rad(phase_deg);
  Rng rng(seed);
  std::vector<double> h(moto::RoadProfile::num_samples());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = static_cast<double>(i) * moto::RoadProfile::kSpacing;
    const double s = std::max(0.0, x - kPlatformLen);
    h[i] = amplitude * std::sin(kBaseWavenumber * s + phase);
    if (x > kPlatformLen && noise_amp > 0.0) {
      h[i] += rng.uniform(-noise_amp, noise_amp);
    }
  }
  return moto::RoadProfile(std::move(h));
}

moto::RoadProfile build_obstacle_a2(ObstacleKind kind, const ObstacleParams& p) {
  if (!(p.depth > 0.0 && p.height > 0.0 && p.length >= 4 * moto::RoadProfile::kSpacing)) {
    throw ValidationError("obstacle geometry must be positive (length >= 0.8 m)");
  }
  std::vector<double> h(moto::RoadProfile::num_samples(), 0.0);
  const double dx = moto::RoadProfile::kSpacing;
  auto x_of = [&](std::size_t i) { return static_cast<double>(i) * dx; };

  switch (kind) {
    case ObstacleKind::Pothole:
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = x_of(i);
        if (x > p.start_x && x < p.start_x + p.length) h[i] = -p.depth;
      }
      break;
    case ObstacleKind::CurbUp:
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (x_of(i) >= p.start_x) h[i] = p.height;
      }
      break;
    case ObstacleKind::CurbsDown: {
      const double step_gap = 2.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = x_of(i);
        int steps = 0;
        for (int s = 0; s < 3; ++s) {
          if (x >= p.start_x + s * step_gap) ++steps;
        }
        h[i] = -p.height * steps;
      }
      break;
    }
    case ObstacleKind::Speedbump:
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = x_of(i);
        if (x >= p.start_x && x <= p.start_x + p.length) {
          h[i] = 0.5 * p.height * (1.0 - std::cos(2.0 * M_PI * (x - p.start_x) / p.length));
        }
      }
      break;
  }
  return moto::RoadProfile(std::move(h));
}

std::vector<ScenarioSpec> make_set_a1(int n, std::uint64_t seed, double horizon) {
  const std::vector<ParamRange> ranges = {
      {"amplitude", 0.0, 6.0}, {"phase", 0.0, 360.0},   {"noise", 0.0, 0.025},
      {"v0", 3.0, 23.0},       {"torque", -500.0, 500.0}};
  const MatX samples = lhs_sample(ranges, n, derive_seed(seed, 1));

  std::vector<ScenarioSpec> specs;
  specs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ScenarioSpec s;
    s.id = make_id("A1", i);
    s.set = SetId::A1;
    s.seed = derive_seed(seed, 100 + static_cast<std::uint64_t>(i));
    s.horizon = horizon;
    for (std::size_t d = 0; d < ranges.size(); ++d) {
      s.params[ranges[d].name] = samples(i, static_cast<Eigen::Index>(d));
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

std::vector<ScenarioSpec> make_set_a2(int n, std::uint64_t seed) {
  static constexpr ObstacleKind kKinds[] = {ObstacleKind::Pothole, ObstacleKind::CurbUp,
                                            ObstacleKind::CurbsDown, ObstacleKind::Speedbump};
  std::vector<ScenarioSpec> specs;
  specs.reserve(static_cast<std::size_t>(n));
  int idx = 0;
  for (int k = 0; k < 4; ++k) {
    const int count = n / 4 + (k < n % 4 ? 1 : 0);
    if (count == 0) continue;
    std::vector<ParamRange> ranges = {{"v0", 3.0, 23.0}};  // same speed range as A.1
    switch (kKinds[k]) {
      case ObstacleKind::Pothole:
        ranges.push_back({"depth", 0.03, 0.10});
        ranges.push_back({"length", 0.8, 1.6});
        break;
      case ObstacleKind::CurbUp:
      case ObstacleKind::CurbsDown:
        ranges.push_back({"height", 0.06, 0.12});
        break;
      case ObstacleKind::Speedbump:
        ranges.push_back({"height", 0.05, 0.10});
        ranges.push_back({"length", 3.0, 4.0});
        break;
    }
    const MatX samples =
        lhs_sample(ranges, count, derive_seed(seed, 10 + static_cast<std::uint64_t>(k)));
    for (int i = 0; i < count; ++i) {
      ScenarioSpec s;
      s.id = make_id("A2", idx);
      s.set = SetId::A2;
      s.seed = derive_seed(seed, 200 + static_cast<std::uint64_t>(idx));
      s.params["use_case"] = static_cast<double>(k);
      for (std::size_t d = 0; d < ranges.size(); ++d) {
        s.params[ranges[d].name] = samples(i, static_cast<Eigen::Index>(d));
      }
      const double v0 = s.params["v0"];
      s.horizon = std::min(8.0, 15.0 / v0 + 2.5);
      specs.push_back(std::move(s));
      ++idx;
    }
  }
  return specs;
}

ScenarioSpec build_crash_b1(double v, double alpha_deg, double offset_y) {
  check_range(v, 6.7, 13.4, "v_moto_init_b1");
  check_range(alpha_deg, 0.0, 360.0, "alpha_z");
  check_range(offset_y, -1.2, 1.2, "o_y");
  ScenarioSpec s;
  s.set = SetId::B1;
  s.params["v0"] = v;
  s.params["alpha"] = alpha_deg;
  s.params["offset"] = offset_y;
  s.horizon = kCrashGap / v + 1.0;
  return s;
}

ScenarioSpec build_crash_b2(double v_car, double beta_deg, double gamma_deg) {
  check_range(v_car, 6.7, 13.4, "v_car_init_b2");
  check_range(beta_deg, 0.0, 360.0, "beta_z");
  check_range(gamma_deg, -5.0, 5.0, "gamma_z");
  ScenarioSpec s;
  s.set = SetId::B2;
  s.params["v_car"] = v_car;
  s.params["beta"] = beta_deg;
  s.params["gamma"] = gamma_deg;
  s.horizon = kCrashGap / v_car + 1.0;
  return s;
}

std::vector<ScenarioSpec> make_set_b1(int n, std::uint64_t seed) {
  const std::vector<ParamRange> ranges = {
      {"v0", 6.7, 13.4}, {"alpha", 0.0, 360.0}, {"offset", -1.2, 1.2}};
  const MatX samples = lhs_sample(ranges, n, derive_seed(seed, 2));
  std::vector<ScenarioSpec> specs;
  for (int i = 0; i < n; ++i) {
    ScenarioSpec s = build_crash_b1(samples(i, 0), samples(i, 1), samples(i, 2));
    s.id = make_id("B1", i);
    s.seed = derive_seed(seed, 300 + static_cast<std::uint64_t>(i));
    specs.push_back(std::move(s));
  }
  return specs;
}

std::vector<ScenarioSpec> make_set_b2(int n, std::uint64_t seed) {
  const std::vector<ParamRange> ranges = {
      {"v_car", 6.7, 13.4}, {"beta", 0.0, 360.0}, {"gamma", -5.0, 5.0}};
  const MatX samples = lhs_sample(ranges, n, derive_seed(seed, 3));
  std::vector<ScenarioSpec> specs;
  for (int i = 0; i < n; ++i) {
    ScenarioSpec s = build_crash_b2(samples(i, 0), samples(i, 1), samples(i, 2));
    s.id = make_id("B2", i);
    s.seed = derive_seed(seed, 400 + static_cast<std::uint64_t>(i));
    specs.push_back(std::move(s));
  }
  return specs;
}

Lowered lower_scenario(const ScenarioSpec& spec) {
  Lowered low;
  low.run.scenario_id = spec.id;
  low.run.set_id = set_name(spec.set);
  low.run.horizon = spec.horizon;
  low.run.x0 = 2.0;
  const double front_reach = low.run.x0 + 1.05;  // moto leading material
  const double rear_reach = low.run.x0 - 1.2;

  switch (spec.set) {
    case SetId::A1: {
      low.env.road = build_road_a1(spec.param("amplitude"), spec.param("phase"),
                                   spec.param("noise"), spec.seed);
      low.run.v0 = spec.param("v0");
      low.run.torque_command = spec.param("torque");
      break;
    }
    case SetId::A2: {
      const auto kind = static_cast<ObstacleKind>(static_cast<int>(spec.param("use_case")));
      ObstacleParams op;
      op.depth = spec.param_or("depth", op.depth);
      op.height = spec.param_or("height", op.height);
      op.length = spec.param_or("length", op.length);
      low.env.road = build_obstacle_a2(kind, op);
      low.run.v0 = spec.param("v0");
      break;
    }
    case SetId::B1: {
      moto::CarObstacle car;
      car.yaw = deg2rad(std::fmod(spec.param("alpha"), 360.0));
      car.offset_y = spec.param("offset");
      car.center_x = front_reach + kCrashGap + kCarHalfLen;
      low.env.car = car;
      low.env.car_approach = +1;
      place_barrier(low.env, front_reach + kCrashGap);
      low.run.v0 = spec.param("v0");
      break;
    }
    case SetId::B2: {
      const double beta = deg2rad(spec.param("beta"));
      const double v_car = spec.param("v_car");
      const bool from_front = std::cos(beta) >= 0.0;
      moto::CarObstacle car;
      car.yaw = deg2rad(90.0);  // striking car approaches nose-first
      car.offset_y = kCrashGap * std::tan(deg2rad(spec.param("gamma")));
      car.long_scale = std::max(std::abs(std::cos(beta)), 0.2);
      car.speed_x = from_front ? -v_car : v_car;
      low.env.car_approach = from_front ? +1 : -1;
      // presented moto width grows for side strikes
      low.env.strip_width = 0.7 * std::abs(std::cos(beta)) + 2.1 * std::abs(std::sin(beta));
      car.center_x = from_front ? front_reach + kCrashGap + kCarHalfLen
                                : rear_reach - kCrashGap - kCarHalfLen;
      low.env.car = car;
      place_barrier(low.env, from_front ? front_reach + kCrashGap : rear_reach - kCrashGap);
      low.run.v0 = 0.0;
      break;
    }
    case SetId::B3: {
      const IsoConfig& cfg = iso_lookup(spec.iso_code);
      moto::CarObstacle car;
      car.yaw = cfg.car_yaw;
      car.offset_y = cfg.offset;
      car.long_scale = cfg.long_scale;
      car.speed_x = cfg.approach > 0 ? -cfg.closing_speed : cfg.closing_speed;
      low.env.car_approach = cfg.approach;
      car.center_x = cfg.approach > 0 ? front_reach + kIsoGap + kCarHalfLen
                                      : rear_reach - kIsoGap - kCarHalfLen;
      low.env.car = car;
      place_barrier(low.env, cfg.approach > 0 ? front_reach + kIsoGap : rear_reach - kIsoGap);
      low.run.v0 = cfg.moto_speed;
      const double closing = cfg.moto_speed + cfg.closing_speed;
      low.run.horizon = closing > 0.1 ? kIsoGap / closing + 1.0 : spec.horizon;
      break;
    }
  }
  return low;
}

moto::Trajectory simulate(const ScenarioSpec& spec, const moto::MotoParams& params) {
  const Lowered low = lower_scenario(spec);
  return moto::run_simulation(params, low.env, low.run);
}

}  // namespace crashdet::scenario
