#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crashdet/core/errors.hpp"
#include "crashdet/moto/simulator.hpp"

using namespace crashdet;
using namespace crashdet::moto;

namespace {

SimEnv flat_env() {
  SimEnv env;
  env.road = RoadProfile();
  return env;
}

}  // namespace

TEST_CASE("static equilibrium on flat road stays put") {
  MotoParams p;
  Simulator sim(p, flat_env());
  MotoState s = sim.settle(10.0);

  MotoState ref = s;
  for (int i = 0; i < 20000; ++i) {  // 2 s
    sim.step(s, Controls{}, 1e-4, 0.0);
  }
  CHECK((s.q - ref.q).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(s.v.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("settled pose carries the full weight on the tires") {
  MotoParams p;
  Simulator sim(p, flat_env());
  MotoState s = sim.settle(10.0);

  StepInfo info;
  sim.step(s, Controls{}, 1e-4, 0.0, &info);
  const double total = info.road_force_fw + info.road_force_rw;
  CHECK(total == doctest::Approx(p.total_mass() * kGravity).epsilon(0.01));
  CHECK(info.road_force_fw > 0.0);
  CHECK(info.road_force_rw > 0.0);
}

TEST_CASE("braking decreases both wheel spin magnitudes monotonically") {
  MotoParams p;
  Simulator sim(p, flat_env());
  MotoState s = sim.settle(10.0);
  const double v0 = 15.0;
  s.v[kX] = v0;
  s.v[kFwSpin] = -v0 / p.fw_radius;
  s.v[kRwSpin] = -v0 / p.rw_radius;

  // skip the brake-application transient (nose dive raises the front
  // contact-point speed for a few hundredths of a second)
  double prev_fw = std::numeric_limits<double>::infinity();
  double prev_rw = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int i = 0; i < 20000; ++i) {
    const Controls c = resolve_torque_command(-300.0, p, s);
    sim.step(s, c, 1e-4, 0.0);
    if (i >= 1500 && i % 100 == 99) {
      const double fw = std::abs(s.v[kFwSpin]);
      const double rw = std::abs(s.v[kRwSpin]);
      if (fw > prev_fw + 1e-9 || rw > prev_rw + 1e-9) monotone = false;
      prev_fw = fw;
      prev_rw = rw;
    }
  }
  CHECK(monotone);
  CHECK(std::abs(s.v[kFwSpin]) < v0 / p.fw_radius);
}

TEST_CASE("coasting energy matches a dt/100 reference within 0.5%") {
  MotoParams p;
  SimEnv env = flat_env();
  Simulator sim(p, env);
  MotoState s0 = sim.settle(10.0);
  s0.v[kX] = 8.0;
  s0.v[kFwSpin] = -8.0 / p.fw_radius;
  s0.v[kRwSpin] = -8.0 / p.rw_radius;

  const double horizon = 0.5;
  MotoState coarse = s0;
  for (int i = 0; i < static_cast<int>(horizon / 1e-4); ++i) {
    sim.step(coarse, Controls{}, 1e-4, 0.0);
  }
  MotoState fine = s0;
  for (int i = 0; i < static_cast<int>(horizon / 1e-6); ++i) {
    sim.step(fine, Controls{}, 1e-6, 0.0);
  }
  const double e_coarse = total_energy(p, env, coarse);
  const double e_fine = total_energy(p, env, fine);
  CHECK(std::abs(e_coarse - e_fine) / std::abs(e_fine) < 0.005);
}

TEST_CASE("front deflection stays exactly zero without car contact") {
  MotoParams p;
  Simulator sim(p, flat_env());
  MotoState s = sim.settle(10.0);
  s.v[kX] = 20.0;
  s.v[kFwSpin] = -20.0 / p.fw_radius;
  s.v[kRwSpin] = -20.0 / p.rw_radius;
  for (int i = 0; i < 30000; ++i) {
    const Controls c = resolve_torque_command(i < 15000 ? -450.0 : 450.0, p, s);
    sim.step(s, c, 1e-4, 0.0);
  }
  CHECK(s.q[kDefl] == 0.0);
  CHECK(s.defl_dir == 0);
}

TEST_CASE("detect_contact basics") {
  MotoParams p;
  MotoState s;
  s.q[kZ] = p.fw_radius + 0.45;

  CarObstacle car;
  car.center_x = s.q[kX] + 5.0;  // ~4 m clearance ahead of the front wheel

  SUBCASE("disjoint footprints have no contact") {
    CHECK(!detect_contact(p, s, car).has_value());
  }
  SUBCASE("coincident footprints contact with positive force") {
    car.center_x = s.q[kX];
    auto e = detect_contact(p, s, car);
    REQUIRE(e.has_value());
    CHECK(e->force > 0.0);
    CHECK(e->with_car);
  }
  SUBCASE("contact side follows the lateral coordinate of the leading point") {
    // broadside car shifted laterally: the plan camber bows the body side
    // toward the car's middle, so the leading contact sits on that side
    car.center_x = s.q[kX] + 1.0;
    car.offset_y = 0.8;
    auto left = detect_contact(p, s, car);
    REQUIRE(left.has_value());
    CHECK(left->side == ContactSide::Left);

    car.offset_y = -0.8;
    auto right = detect_contact(p, s, car);
    REQUIRE(right.has_value());
    CHECK(right->side == ContactSide::Right);
  }
}

TEST_CASE("head-on crash produces one first contact and a decel spike") {
  MotoParams p;
  SimEnv env = flat_env();
  CarObstacle car;
  car.center_x = 18.0;
  env.car = car;

  RunSetup setup;
  setup.v0 = 13.4;
  setup.x0 = 2.0;
  setup.horizon = 3.0;
  setup.post_contact = 0.3;
  setup.scenario_id = "b1_test";
  Trajectory traj = run_simulation(p, env, setup);

  auto t_contact = traj.first_car_contact_time();
  REQUIRE(t_contact.has_value());

  // geometric time-to-contact oracle: gap / v
  Simulator sim(p, env);
  MotoState s0 = sim.settle(setup.x0);
  const Kinematics kin = compute_kinematics(p, s0.q, s0.v);
  const double gap = sim.barrier().face_x0 - (kin.fw_pos.x() + p.fw_radius);
  CHECK(*t_contact == doctest::Approx(gap / setup.v0).epsilon(0.02));

  // exactly one first event; tie window of one step
  int first_events = 0;
  for (const auto& e : traj.events) {
    if (e.with_car && e.time <= *t_contact + 1e-9) ++first_events;
  }
  CHECK(first_events == 1);

  // large negative longitudinal spike after contact
  double min_ax = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.time[i] >= *t_contact) min_ax = std::min(min_ax, traj.a(i, kX));
  }
  CHECK(min_ax < -30.0);

  // plastic deflection engaged and never decreased in magnitude
  double prev = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double d = std::abs(traj.q(i, kDefl));
    if (d < prev - 1e-12) monotone = false;
    prev = d;
  }
  CHECK(monotone);
}

TEST_CASE("max-offset grazing contact is later and weaker than centered") {
  MotoParams p;
  auto run_case = [&](double offset) {
    SimEnv env = flat_env();
    CarObstacle car;
    car.center_x = 18.0;
    car.offset_y = offset;
    env.car = car;
    RunSetup setup;
    setup.v0 = 10.0;
    setup.x0 = 2.0;
    setup.horizon = 3.5;
    setup.post_contact = 0.25;
    return run_simulation(p, env, setup);
  };
  Trajectory centered = run_case(0.0);
  Trajectory grazing = run_case(1.2);

  auto tc = centered.first_car_contact_time();
  auto tg = grazing.first_car_contact_time();
  REQUIRE(tc.has_value());
  REQUIRE(tg.has_value());
  CHECK(*tg > *tc);

  const double peak_c = centered.wheel_car_force.col(0).maxCoeff();
  const double peak_g = grazing.wheel_car_force.col(0).maxCoeff();
  CHECK(peak_g < peak_c);
}

TEST_CASE("step rejects invalid dt and non-finite states") {
  MotoParams p;
  Simulator sim(p, flat_env());
  MotoState s;
  CHECK_THROWS_AS(sim.step(s, Controls{}, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(sim.step(s, Controls{}, 2e-3, 0.0), ValidationError);
  s.q[kZ] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sim.step(s, Controls{}, 1e-4, 0.0), IntegrationError);
}

TEST_CASE("trajectory determinism: identical setup gives identical output") {
  MotoParams p;
  SimEnv env = flat_env();
  CarObstacle car;
  car.center_x = 15.0;
  env.car = car;
  RunSetup setup;
  setup.v0 = 9.0;
  setup.horizon = 2.0;
  Trajectory a = run_simulation(p, env, setup);
  Trajectory b = run_simulation(p, env, setup);
  REQUIRE(a.size() == b.size());
  CHECK((a.q - b.q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.v - b.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.events.size() == b.events.size());
}
