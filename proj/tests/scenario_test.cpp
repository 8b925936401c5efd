#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "crashdet/scenario/iso.hpp"
#include "crashdet/scenario/lhs.hpp"
#include "crashdet/scenario/manifest.hpp"
#include "crashdet/scenario/sets.hpp"

using namespace crashdet;
using namespace crashdet::scenario;

namespace {

// Independent stratum-membership count: exactly one sample per stratum in
// every dimension.
bool stratified(const MatX& samples, const std::vector<ParamRange>& ranges) {
  const int n = static_cast<int>(samples.rows());
  for (int d = 0; d < samples.cols(); ++d) {
    const auto& r = ranges[static_cast<std::size_t>(d)];
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      const double width = (r.high - r.low) / n;
      if (width == 0.0) {
        if (samples(i, d) != r.low) return false;
        counts[0] = n;  // degenerate range: everything in the single value
        continue;
      }
      const int k = std::min(n - 1, static_cast<int>((samples(i, d) - r.low) / width));
      if (k < 0) return false;
      ++counts[static_cast<std::size_t>(k)];
    }
    if (r.high > r.low) {
      for (int c : counts) {
        if (c != 1) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("lhs: one stratum per sample, all n") {
  const std::vector<ParamRange> ranges = {{"a", 0.0, 6.0}, {"b", 0.0, 360.0}, {"c", -1.2, 1.2}};
  for (int n : {1, 4, 100}) {
    const MatX s = lhs_sample(ranges, n, 42);
    REQUIRE(s.rows() == n);
    REQUIRE(s.cols() == 3);
    CHECK(stratified(s, ranges));
  }
}

TEST_CASE("lhs: n=1 lands inside the range") {
  const MatX s = lhs_sample({{"x", 0.0, 6.0}}, 1, 7);
  CHECK(s(0, 0) >= 0.0);
  CHECK(s(0, 0) < 6.0);
}

TEST_CASE("lhs: degenerate range collapses to the single value") {
  const MatX s = lhs_sample({{"x", 2.5, 2.5}}, 8, 7);
  for (int i = 0; i < 8; ++i) CHECK(s(i, 0) == 2.5);
}

TEST_CASE("lhs: deterministic per seed") {
  const std::vector<ParamRange> r = {{"a", -3.0, 9.0}, {"b", 0.0, 1.0}};
  CHECK(lhs_sample(r, 16, 5) == lhs_sample(r, 16, 5));
  CHECK(lhs_sample(r, 16, 5) != lhs_sample(r, 16, 6));
}

TEST_CASE("a1 road: zero amplitude and noise is flat") {
  const auto road = build_road_a1(0.0, 0.0, 0.0, 1);
  CHECK(road.max_abs_slope() == 0.0);
  CHECK(road.height(150.0) == 0.0);
  CHECK(road.heights().size() == 1501);
}

TEST_CASE("a1 road: 6 m amplitude peaks at 12% gradient") {
  const auto road = build_road_a1(6.0, 0.0, 0.0, 1);
  CHECK(road.max_abs_slope() == doctest::Approx(0.12).epsilon(0.001));
}

TEST_CASE("a1 road: 180 degree phase negates the base profile") {
  const auto a = build_road_a1(4.0, 0.0, 0.0, 1);
  const auto b = build_road_a1(4.0, 180.0, 0.0, 1);
  for (std::size_t i = 0; i < a.heights().size(); i += 10) {
    CHECK(a.heights()[i] == doctest::Approx(-b.heights()[i]).epsilon(1e-12));
  }
}

TEST_CASE("a1 road: out-of-range parameters are rejected") {
  CHECK_THROWS_AS(build_road_a1(7.0, 0.0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(build_road_a1(1.0, 400.0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(build_road_a1(1.0, 0.0, 0.5, 1), ValidationError);
}

TEST_CASE("a2 obstacles match their archetype") {
  ObstacleParams p;
  p.depth = 0.09;
  p.height = 0.11;
  p.length = 1.2;

  const auto pothole = build_obstacle_a2(ObstacleKind::Pothole, p);
  double lo = 0.0;
  for (double h : pothole.heights()) lo = std::min(lo, h);
  CHECK(lo == doctest::Approx(-0.09));
  CHECK(pothole.height(2.0) == 0.0);
  CHECK(pothole.height(290.0) == 0.0);

  const auto curb = build_obstacle_a2(ObstacleKind::CurbUp, p);
  CHECK(curb.height(2.0) == 0.0);
  CHECK(curb.height(200.0) == doctest::Approx(0.11));
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < curb.heights().size(); ++i) {
    if (curb.heights()[i + 1] < curb.heights()[i] - 1e-12) monotone = false;
  }
  CHECK(monotone);

  const auto steps = build_obstacle_a2(ObstacleKind::CurbsDown, p);
  CHECK(steps.height(290.0) == doctest::Approx(-3 * 0.11));

  const auto bump = build_obstacle_a2(ObstacleKind::Speedbump, p);
  p.length = 3.5;
  double hi = 0.0;
  for (double h : bump.heights()) hi = std::max(hi, h);
  CHECK(hi <= 0.11 + 1e-12);
  CHECK(hi > 0.0);
}

TEST_CASE("set sizes and class assignment") {
  const auto a1 = make_set_a1(100, 1);
  const auto a2 = make_set_a2(20, 2);
  const auto b1 = make_set_b1(100, 3);
  const auto b2 = make_set_b2(100, 4);
  const auto b3 = make_set_b3(5);
  CHECK(a1.size() == 100);
  CHECK(a2.size() == 20);
  CHECK(b1.size() == 100);
  CHECK(b2.size() == 100);
  CHECK(b3.size() == 25);

  for (const auto& s : a1) CHECK(!s.crash_class());
  for (const auto& s : a2) CHECK(!s.crash_class());
  for (const auto& s : b1) CHECK(s.crash_class());
  for (const auto& s : b3) CHECK(s.crash_class());

  // A.2: 4 use cases, balanced
  std::map<int, int> uses;
  for (const auto& s : a2) uses[static_cast<int>(s.param("use_case"))]++;
  CHECK(uses.size() == 4);
  for (const auto& [k, v] : uses) CHECK(v == 5);
}

TEST_CASE("crash builders validate table ranges") {
  CHECK_NOTHROW(build_crash_b1(13.4, 0.0, 0.0));
  CHECK_NOTHROW(build_crash_b1(6.7, 90.0, 0.0));
  CHECK_NOTHROW(build_crash_b1(10.0, 0.0, 1.2));
  CHECK_THROWS_AS(build_crash_b1(5.0, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(build_crash_b1(10.0, 0.0, 1.5), ValidationError);

  CHECK_NOTHROW(build_crash_b2(13.4, 0.0, 0.0));
  CHECK_NOTHROW(build_crash_b2(6.7, 180.0, 0.0));
  CHECK_NOTHROW(build_crash_b2(10.0, 90.0, 5.0));
  CHECK_THROWS_AS(build_crash_b2(10.0, 90.0, 9.0), ValidationError);
}

TEST_CASE("iso catalog: 25 unique codes in 3 categories") {
  const auto& cat = iso_catalog();
  CHECK(cat.size() == 25);
  std::set<std::string> codes;
  std::map<DelayCategory, int> cats;
  for (const auto& c : cat) {
    codes.insert(c.code);
    cats[c.category]++;
    CHECK(c.car_speed >= 0.0);
    CHECK(c.moto_speed >= 0.0);
    CHECK(c.position.size() == 3);
  }
  CHECK(codes.size() == 25);
  CHECK(cats.size() == 3);
  int total = 0;
  for (const auto& [k, v] : cats) total += v;
  CHECK(total == 25);
}

TEST_CASE("iso code parsing") {
  const auto c = parse_iso_code("413-6.7/13.4");
  CHECK(c.position == "413");
  CHECK(c.car_speed == doctest::Approx(6.7));
  CHECK(c.moto_speed == doctest::Approx(13.4));
  CHECK(format_iso_code("413", 6.7, 13.4) == "413-6.7/13.4");

  CHECK_THROWS_AS(parse_iso_code("413"), ParseError);
  CHECK_THROWS_AS(parse_iso_code("4x3-1/2"), ParseError);
  CHECK_THROWS_AS(parse_iso_code("413-a/2"), ParseError);
}

TEST_CASE("manifest round-trips specs unchanged") {
  auto specs = make_set_b1(5, 11);
  auto b3 = make_set_b3(12);
  specs.insert(specs.end(), b3.begin(), b3.end());

  const auto path = std::filesystem::temp_directory_path() / "crashdet_manifest_test.jsonl";
  write_manifest(specs, path, "deadbeef");
  const auto m = read_manifest(path);
  std::filesystem::remove(path);

  CHECK(m.config_hash == "deadbeef");
  REQUIRE(m.specs.size() == specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(m.specs[i].id == specs[i].id);
    CHECK(m.specs[i].set == specs[i].set);
    CHECK(m.specs[i].seed == specs[i].seed);
    CHECK(m.specs[i].horizon == specs[i].horizon);
    CHECK(m.specs[i].params == specs[i].params);
    CHECK(m.specs[i].iso_code == specs[i].iso_code);
  }
}

TEST_CASE("b3 lowering: every catalog entry produces a colliding setup") {
  moto::MotoParams params;
  for (const auto& spec : make_set_b3(9)) {
    const Lowered low = lower_scenario(spec);
    REQUIRE(low.env.car.has_value());
    const auto eb =
        moto::make_effective_barrier(*low.env.car, low.env.strip_width, low.env.car_approach);
    CHECK(eb.hit);
    CHECK(eb.engagement > 0.0);
  }
}
