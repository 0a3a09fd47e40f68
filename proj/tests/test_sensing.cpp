#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "antdyn/errors.hpp"
#include "antdyn/sensing.hpp"
#include "oracles.hpp"

using namespace antdyn;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t idx(Segment s) { return static_cast<std::size_t>(s); }

struct Scene {
  AgentState agent;
  std::vector<Point> ants;
};

Scene random_scene(std::mt19937_64& rng, int n_ants, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Scene s;
  s.agent = {640 + 200 * u(rng), 640 + 200 * u(rng), 0, kPi * u(rng), 0};
  for (int i = 0; i < n_ants; ++i) s.ants.push_back({s.agent.x + spread * u(rng), s.agent.y + spread * u(rng)});
  return s;
}

}  // namespace

TEST_CASE("segment_index examples") {
  CHECK(segment_index(0.0) == Segment::Fc);
  CHECK(segment_index(kPi) == Segment::B);
  CHECK(segment_index(-kPi + 1e-12) == Segment::B);
  CHECK(segment_index(kPi / 2 - 1e-9) == Segment::Fl1);
  CHECK(segment_index(kPi / 2) == Segment::L);
  CHECK(segment_index(-kPi / 2) == Segment::Fr1);
  CHECK(segment_index(-kPi / 2 - 1e-9) == Segment::R);
  CHECK(segment_index(kPi / 4) == Segment::Fl2);
  CHECK(segment_index(-kPi / 4) == Segment::Fr2);
  CHECK(segment_index(2 * kPi) == Segment::Fc);
}

TEST_CASE("segment sweep tiles the circle with the expected widths") {
  constexpr int n = 3600;
  std::array<int, kSegmentCount> hits{};
  for (int i = 0; i < n; ++i) {
    const double phi = -kPi + (i + 0.5) * 2 * kPi / n;
    const Segment s = segment_index(phi);
    CHECK(s == oracle::segment_by_degrees(phi));
    ++hits[idx(s)];
  }
  // 0.1 degree per bearing: five 36 degree and three 60 degree sectors.
  for (Segment s : {Segment::Fl1, Segment::Fl2, Segment::Fc, Segment::Fr2, Segment::Fr1}) CHECK(hits[idx(s)] == 360);
  for (Segment s : {Segment::R, Segment::B, Segment::L}) CHECK(hits[idx(s)] == 600);
}

TEST_CASE("forward_span generalises the layout") {
  // 100 degree forward span: 20 degree forward sectors, rear sectors of 86.67 degrees.
  const double span = 100.0 * kPi / 180.0;
  CHECK(segment_index(0.0, span) == Segment::Fc);
  CHECK(segment_index(45.0 * kPi / 180, span) == Segment::Fl1);
  CHECK(segment_index(55.0 * kPi / 180, span) == Segment::L);
  CHECK(segment_index(-55.0 * kPi / 180, span) == Segment::R);
  CHECK(segment_index(170.0 * kPi / 180, span) == Segment::B);
  VisionConfig v;
  v.forward_span = 2 * kPi;
  CHECK_THROWS_AS(v.validate(), ConfigError);
}

TEST_CASE("sense_segments") {
  VisionConfig v;
  const AgentState agent{640, 640, 0, 0.7, 0};
  SUBCASE("empty") {
    const auto c = sense_segments(agent, {}, v);
    for (double x : c) CHECK(x == 0.0);
    const std::vector<Point> far{{640 + 101 * std::cos(0.7), 640 + 101 * std::sin(0.7)}};
    for (double x : sense_segments(agent, far, v)) CHECK(x == 0.0);
  }
  SUBCASE("one ant dead ahead at half radius") {
    const std::vector<Point> ants{{640 + 50 * std::cos(0.7), 640 + 50 * std::sin(0.7)}};
    const auto c = sense_segments(agent, ants, v);
    for (std::size_t i = 0; i < kSegmentCount; ++i) CHECK(c[i] == (i == idx(Segment::Fc) ? 0.2 : 0.0));
  }
  SUBCASE("radius is inclusive and a coincident ant counts as forward-centre") {
    const AgentState a{640, 640, 0, 0, 0};
    const std::vector<Point> ants{{740, 640}, {640, 640}, {640, 740}};
    const auto c = count_segments(a, ants, v);
    CHECK(c[idx(Segment::Fc)] == 2);
    CHECK(c[idx(Segment::L)] == 1);
  }
  SUBCASE("saturation") {
    const std::vector<Point> ants(9, Point{645, 640});
    const auto c = sense_segments({640, 640, 0, 0, 0}, ants, v);
    CHECK(c[idx(Segment::Fc)] == 1.0);
  }
}

TEST_CASE("raw counts sum to the ants within radius") {
  std::mt19937_64 rng(31);
  VisionConfig v;
  for (int trial = 0; trial < 1000; ++trial) {
    const Scene s = random_scene(rng, 30, 150);
    int within = 0;
    for (const Point& p : s.ants) within += std::hypot(p.x - s.agent.x, p.y - s.agent.y) <= v.radius;
    const auto c = count_segments(s.agent, s.ants, v);
    int sum = 0;
    for (int x : c) sum += x;
    CHECK(sum == within);
  }
}

TEST_CASE("rotation equivariance and mirror symmetry") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  VisionConfig v;
  for (int trial = 0; trial < 500; ++trial) {
    const Scene s = random_scene(rng, 25, 140);
    const auto base = sense_segments(s.agent, s.ants, v);

    const double alpha = ang(rng);
    Scene r = s;
    r.agent.theta = wrap_angle(s.agent.theta + alpha);
    for (Point& p : r.ants) {
      const double dx = p.x - s.agent.x, dy = p.y - s.agent.y;
      p = {s.agent.x + dx * std::cos(alpha) - dy * std::sin(alpha), s.agent.y + dx * std::sin(alpha) + dy * std::cos(alpha)};
    }
    CHECK(sense_segments(r.agent, r.ants, v) == base);

    // Reflect across the heading axis.
    Scene m = s;
    const double c2 = std::cos(2 * s.agent.theta), s2 = std::sin(2 * s.agent.theta);
    for (Point& p : m.ants) {
      const double dx = p.x - s.agent.x, dy = p.y - s.agent.y;
      p = {s.agent.x + dx * c2 + dy * s2, s.agent.y + dx * s2 - dy * c2};
    }
    const auto mir = sense_segments(m.agent, m.ants, v);
    CHECK(mir[idx(Segment::Fl1)] == base[idx(Segment::Fr1)]);
    CHECK(mir[idx(Segment::Fr1)] == base[idx(Segment::Fl1)]);
    CHECK(mir[idx(Segment::Fl2)] == base[idx(Segment::Fr2)]);
    CHECK(mir[idx(Segment::Fr2)] == base[idx(Segment::Fl2)]);
    CHECK(mir[idx(Segment::L)] == base[idx(Segment::R)]);
    CHECK(mir[idx(Segment::R)] == base[idx(Segment::L)]);
    CHECK(mir[idx(Segment::Fc)] == base[idx(Segment::Fc)]);
    CHECK(mir[idx(Segment::B)] == base[idx(Segment::B)]);
  }
}

TEST_CASE("adding an ant never decreases a channel") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VisionConfig v;
  for (int trial = 0; trial < 2000; ++trial) {
    Scene s = random_scene(rng, 6, 120);
    const auto before = sense_segments(s.agent, s.ants, v);
    s.ants.push_back({s.agent.x + 100 * u(rng), s.agent.y + 100 * u(rng)});
    const auto after = sense_segments(s.agent, s.ants, v);
    for (std::size_t i = 0; i < kSegmentCount; ++i) CHECK(after[i] >= before[i]);
  }
}

TEST_CASE("build_observation") {
  const RecordingMeta meta;
  const KinematicParams k;
  const VisionConfig v;
  SUBCASE("centered rest state") {
    const AgentState a{640, 640, 0, 0.5, 0};
    const Observation o = build_observation(a, {}, meta, k, v);
    CHECK(o.size() == 13);
    const Observation expect{0.5, 0.5, 0, 0.5 / kPi, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < o.size(); ++i) CHECK(o[i] == doctest::Approx(expect[i]));
  }
  SUBCASE("order of named entries") {
    CHECK(observation_name(0) == "x");
    CHECK(observation_name(4) == "theta_dot");
    CHECK(observation_name(5) == "V_fl1");
    CHECK(observation_name(9) == "V_fr1");
    CHECK(observation_name(10) == "V_r");
    CHECK(observation_name(11) == "V_b");
    CHECK(observation_name(12) == "V_l");
  }
  SUBCASE("vision entries follow the segment order") {
    const AgentState a{640, 640, 0, 0, 0};
    const std::vector<Point> ants{{640 + 50 * std::cos(1.2), 640 + 50 * std::sin(1.2)},   // fl1
                                  {640 + 50 * std::cos(-2.0), 640 + 50 * std::sin(-2.0)},  // r
                                  {640 + 50 * std::cos(2.0), 640 + 50 * std::sin(2.0)}};   // l
    const Observation o = build_observation(a, ants, meta, k, v);
    CHECK(o[5] == 0.2);
    CHECK(o[10] == 0.2);
    CHECK(o[12] == 0.2);
    CHECK(o[11] == 0.0);
  }
  SUBCASE("fuzz bounds") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
      const double rho = 640 * std::sqrt(std::abs(u(rng)));
      const double ang = kPi * u(rng);
      const AgentState a{640 + rho * std::cos(ang), 640 + rho * std::sin(ang), k.v_max * u(rng),
                         wrap_angle(kPi * u(rng)), k.omega_max * u(rng)};
      std::vector<Point> ants(static_cast<std::size_t>(8 * std::abs(u(rng))));
      for (Point& p : ants) p = {a.x + 120 * u(rng), a.y + 120 * u(rng)};
      const Observation o = build_observation(a, ants, meta, k, v);
      REQUIRE(o[0] >= 0.0);
      REQUIRE(o[0] <= 1.0);
      REQUIRE(o[1] >= 0.0);
      REQUIRE(o[1] <= 1.0);
      for (std::size_t j = 2; j < 5; ++j) {
        REQUIRE(o[j] >= -1.0);
        REQUIRE(o[j] <= 1.0);
      }
      for (std::size_t j = 5; j < 13; ++j) {
        REQUIRE(o[j] >= 0.0);
        REQUIRE(o[j] <= 1.0);
      }
    }
  }
  SUBCASE("raw pose mode") {
    VisionConfig raw;
    raw.normalize_pose = false;
    const AgentState a{100, 200, 30, 1.0, -0.5};
    const Observation o = build_observation(a, {}, meta, k, raw);
    CHECK(o[0] == 100);
    CHECK(o[1] == 200);
    CHECK(o[2] == 30);
    CHECK(o[3] == 1.0);
    CHECK(o[4] == -0.5);
  }
}
