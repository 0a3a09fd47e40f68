#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "antdyn/arena.hpp"
#include "antdyn/errors.hpp"

using namespace antdyn;

namespace {

const ArenaGeometry kArena{640, 640, 640};

AgentState random_state(std::mt19937_64& rng, const KinematicParams& k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double rho = 640.0 * std::sqrt(std::abs(u(rng)));
  const double a = std::numbers::pi * u(rng);
  return {640 + rho * std::cos(a), 640 + rho * std::sin(a), k.v_max * u(rng), wrap_angle(std::numbers::pi * u(rng)),
          k.omega_max * u(rng)};
}

bool satisfies_invariants(const AgentState& s, const KinematicParams& k) {
  return kArena.contains(s.x, s.y) && std::abs(s.s) <= k.v_max && std::abs(s.theta_dot) <= k.omega_max &&
         s.theta > -std::numbers::pi && s.theta <= std::numbers::pi;
}

}  // namespace

TEST_CASE("defaults") {
  const KinematicParams k;
  CHECK(k.dt == 0.1);
  CHECK(k.v_max == 192.0);
  CHECK(k.a_lin == 384.0);
  CHECK(k.omega_max == doctest::Approx(std::numbers::pi));
  CHECK(k.a_ang == doctest::Approx(2 * std::numbers::pi));
  CHECK(k.damping == 0.9);
  CHECK_NOTHROW(k.validate());
  KinematicParams bad;
  bad.damping = 1.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.dt = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("action set has four members in index order") {
  CHECK(kAllActions.size() == 4);
  CHECK(action_from_index(0) == Action::Forward);
  CHECK(action_from_index(1) == Action::Backward);
  CHECK(action_from_index(2) == Action::TurnLeft);
  CHECK(action_from_index(3) == Action::TurnRight);
  CHECK_FALSE(action_from_index(4).has_value());
  CHECK_FALSE(action_from_index(-1).has_value());
  CHECK(to_string(Action::TurnLeft) == "turn-left");
}

TEST_CASE("forward from rest integrates one step") {
  KinematicParams k;
  k.damping = 1.0;
  const AgentState rest{640, 640, 0, 0.3, 0};
  const AgentState s = apply_action(rest, Action::Forward, k, kArena);
  CHECK(s.s == doctest::Approx(k.a_lin * k.dt));
  CHECK(s.theta == 0.3);
  CHECK(s.theta_dot == 0.0);
  CHECK(s.x == doctest::Approx(640 + s.s * k.dt * std::cos(0.3)));
  CHECK(s.y == doctest::Approx(640 + s.s * k.dt * std::sin(0.3)));
}

TEST_CASE("turn left from rest rotates in place") {
  const KinematicParams k;
  const AgentState rest{640, 640, 0, 0, 0};
  const AgentState s = apply_action(rest, Action::TurnLeft, k, kArena);
  CHECK(s.theta_dot == doctest::Approx(k.a_ang * k.dt));
  CHECK(s.theta_dot > 0);
  CHECK(s.theta == doctest::Approx(s.theta_dot * k.dt));
  CHECK(s.x == 640.0);
  CHECK(s.y == 640.0);
  const AgentState r = apply_action(rest, Action::TurnRight, k, kArena);
  CHECK(r.theta_dot == doctest::Approx(-k.a_ang * k.dt));
}

TEST_CASE("leaving the disc projects onto the boundary and stops") {
  const KinematicParams k;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const double a = ang(rng);
    const AgentState s0{640 + 639 * std::cos(a), 640 + 639 * std::sin(a), k.v_max, a, 0};
    const AgentState s1 = apply_action(s0, Action::Forward, k, kArena);
    // Oracle: the unconstrained end point, pushed radially to distance r.
    const double ux = s0.x + k.v_max * k.dt * std::cos(a);
    const double uy = s0.y + k.v_max * k.dt * std::sin(a);
    const double d = std::hypot(ux - 640, uy - 640);
    CHECK(std::hypot(s1.x - 640, s1.y - 640) == doctest::Approx(640).epsilon(1e-12));
    CHECK(s1.x == doctest::Approx(640 + (ux - 640) * 640 / d).epsilon(1e-12));
    CHECK(s1.y == doctest::Approx(640 + (uy - 640) * 640 / d).epsilon(1e-12));
    CHECK(s1.s == 0.0);
  }
}

TEST_CASE("px_of_mm") {
  const RecordingMeta meta;
  CHECK(px_of_mm(100, meta) == 1280.0);
  CHECK(px_of_mm(0, meta) == 0.0);
  CHECK(px_of_mm(15, meta) == doctest::Approx(192.0));
}

TEST_CASE("apply_action preserves invariants (fuzz)") {
  const KinematicParams k;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> act(0, 3);
  for (int i = 0; i < 20000; ++i) {
    AgentState s = random_state(rng, k);
    for (int step = 0; step < 5; ++step) {
      s = apply_action(s, static_cast<Action>(act(rng)), k, kArena);
      REQUIRE(satisfies_invariants(s, k));
    }
  }
}

TEST_CASE("forward then backward from rest cancels speed") {
  KinematicParams k;
  k.damping = 1.0;
  const AgentState rest{640, 640, 0, 1.0, 0};
  const AgentState s = apply_action(apply_action(rest, Action::Forward, k, kArena), Action::Backward, k, kArena);
  CHECK(s.s == 0.0);
}

TEST_CASE("heading wrap") {
  CHECK(wrap_angle(std::numbers::pi) == std::numbers::pi);
  CHECK(wrap_angle(-std::numbers::pi) == std::numbers::pi);
  CHECK(wrap_angle(0.0) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = u(rng);
    const double w = wrap_angle(t);
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
    CHECK(std::abs(wrap_angle(t + 2 * std::numbers::pi) - w) <= 1e-12);
    CHECK(std::abs(std::sin(w) - std::sin(t)) <= 1e-12);
  }
}

TEST_CASE("turn actions are mirror images") {
  const KinematicParams k;
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> act(0, 3);
  auto mirror_action = [](Action a) {
    if (a == Action::TurnLeft) return Action::TurnRight;
    if (a == Action::TurnRight) return Action::TurnLeft;
    return a;
  };
  auto reflect = [](const AgentState& s) {
    return AgentState{s.x, 2 * 640 - s.y, s.s, wrap_angle(-s.theta), -s.theta_dot};
  };
  for (int trial = 0; trial < 500; ++trial) {
    AgentState a = random_state(rng, k);
    AgentState b = reflect(a);
    for (int step = 0; step < 20; ++step) {
      const Action act_a = static_cast<Action>(act(rng));
      a = apply_action(a, act_a, k, kArena);
      b = apply_action(b, mirror_action(act_a), k, kArena);
      const AgentState ra = reflect(a);
      CHECK(b.x == doctest::Approx(ra.x).epsilon(1e-9));
      CHECK(b.y == doctest::Approx(ra.y).epsilon(1e-9));
      CHECK(b.s == doctest::Approx(ra.s).epsilon(1e-9));
      CHECK(b.theta_dot == doctest::Approx(ra.theta_dot).epsilon(1e-9));
      CHECK(std::abs(std::sin(b.theta - ra.theta)) <= 1e-9);
    }
  }
}
