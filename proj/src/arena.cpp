#include "antdyn/arena.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "antdyn/errors.hpp"

namespace antdyn {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Forward:
      return "forward";
    case Action::Backward:
      return "backward";
    case Action::TurnLeft:
      return "turn-left";
    case Action::TurnRight:
      return "turn-right";
  }
  return "?";
}

std::optional<Action> action_from_index(long long index) {
  if (index < 0 || index >= static_cast<long long>(kActionCount)) return std::nullopt;
  return static_cast<Action>(index);
}

void KinematicParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ConfigError(std::string("kinematics.") + name + " must be positive");
    }
  };
  positive(dt, "dt");
  positive(v_max, "v_max");
  positive(a_lin, "a_lin");
  positive(omega_max, "omega_max");
  positive(a_ang, "a_ang");
  if (!(damping >= 0.0 && damping <= 1.0)) {
    throw ConfigError("kinematics.damping must be in [0, 1]");
  }
}

ArenaGeometry ArenaGeometry::from_meta(const RecordingMeta& meta) {
  return {meta.center_px(), meta.center_px(), meta.radius_px()};
}

bool ArenaGeometry::contains(double x, double y) const {
  return std::hypot(x - cx, y - cy) <= radius * (1.0 + 1e-12);
}

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

AgentState apply_action(const AgentState& state, Action action, const KinematicParams& params,
                        const ArenaGeometry& arena) {
  double lin = 0.0;
  double ang = 0.0;
  switch (action) {
    case Action::Forward:
      lin = params.a_lin;
      break;
    case Action::Backward:
      lin = -params.a_lin;
      break;
    case Action::TurnLeft:
      ang = params.a_ang;
      break;
    case Action::TurnRight:
      ang = -params.a_ang;
      break;
  }

  AgentState next = state;
  next.s = std::clamp(params.damping * state.s + lin * params.dt, -params.v_max, params.v_max);
  next.theta_dot =
      std::clamp(params.damping * state.theta_dot + ang * params.dt, -params.omega_max, params.omega_max);
  next.theta = wrap_angle(state.theta + next.theta_dot * params.dt);
  next.x = state.x + next.s * params.dt * std::cos(next.theta);
  next.y = state.y + next.s * params.dt * std::sin(next.theta);

  const double dx = next.x - arena.cx;
  const double dy = next.y - arena.cy;
  const double d = std::hypot(dx, dy);
  if (d > arena.radius) {
    next.x = arena.cx + dx * (arena.radius / d);
    next.y = arena.cy + dy * (arena.radius / d);
    next.s = 0.0;
  }
  return next;
}

double px_of_mm(double value_mm, const RecordingMeta& meta) {
  return value_mm * meta.resolution_px / meta.arena_diameter_mm;
}

}  // namespace antdyn
