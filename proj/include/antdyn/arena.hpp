#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>

#include "antdyn/recording.hpp"

namespace antdyn {

/// Discrete policy outputs, in the fixed index order 0..3.
enum class Action : std::uint8_t { Forward = 0, Backward = 1, TurnLeft = 2, TurnRight = 3 };

inline constexpr std::size_t kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kAllActions = {Action::Forward, Action::Backward,
                                                                 Action::TurnLeft, Action::TurnRight};

std::string_view to_string(Action a);
/// Maps an index in 0..3 to an Action; nullopt otherwise.
std::optional<Action> action_from_index(long long index);

/// Pose and velocities of the controllable ant. Units: px, px/s, rad, rad/s.
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;          // signed speed along the heading
  double theta = 0.0;      // heading in (-pi, pi], counter-clockwise from +x
  double theta_dot = 0.0;  // positive = counter-clockwise

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Damped first-order motion model. Defaults reach v_max in about half a
/// second and a half turn in about a second.
struct KinematicParams {
  double dt = 0.1;
  double v_max = 192.0;
  double a_lin = 384.0;
  double omega_max = std::numbers::pi;
  double a_ang = 2.0 * std::numbers::pi;
  double damping = 0.9;

  /// Throws ConfigError on non-positive values or damping outside [0, 1].
  void validate() const;
};

struct ArenaGeometry {
  double cx = 640.0;
  double cy = 640.0;
  double radius = 640.0;

  static ArenaGeometry from_meta(const RecordingMeta& meta);
  bool contains(double x, double y) const;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// One integration step under `action`. Leaving the disc projects the agent
/// radially back onto the boundary and zeroes its speed.
AgentState apply_action(const AgentState& state, Action action, const KinematicParams& params,
                        const ArenaGeometry& arena);

double px_of_mm(double value_mm, const RecordingMeta& meta);

}  // namespace antdyn
