#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "antdyn/arena.hpp"
#include "antdyn/recording.hpp"
#include "antdyn/reward.hpp"
#include "antdyn/sensing.hpp"

namespace antdyn {

struct EnvConfig {
  RecordingMeta meta;
  KinematicParams kinematics;
  VisionConfig vision;
  RewardConfig reward;
  double t_lim_s = 30.0;
  double d_min = 128.0;  // px, minimum net displacement of a target window
  bool show_target = false;
  std::uint64_t seed = 0;

  /// Throws ConfigError. Requires t_lim_s to be a whole number of steps.
  void validate() const;
  /// Episode length T in steps.
  int horizon() const;
};

/// Parses an EnvConfig JSON document. Every field is optional; a missing
/// `meta` section takes `default_meta`. Unknown keys are rejected.
EnvConfig parse_env_config(std::string_view json_text, const RecordingMeta& default_meta = {});
EnvConfig load_env_config(const std::filesystem::path& path, const RecordingMeta& default_meta = {});
std::string env_config_to_json(const EnvConfig& config);

/// Stable keys: area_t, target_x, target_y, dist_to_target, frozen_ants.
using StepInfo = std::map<std::string, double>;

struct EpisodeState {
  int step_index = 0;
  AgentState agent;
  TargetSelection target;
  double replay_time = 0.0;  // recording time of the current step
  std::vector<Point> agent_trail;
  std::vector<Point> target_trail;
  double cumulative_reward = 0.0;

  friend bool operator==(const EpisodeState&, const EpisodeState&) = default;
};

struct StepResult {
  Observation observation{};
  double reward = 0.0;
  bool terminated = false;  // no failure states exist; always false
  bool truncated = false;   // true exactly at step T
  StepInfo info;
};

/// A recording resampled to the configured step, shareable read-only between
/// environments on different threads.
std::shared_ptr<const ColonyRecording> prepare_world(const ColonyRecording& recording,
                                                     const EnvConfig& config);

/// One controllable agent replaying a target trail against a recorded colony.
/// Single-threaded; distinct instances may share a world.
class Environment {
 public:
  Environment(EnvConfig config, std::shared_ptr<const ColonyRecording> world);
  Environment(EnvConfig config, const ColonyRecording& recording);

  /// Selects a target window with a PRNG seeded only by `seed` and places the
  /// agent on its first point, facing the target's first displacement.
  Observation reset(std::uint64_t seed);
  Observation reset() { return reset(config_.seed); }

  StepResult step(Action action);
  /// Replay oracle: places the agent on the target's next point instead of
  /// integrating kinematics.
  StepResult teleport_step();

  bool has_episode() const { return started_; }
  bool truncated() const { return started_ && state_.step_index >= horizon_; }
  int horizon() const { return horizon_; }
  const EpisodeState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const ColonyRecording& world() const { return *world_; }
  const StepInfo& last_info() const { return last_info_; }

  /// Replayed ants the agent can currently see (target excluded unless shown).
  std::vector<Point> visible_ants() const;

 private:
  StepResult advance(const AgentState& next_agent);
  Observation observe(const std::vector<Point>& ants) const;
  std::vector<Point> replayed_positions(double t, int& frozen) const;

  EnvConfig config_;
  std::shared_ptr<const ColonyRecording> world_;
  ArenaGeometry arena_;
  int horizon_ = 0;
  bool started_ = false;
  EpisodeState state_;
  StepInfo last_info_;
};

/// Builds an environment from an EnvConfig JSON document carrying exactly one
/// world source: `"data": "<bundle path>"` or `"synthetic": {SyntheticParams
/// fields..., "seed": n}`. A missing `meta` section adopts the recording's.
std::unique_ptr<Environment> environment_from_json(std::string_view json_text);

using PolicyFn = std::function<Action(const Observation&)>;

/// Resets `env` with `seed`, steps `policy` until truncation and returns the
/// episode reward.
double run_episode(Environment& env, std::uint64_t seed, const PolicyFn& policy);

}  // namespace antdyn
