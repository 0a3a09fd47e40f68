#include "antdyn/env.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "antdyn/errors.hpp"

namespace antdyn {

namespace {

using nlohmann::json;

void reject_unknown(const json& section, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, value] : section.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& section, const char* key, T& out, const std::string& where) {
  if (!section.contains(key)) return;
  const json& v = section.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("");
    } else {
      if (!v.is_number()) throw ConfigError("");
    }
    out = v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  if (!root.at(name).is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
  return root.at(name);
}

}  // namespace

void EnvConfig::validate() const {
  try {
    meta.validate();
  } catch (const DataError& e) {
    throw ConfigError(std::string("meta: ") + e.what());
  }
  kinematics.validate();
  vision.validate();
  reward.validate();
  if (!(std::isfinite(t_lim_s) && t_lim_s > 0.0)) throw ConfigError("t_lim_s must be positive");
  if (!(std::isfinite(d_min) && d_min >= 0.0)) throw ConfigError("d_min must be non-negative");
  const double steps = t_lim_s / kinematics.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 || std::round(steps) < 1.0) {
    throw ConfigError("t_lim_s / kinematics.dt must be a whole number of steps");
  }
}

int EnvConfig::horizon() const { return static_cast<int>(std::lround(t_lim_s / kinematics.dt)); }

EnvConfig parse_env_config(std::string_view json_text, const RecordingMeta& default_meta) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(root, {"meta", "kinematics", "vision", "reward", "t_lim_s", "d_min", "show_target", "seed"}, "");

  EnvConfig c;
  c.meta = default_meta;
  const json& meta = section(root, "meta");
  reject_unknown(meta, {"arena_diameter_mm", "resolution_px", "sample_rate_hz"}, "meta.");
  read(meta, "arena_diameter_mm", c.meta.arena_diameter_mm, "meta.");
  read(meta, "resolution_px", c.meta.resolution_px, "meta.");
  read(meta, "sample_rate_hz", c.meta.sample_rate_hz, "meta.");

  const json& kin = section(root, "kinematics");
  reject_unknown(kin, {"dt", "v_max", "a_lin", "omega_max", "a_ang", "damping"}, "kinematics.");
  read(kin, "dt", c.kinematics.dt, "kinematics.");
  read(kin, "v_max", c.kinematics.v_max, "kinematics.");
  read(kin, "a_lin", c.kinematics.a_lin, "kinematics.");
  read(kin, "omega_max", c.kinematics.omega_max, "kinematics.");
  read(kin, "a_ang", c.kinematics.a_ang, "kinematics.");
  read(kin, "damping", c.kinematics.damping, "kinematics.");

  const json& vis = section(root, "vision");
  reject_unknown(vis, {"radius", "n_norm", "forward_span", "normalize_pose"}, "vision.");
  read(vis, "radius", c.vision.radius, "vision.");
  read(vis, "n_norm", c.vision.n_norm, "vision.");
  read(vis, "forward_span", c.vision.forward_span, "vision.");
  read(vis, "normalize_pose", c.vision.normalize_pose, "vision.");

  const json& rew = section(root, "reward");
  reject_unknown(rew, {"reward_mode", "kappa"}, "reward.");
  if (rew.contains("reward_mode")) {
    if (!rew["reward_mode"].is_string()) throw ConfigError("reward.reward_mode must be a string");
    c.reward.mode = reward_mode_from_string(rew["reward_mode"].get<std::string>());
  }
  read(rew, "kappa", c.reward.kappa, "reward.");

  read(root, "t_lim_s", c.t_lim_s, "");
  read(root, "d_min", c.d_min, "");
  read(root, "show_target", c.show_target, "");
  read(root, "seed", c.seed, "");
  c.validate();
  return c;
}

EnvConfig load_env_config(const std::filesystem::path& path, const RecordingMeta& default_meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_env_config(ss.str(), default_meta);
}

std::string env_config_to_json(const EnvConfig& c) {
  nlohmann::ordered_json j;
  j["meta"] = {{"arena_diameter_mm", c.meta.arena_diameter_mm},
               {"resolution_px", c.meta.resolution_px},
               {"sample_rate_hz", c.meta.sample_rate_hz}};
  j["kinematics"] = {{"dt", c.kinematics.dt},         {"v_max", c.kinematics.v_max},
                     {"a_lin", c.kinematics.a_lin},   {"omega_max", c.kinematics.omega_max},
                     {"a_ang", c.kinematics.a_ang},   {"damping", c.kinematics.damping}};
  j["vision"] = {{"radius", c.vision.radius},
                 {"n_norm", c.vision.n_norm},
                 {"forward_span", c.vision.forward_span},
                 {"normalize_pose", c.vision.normalize_pose}};
  j["reward"] = {{"reward_mode", std::string(to_string(c.reward.mode))}, {"kappa", c.reward.kappa}};
  j["t_lim_s"] = c.t_lim_s;
  j["d_min"] = c.d_min;
  j["show_target"] = c.show_target;
  j["seed"] = c.seed;
  return j.dump(2);
}

std::shared_ptr<const ColonyRecording> prepare_world(const ColonyRecording& recording,
                                                     const EnvConfig& config) {
  return std::make_shared<const ColonyRecording>(resample(recording, config.kinematics.dt));
}

Environment::Environment(EnvConfig config, std::shared_ptr<const ColonyRecording> world)
    : config_(std::move(config)), world_(std::move(world)) {
  config_.validate();
  if (!world_) throw ContractViolation("Environment: null world");
  const RecordingMeta m = world_->meta();
  if (m.arena_diameter_mm != config_.meta.arena_diameter_mm || m.resolution_px != config_.meta.resolution_px) {
    throw ConfigError("recording arena (" + std::to_string(m.resolution_px) + " px) does not match config meta (" +
                      std::to_string(config_.meta.resolution_px) + " px)");
  }
  if (std::abs(m.sample_rate_hz * config_.kinematics.dt - 1.0) > 1e-9) {
    world_ = std::make_shared<const ColonyRecording>(resample(*world_, config_.kinematics.dt));
  }
  arena_ = ArenaGeometry::from_meta(m);
  horizon_ = config_.horizon();
}

Environment::Environment(EnvConfig config, const ColonyRecording& recording)
    : Environment(config, prepare_world(recording, config)) {}

std::vector<Point> Environment::replayed_positions(double t, int& frozen) const {
  frozen = 0;
  const double eps = 1e-9 * config_.kinematics.dt;
  std::vector<Point> out;
  out.reserve(world_->ants().size());
  for (const auto& [id, series] : world_->ants()) {
    if (!config_.show_target && id == state_.target.ant_id) continue;
    if (t < series.front().t - eps) continue;  // not yet tracked
    if (t > series.back().t + eps) ++frozen;
    const Sample s = interpolate(series, t);
    out.push_back({s.x, s.y});
  }
  return out;
}

std::vector<Point> Environment::visible_ants() const {
  int frozen = 0;
  return replayed_positions(state_.replay_time, frozen);
}

Observation Environment::observe(const std::vector<Point>& ants) const {
  return build_observation(state_.agent, ants, world_->meta(), config_.kinematics, config_.vision);
}

Observation Environment::reset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EpisodeState st;
  st.target = select_target(*world_, config_.t_lim_s, config_.d_min, rng);
  const Series& trail = st.target.trail;
  st.replay_time = st.target.start_time;
  st.agent.x = trail[0].x;
  st.agent.y = trail[0].y;
  const double dx = trail[1].x - trail[0].x;
  const double dy = trail[1].y - trail[0].y;
  st.agent.theta = (dx == 0.0 && dy == 0.0) ? 0.0 : wrap_angle(std::atan2(dy, dx));
  st.agent_trail.push_back({trail[0].x, trail[0].y});
  st.target_trail.push_back({trail[0].x, trail[0].y});
  state_ = std::move(st);
  started_ = true;
  const Series& start = state_.target.trail;

  int frozen = 0;
  const auto ants = replayed_positions(state_.replay_time, frozen);
  last_info_ = {{"area_t", 0.0},
                {"target_x", start[0].x},
                {"target_y", start[0].y},
                {"dist_to_target", 0.0},
                {"frozen_ants", static_cast<double>(frozen)}};
  return observe(ants);
}

StepResult Environment::step(Action action) {
  if (!started_) throw ContractViolation("step called before reset");
  if (truncated()) throw ContractViolation("step called on a truncated episode");
  return advance(apply_action(state_.agent, action, config_.kinematics, arena_));
}

StepResult Environment::teleport_step() {
  if (!started_) throw ContractViolation("step called before reset");
  if (truncated()) throw ContractViolation("step called on a truncated episode");
  const Sample& prev = state_.target.trail[static_cast<std::size_t>(state_.step_index)];
  const Sample& next = state_.target.trail[static_cast<std::size_t>(state_.step_index) + 1];
  AgentState a = state_.agent;
  const double dx = next.x - prev.x;
  const double dy = next.y - prev.y;
  if (dx != 0.0 || dy != 0.0) a.theta = wrap_angle(std::atan2(dy, dx));
  a.x = next.x;
  a.y = next.y;
  a.s = std::min(std::hypot(dx, dy) / config_.kinematics.dt, config_.kinematics.v_max);
  a.theta_dot = 0.0;
  return advance(a);
}

StepResult Environment::advance(const AgentState& next_agent) {
  EpisodeState& st = state_;
  ++st.step_index;
  st.replay_time = st.target.start_time + st.step_index * config_.kinematics.dt;
  st.agent = next_agent;

  const Sample& tgt = st.target.trail[static_cast<std::size_t>(st.step_index)];
  const Point pa_prev = st.agent_trail.back();
  const Point pt_prev = st.target_trail.back();
  const Point pa{st.agent.x, st.agent.y};
  const Point pt{tgt.x, tgt.y};
  st.agent_trail.push_back(pa);
  st.target_trail.push_back(pt);

  StepResult r;
  const double area = trail_area_step(pa_prev, pa, pt_prev, pt);
  r.reward = step_penalty(area, config_.reward);
  st.cumulative_reward += r.reward;

  int frozen = 0;
  const auto ants = replayed_positions(st.replay_time, frozen);
  r.observation = observe(ants);
  r.terminated = false;
  r.truncated = st.step_index >= horizon_;
  r.info = {{"area_t", area},
            {"target_x", pt.x},
            {"target_y", pt.y},
            {"dist_to_target", std::hypot(pa.x - pt.x, pa.y - pt.y)},
            {"frozen_ants", static_cast<double>(frozen)}};
  last_info_ = r.info;
  return r;
}

double run_episode(Environment& env, std::uint64_t seed, const PolicyFn& policy) {
  Observation o = env.reset(seed);
  while (!env.truncated()) o = env.step(policy(o)).observation;
  return env.state().cumulative_reward;
}

namespace {

SyntheticParams synthetic_from_json(const json& j, std::uint64_t& seed) {
  if (!j.is_object()) throw ConfigError("\"synthetic\" must be an object");
  SyntheticParams p;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n_ants") {
        p.n_ants = v.get<int>();
      } else if (key == "duration_s") {
        p.duration_s = v.get<double>();
      } else if (key == "sample_rate_hz") {
        p.sample_rate_hz = v.get<double>();
      } else if (key == "noise_px") {
        p.noise_px = v.get<double>();
      } else if (key == "cluster_pull") {
        p.cluster_pull = v.get<double>();
      } else if (key == "arena_diameter_mm") {
        p.arena_diameter_mm = v.get<double>();
      } else if (key == "resolution_px") {
        p.resolution_px = v.get<int>();
      } else if (key == "seed") {
        seed = v.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown config key 'synthetic." + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace

std::unique_ptr<Environment> environment_from_json(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  if (root.contains("data") == root.contains("synthetic")) {
    throw ConfigError("config needs exactly one of \"data\" or \"synthetic\"");
  }

  std::optional<ColonyRecording> recording;
  if (root.contains("data")) {
    if (!root["data"].is_string()) throw ConfigError("\"data\" must be a path string");
    recording.emplace(load_recording(root["data"].get<std::string>()));
    root.erase("data");
  } else {
    std::uint64_t seed = 0;
    const SyntheticParams params = synthetic_from_json(root["synthetic"], seed);
    std::mt19937_64 rng(seed);
    recording.emplace(gen_synthetic(params, rng));
    root.erase("synthetic");
  }
  const EnvConfig config = parse_env_config(root.dump(), recording->meta());
  return std::make_unique<Environment>(config, *recording);
}

}  // namespace antdyn
