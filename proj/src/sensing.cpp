#include "antdyn/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "antdyn/errors.hpp"

namespace antdyn {

std::string_view to_string(Segment s) {
  constexpr std::array<std::string_view, kSegmentCount> names = {"fl1", "fl2", "fc", "fr2",
                                                                 "fr1", "r",   "b",  "l"};
  return names[static_cast<std::size_t>(s)];
}

void VisionConfig::validate() const {
  if (!(std::isfinite(radius) && radius > 0.0)) throw ConfigError("vision.radius must be positive");
  if (!(std::isfinite(n_norm) && n_norm >= 1.0)) throw ConfigError("vision.n_norm must be >= 1");
  if (!(forward_span > 0.0 && forward_span < 2.0 * std::numbers::pi)) {
    throw ConfigError("vision.forward_span must be in (0, 2*pi)");
  }
}

Segment segment_index(double relative_bearing, double forward_span) {
  const double phi = wrap_angle(relative_bearing);
  const double half = forward_span / 2.0;
  const double fwd = forward_span / 5.0;
  const double rear = (2.0 * std::numbers::pi - forward_span) / 3.0;

  if (phi >= -half && phi < half) {
    // Sectors run right to left: fr1, fr2, fc, fl2, fl1.
    constexpr std::array<Segment, 5> order = {Segment::Fr1, Segment::Fr2, Segment::Fc, Segment::Fl2,
                                              Segment::Fl1};
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (phi < -half + static_cast<double>(k) * fwd) return order[k - 1];
    }
    return order.back();
  }
  if (phi >= half && phi < half + rear) return Segment::L;
  if (phi >= -half - rear && phi < -half) return Segment::R;
  return Segment::B;
}

SegmentCounts count_segments(const AgentState& agent, std::span<const Point> others,
                             const VisionConfig& vision) {
  SegmentCounts counts{};
  const double r2 = vision.radius * vision.radius;
  for (const Point& p : others) {
    const double dx = p.x - agent.x;
    const double dy = p.y - agent.y;
    if (dx * dx + dy * dy > r2) continue;
    const Segment seg = (dx == 0.0 && dy == 0.0)
                            ? Segment::Fc
                            : segment_index(std::atan2(dy, dx) - agent.theta, vision.forward_span);
    ++counts[static_cast<std::size_t>(seg)];
  }
  return counts;
}

SegmentChannels sense_segments(const AgentState& agent, std::span<const Point> others,
                               const VisionConfig& vision) {
  const SegmentCounts counts = count_segments(agent, others, vision);
  SegmentChannels out{};
  for (std::size_t i = 0; i < kSegmentCount; ++i) {
    out[i] = std::min(static_cast<double>(counts[i]) / vision.n_norm, 1.0);
  }
  return out;
}

std::string_view observation_name(std::size_t index) {
  constexpr std::array<std::string_view, kObservationSize> names = {
      "x", "y", "s", "theta", "theta_dot", "V_fl1", "V_fl2", "V_fc", "V_fr2", "V_fr1", "V_r", "V_b", "V_l"};
  return index < names.size() ? names[index] : std::string_view{};
}

Observation build_observation(const AgentState& agent, std::span<const Point> others,
                              const RecordingMeta& meta, const KinematicParams& kinematics,
                              const VisionConfig& vision) {
  Observation o{};
  if (vision.normalize_pose) {
    const double res = meta.resolution_px;
    o[obs::kX] = agent.x / res;
    o[obs::kY] = agent.y / res;
    o[obs::kSpeed] = agent.s / kinematics.v_max;
    o[obs::kTheta] = agent.theta / std::numbers::pi;
    o[obs::kThetaDot] = agent.theta_dot / kinematics.omega_max;
  } else {
    o[obs::kX] = agent.x;
    o[obs::kY] = agent.y;
    o[obs::kSpeed] = agent.s;
    o[obs::kTheta] = agent.theta;
    o[obs::kThetaDot] = agent.theta_dot;
  }
  const SegmentChannels v = sense_segments(agent, others, vision);
  std::copy(v.begin(), v.end(), o.begin() + obs::kVisionBegin);
  return o;
}

}  // namespace antdyn
