#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <string_view>

#include "antdyn/arena.hpp"
#include "antdyn/recording.hpp"

namespace antdyn {

/// Vision sectors in observation order: five forward sectors from left to
/// right, then right-rear, back, left-rear.
enum class Segment : std::uint8_t { Fl1 = 0, Fl2, Fc, Fr2, Fr1, R, B, L };

inline constexpr std::size_t kSegmentCount = 8;
std::string_view to_string(Segment s);

struct VisionConfig {
  double radius = 100.0;                       // px
  double n_norm = 5.0;                         // count at which a channel saturates
  double forward_span = std::numbers::pi;      // total angle covered by the five forward sectors
  bool normalize_pose = true;                  // false: x, y, s, theta, theta_dot are emitted raw

  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Sector containing a bearing measured counter-clockwise from the heading.
/// Forward sectors are span/5 wide, rear sectors (2*pi - span)/3. Lower
/// bounds are inclusive; the back sector owns +pi.
Segment segment_index(double relative_bearing, double forward_span = std::numbers::pi);

using SegmentCounts = std::array<int, kSegmentCount>;
using SegmentChannels = std::array<double, kSegmentCount>;

/// Raw per-sector counts of ants within the vision radius (inclusive). An ant
/// sitting exactly on the agent counts toward the forward-centre sector.
SegmentCounts count_segments(const AgentState& agent, std::span<const Point> others,
                             const VisionConfig& vision);

/// Saturating channels min(count / n_norm, 1).
SegmentChannels sense_segments(const AgentState& agent, std::span<const Point> others,
                               const VisionConfig& vision);

inline constexpr std::size_t kObservationSize = 13;
using Observation = std::array<double, kObservationSize>;

/// Index of each entry in an Observation.
namespace obs {
inline constexpr std::size_t kX = 0;
inline constexpr std::size_t kY = 1;
inline constexpr std::size_t kSpeed = 2;
inline constexpr std::size_t kTheta = 3;
inline constexpr std::size_t kThetaDot = 4;
inline constexpr std::size_t kVisionBegin = 5;
}  // namespace obs

std::string_view observation_name(std::size_t index);

/// [x, y, s, theta, theta_dot, V_fl1, V_fl2, V_fc, V_fr2, V_fr1, V_r, V_b, V_l].
/// Pose entries are divided by resolution_px, resolution_px, v_max, pi and
/// omega_max unless vision.normalize_pose is false.
Observation build_observation(const AgentState& agent, std::span<const Point> others,
                              const RecordingMeta& meta, const KinematicParams& kinematics,
                              const VisionConfig& vision);

}  // namespace antdyn
