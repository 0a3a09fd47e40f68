#include "antdyn/reward.hpp"

#include <cmath>
#include <string>

#include "antdyn/errors.hpp"

namespace antdyn {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double triangle_area(Point a, Point b, Point c) { return 0.5 * std::abs(cross(a, b, c)); }

// Interior crossing of segments ab and cd (touching end points do not count).
bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(a, b, c);
  const double d2 = cross(a, b, d);
  const double d3 = cross(c, d, a);
  const double d4 = cross(c, d, b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

Point intersection(Point a, Point b, Point c, Point d) {
  const double rx = b.x - a.x, ry = b.y - a.y;
  const double sx = d.x - c.x, sy = d.y - c.y;
  const double t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / (rx * sy - ry * sx);
  return {a.x + t * rx, a.y + t * ry};
}

}  // namespace

std::string_view to_string(RewardMode m) { return m == RewardMode::Monotone ? "monotone" : "literal"; }

RewardMode reward_mode_from_string(std::string_view s) {
  if (s == "monotone") return RewardMode::Monotone;
  if (s == "literal") return RewardMode::Literal;
  throw ConfigError("reward_mode must be \"monotone\" or \"literal\", got \"" + std::string(s) + "\"");
}

void RewardConfig::validate() const {
  if (!(std::isfinite(kappa) && kappa > 0.0)) throw ConfigError("reward.kappa must be positive");
}

double trail_area_step(Point pa_prev, Point pa_cur, Point pt_prev, Point pt_cur) {
  // Work relative to the first vertex to keep the cross products small.
  const Point o = pa_prev;
  const Point v0{0.0, 0.0};
  const Point v1{pa_cur.x - o.x, pa_cur.y - o.y};
  const Point v2{pt_cur.x - o.x, pt_cur.y - o.y};
  const Point v3{pt_prev.x - o.x, pt_prev.y - o.y};

  if (segments_cross(v0, v1, v2, v3)) {
    const Point x = intersection(v0, v1, v2, v3);
    return triangle_area(x, v1, v2) + triangle_area(x, v3, v0);
  }
  if (segments_cross(v1, v2, v3, v0)) {
    const Point x = intersection(v1, v2, v3, v0);
    return triangle_area(v0, v1, x) + triangle_area(x, v2, v3);
  }
  const double twice = (v0.x * v1.y - v1.x * v0.y) + (v1.x * v2.y - v2.x * v1.y) +
                       (v2.x * v3.y - v3.x * v2.y) + (v3.x * v0.y - v0.x * v3.y);
  return 0.5 * std::abs(twice);
}

double step_penalty(double area, const RewardConfig& config) {
  if (!(area >= 0.0) || !std::isfinite(area)) {
    throw ContractViolation("step_penalty: area must be finite and non-negative");
  }
  const double u = config.kappa * area;
  const double squash = u / std::hypot(1.0, u);
  return config.mode == RewardMode::Monotone ? -squash : -(1.0 - squash);
}

double episode_reward(std::span<const Point> agent_trail, std::span<const Point> target_trail,
                      const RewardConfig& config) {
  if (agent_trail.size() != target_trail.size()) {
    throw ContractViolation("episode_reward: trail lengths differ (" + std::to_string(agent_trail.size()) +
                            " vs " + std::to_string(target_trail.size()) + ")");
  }
  if (agent_trail.empty()) throw ContractViolation("episode_reward: empty trails");
  double total = 0.0;
  for (std::size_t t = 1; t < agent_trail.size(); ++t) {
    total += step_penalty(
        trail_area_step(agent_trail[t - 1], agent_trail[t], target_trail[t - 1], target_trail[t]), config);
  }
  return total;
}

}  // namespace antdyn
