#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "antdyn/sensing.hpp"

namespace antdyn {

/// MONOTONE: r = -u / sqrt(1 + u^2), zero at perfect alignment.
/// LITERAL:  r = -(1 - u / sqrt(1 + u^2)), the printed closed form, which is
///           -1 at perfect alignment and rises toward 0 with deviation.
/// In both, u = kappa * area.
enum class RewardMode { Monotone, Literal };

std::string_view to_string(RewardMode m);
RewardMode reward_mode_from_string(std::string_view s);  // "monotone" | "literal"

struct RewardConfig {
  RewardMode mode = RewardMode::Monotone;
  double kappa = 0.01;  // 1/px^2

  void validate() const;
};

/// Area between the two trails over one step: the quadrilateral
/// pa_prev -> pa_cur -> pt_cur -> pt_prev. Simple quadrilaterals (convex or
/// not) give their enclosed area; crossed ones give the sum of both lobes.
/// Never negative and never cancels.
double trail_area_step(Point pa_prev, Point pa_cur, Point pt_prev, Point pt_cur);

/// Per-step reward in [-1, 0]. Throws ContractViolation for a negative or
/// non-finite area.
double step_penalty(double area, const RewardConfig& config);

/// Sum of step_penalty over steps 1..T of two trails of T+1 points each.
/// Throws ContractViolation when the lengths differ or are zero.
double episode_reward(std::span<const Point> agent_trail, std::span<const Point> target_trail,
                      const RewardConfig& config);

}  // namespace antdyn
