#pragma once

// Inaccurate movement: the reachable disk of an attempted move, error
// samplers, and the cone-confined step planner.

#include <optional>
#include <random>
#include <vector>

#include "apf/geometry.hpp"

namespace apf {

struct MovementModel {
  double lambda = 0.3;
  double delta = 0.3;
};

void validate(const MovementModel& model);

double mu(const MovementModel& model, double d);
double error_d(const MovementModel& model, double d);
double error_a(const MovementModel& model, double d);
// Open disk of outcomes when a robot at x attempts to reach y.
Disk reachable_set(const MovementModel& model, Point x, Point y);

enum class ErrorKind { kNone, kUniform, kAdversarial };
enum class AdversaryMode { kAwayFromGoal, kTowardNearest };

struct ErrorPolicy {
  ErrorKind kind = ErrorKind::kNone;
  AdversaryMode mode = AdversaryMode::kAwayFromGoal;
};

inline constexpr double kPullIn = 1e-6;

// Where the robot actually lands. `goal` feeds the away-from-goal adversary,
// `nearest` the toward-nearest adversary (the closest other robot).
Point sample_error(const MovementModel& model, const ErrorPolicy& policy, Point x, Point y,
                   std::mt19937_64& rng, std::optional<Point> goal = std::nullopt,
                   std::optional<Point> nearest = std::nullopt);

struct StepPlan {
  Point intended;
  Disk reach;        // Z(x, intended)
  bool done = false; // the attempt lands in the final disk
  Point goal;        // center of the disk the robot is heading to
  double goal_radius = 0.0;
};

StepPlan safe_step(const MovementModel& model, Point x, Point y, double l);

struct MoveRequest {
  Point from;
  Region target;
  Region corridor;  // the whole trajectory stays inside; empty means the plane
  Point hint;
  Frame frame;
  std::vector<Obstacle> obstacles;
  int orientation = 1;  // preferred turning sense for detours
};

StepPlan plan_move(const MovementModel& model, const MoveRequest& request);

}  // namespace apf
