#include "apf/motion.hpp"

#include <cmath>
#include <limits>

namespace apf {

void validate(const MovementModel& model) {
  if (!(model.lambda > 0.0 && model.lambda < 1.0))
    throw Error(ErrorCode::kInvalidInput, "lambda must lie in (0,1)");
  if (!(model.delta > 0.0 && model.delta < 1.0))
    throw Error(ErrorCode::kInvalidInput, "delta must lie in (0,1)");
}

double mu(const MovementModel& model, double d) {
  if (!(d > 0.0)) throw Error(ErrorCode::kInvalidInput, "distance must be positive");
  return std::min(model.delta, model.lambda * d);
}

double error_d(const MovementModel& model, double d) { return mu(model, d) * d; }

double error_a(const MovementModel& model, double d) { return std::asin(mu(model, d)); }

Disk reachable_set(const MovementModel& model, Point x, Point y) {
  double d = dist(x, y);
  if (d <= 0.0) throw Error(ErrorCode::kInvalidInput, "move target equals start");
  return {y, error_d(model, d)};
}

Point sample_error(const MovementModel& model, const ErrorPolicy& policy, Point x, Point y,
                   std::mt19937_64& rng, std::optional<Point> goal, std::optional<Point> nearest) {
  if (policy.kind == ErrorKind::kNone) return y;
  double r = (1.0 - kPullIn) * reachable_set(model, x, y).radius;
  if (policy.kind == ErrorKind::kUniform) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double rho = r * std::sqrt(u(rng));
    double phi = 2.0 * kPi * u(rng);
    return y + Point{std::cos(phi), std::sin(phi)} * rho;
  }
  Point dir;
  if (policy.mode == AdversaryMode::kAwayFromGoal) {
    Point g = goal.value_or(y);
    dir = dist(y, g) > kTol ? unit(y - g) : unit(x - y);
  } else if (nearest && dist(*nearest, y) > kTol) {
    dir = unit(*nearest - y);
  } else {
    dir = perp(unit(y - x));
  }
  return y + dir * r;
}

StepPlan safe_step(const MovementModel& model, Point x, Point y, double l) {
  double d = dist(x, y);
  if (d <= l) throw Error(ErrorCode::kNoStepNeeded, "already inside the goal disk");
  if (!(l > 0.0)) throw Error(ErrorCode::kInvalidInput, "goal radius must be positive");
  StepPlan plan;
  plan.goal = y;
  plan.goal_radius = l;
  double ratio = l / d;
  if (ratio >= mu(model, d)) {
    plan.intended = y;
    plan.done = true;
  } else {
    // mu is linear below delta/lambda, so the step length inverts directly.
    plan.intended = x + unit(y - x) * (ratio / model.lambda);
  }
  plan.reach = reachable_set(model, x, plan.intended);
  return plan;
}

namespace {

constexpr int kShrinkSteps = 96;

double obstacle_segment_clearance(std::span<const Obstacle> obstacles, Point p, Point q) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) c = std::min(c, segment_distance(o.center, p, q) - o.radius);
  return c;
}

bool cone_clear(const MoveRequest& req, Point apex, const Disk& disk) {
  return cone_clearance(req.corridor, apex, disk) > kTol &&
         cone_obstacle_clearance(req.obstacles, apex, disk) > kTol;
}

}  // namespace

StepPlan plan_move(const MovementModel& model, const MoveRequest& req) {
  if (req.target.contains(req.from)) throw Error(ErrorCode::kNoStepNeeded, "already inside the target");

  Region goal_region = req.target;
  goal_region.append(req.corridor);
  // Other robots steer the goal point away from themselves.
  Disk goal;
  try {
    goal = inscribed_disk(goal_region, req.hint, req.frame, req.obstacles);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyRegion) throw;
    throw Error(ErrorCode::kBlocked, "obstacles cover the goal region");
  }
  for (const auto& o : req.obstacles)
    if (dist(goal.center, o.center) <= o.radius + kTol)
      throw Error(ErrorCode::kBlocked, "an obstacle covers the goal point");

  // Direct approach: the widest goal disk whose cone stays clear.
  double d = dist(req.from, goal.center);
  double l = std::min(goal.radius, d * (1.0 - 1e-12));
  if (!cone_clear(req, req.from, {goal.center, l})) {
    double lo = 0.0, hi = l;
    for (int i = 0; i < kShrinkSteps; ++i) {
      double mid = 0.5 * (lo + hi);
      (cone_clear(req, req.from, {goal.center, mid}) ? lo : hi) = mid;
    }
    l = lo;
  }
  if (l > kTol) return safe_step(model, req.from, goal.center, l);

  // Detour through a waypoint off the blocked line, preferring the shortest
  // two-leg route and the requested turning sense on ties.
  Point u = unit(goal.center - req.from);
  double sense = req.orientation >= 0 ? 1.0 : -1.0;
  const double fractions[] = {0.125, 0.25, 0.5, 0.75, 1.0};
  const double shrink[] = {0.125, 1.0 / 32.0, 1.0 / 128.0};
  bool found = false;
  double best_score = std::numeric_limits<double>::infinity();
  Point best_w;
  double best_l = 0.0;
  for (int k = 1; k <= 18; ++k) {
    for (double sign : {sense, -sense}) {
      Point dir = rotate(u, sign * k * kPi / 36.0);
      for (double f : fractions) {
        Point w = req.from + dir * (f * d);
        double score = dist(req.from, w) + dist(w, goal.center);
        if (score >= best_score) continue;
        double leg = std::min(segment_clearance(req.corridor, w, goal.center),
                              obstacle_segment_clearance(req.obstacles, w, goal.center));
        for (double s : shrink) {
          double lw = s * f * d;
          if (leg <= lw + kTol) continue;
          if (!cone_clear(req, req.from, {w, lw})) continue;
          found = true;
          best_score = score;
          best_w = w;
          best_l = lw;
          break;
        }
      }
    }
  }
  if (!found) {
    // Local escape: the widest corridor point in a shrinking half-disk
    // facing the goal, e.g. to work out of a cusp one short step at a time.
    Line facing{req.from, req.from + perp(u)};
    if (facing.signed_distance(goal.center) < 0.0) facing = Line{facing.b, facing.a};
    for (double rho = d / 2.0; rho > d * 1e-7 && !found; rho *= 0.5) {
      Region local = req.corridor;
      local.inside({req.from, rho}).left_of(facing);
      Disk w;
      try {
        w = inscribed_disk(local, req.from + u * (rho / 2.0), req.frame, req.obstacles);
      } catch (const Error&) {
        continue;
      }
      for (double s : {1.0, 0.25, 1.0 / 16.0}) {
        double lw = s * w.radius;
        if (lw <= kTol || !cone_clear(req, req.from, {w.center, lw})) continue;
        found = true;
        best_w = w.center;
        best_l = lw;
        break;
      }
    }
  }
  if (!found) throw Error(ErrorCode::kBlocked, "no clear route toward the target");
  StepPlan plan = safe_step(model, req.from, best_w, best_l);
  plan.done = false;
  plan.goal = goal.center;
  plan.goal_radius = goal.radius;
  return plan;
}

}  // namespace apf
