#include "doctest.h"

#include <random>

#include "apf/motion.hpp"

using namespace apf;

namespace {

bool in_closed_cone(Point apex, Point center, double r, Point p) {
  return hull_distance(p, {apex, center, r}) <= kTol;
}

}  // namespace

TEST_CASE("error magnitudes") {
  MovementModel m{0.25, 0.5};
  CHECK(mu(m, 1) == doctest::Approx(0.25));
  CHECK(error_d(m, 1) == doctest::Approx(0.25));
  CHECK(error_a(m, 1) == doctest::Approx(std::asin(0.25)));
  CHECK(mu(m, 4) == doctest::Approx(0.5));
  CHECK(error_a(m, 4) == doctest::Approx(kPi / 6));
  CHECK(error_a(m, 100) == doctest::Approx(kPi / 6));
  CHECK_THROWS_AS(mu(m, 0), Error);
}

TEST_CASE("reachable set") {
  Disk z = reachable_set({0.5, 0.5}, {0, 0}, {1, 0});
  CHECK(near(z.center, {1, 0}));
  CHECK(z.radius == doctest::Approx(0.5));
  z = reachable_set({0.1, 0.5}, {0, 0}, {2, 0});
  CHECK(z.radius == doctest::Approx(0.4));
  CHECK_THROWS_AS(reachable_set({0.1, 0.5}, {1, 1}, {1, 1}), Error);
}

TEST_CASE("samplers stay inside the reachable set") {
  MovementModel m{0.3, 0.3};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  Point x{0, 0}, y{3, 1};
  CHECK(sample_error(m, {}, x, y, rng) == y);
  Point g{10, 10};
  Point z = sample_error(m, {ErrorKind::kAdversarial, AdversaryMode::kAwayFromGoal}, x, y, rng, g);
  double r = reachable_set(m, x, y).radius;
  Point want = y + unit(y - g) * ((1 - kPullIn) * r);
  CHECK(near(z, want, 1e-12));
  for (int i = 0; i < 100000; ++i) {
    Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (dist(a, b) < 1e-3) continue;
    ErrorPolicy p{i % 3 == 0 ? ErrorKind::kUniform : ErrorKind::kAdversarial,
                  i % 2 ? AdversaryMode::kAwayFromGoal : AdversaryMode::kTowardNearest};
    Point s = sample_error(m, p, a, b, rng, Point{u(rng), u(rng)}, Point{u(rng), u(rng)});
    REQUIRE(dist(s, b) < reachable_set(m, a, b).radius);
  }
}

TEST_CASE("safe step") {
  MovementModel m{0.5, 0.5};
  StepPlan p = safe_step(m, {0, 0}, {10, 0}, 1);
  CHECK_FALSE(p.done);
  CHECK(near(p.intended, {0.2, 0}, 1e-12));
  p = safe_step(m, {0, 0}, {1.5, 0}, 1);
  CHECK(p.done);
  CHECK(p.intended == Point{1.5, 0});
  CHECK_THROWS_AS(safe_step(m, {0, 0}, {1, 0}, 1), Error);
}

TEST_CASE("iterated safe steps stay in the cone and make growing progress") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    MovementModel m{0.05 + 0.9 * u(rng), 0.05 + 0.45 * u(rng)};
    Point x0{10 * u(rng), 10 * u(rng)}, y{10 * u(rng), 10 * u(rng)};
    double l = dist(x0, y) * (0.02 + 0.9 * u(rng));
    if (l < 1e-3) continue;
    Point x = x0;
    double prev_bound = 0;
    int steps = 0;
    while (dist(x, y) >= l) {
      StepPlan p = safe_step(m, x, y, l);
      // Adversary pushes sideways toward the cone wall.
      Point side = perp(unit(p.intended - x));
      Point z = p.intended + side * ((1 - kPullIn) * p.reach.radius);
      REQUIRE(in_closed_cone(x0, y, l, z));
      REQUIRE(dist(z, y) < dist(x, y));
      if (!p.done) {
        // With mu below 1/2 the tight worst-case reduction grows step by step.
        double s = dist(x, p.intended);
        double bound = s - p.reach.radius;
        CHECK(bound >= prev_bound - 1e-12);
        prev_bound = bound;
      }
      x = z;
      REQUIRE(++steps < 1000);
    }
  }
}

TEST_CASE("plan_move without obstacles reduces to safe_step") {
  MovementModel m{0.3, 0.3};
  MoveRequest req;
  req.from = {0, 0};
  req.target.inside({{10, 0}, 2});
  req.hint = {10, 0};
  StepPlan p = plan_move(m, req);
  StepPlan q = safe_step(m, {0, 0}, {10, 0}, 1);
  CHECK(near(p.intended, q.intended, 1e-9));
}

TEST_CASE("plan_move shrinks around a point obstacle") {
  MovementModel m{0.3, 0.3};
  MoveRequest req;
  req.from = {0, 0};
  req.target.inside({{10, 0}, 2});
  req.hint = {10, 0};
  req.obstacles = {{{5, 0.05}, 0}};
  StepPlan p = plan_move(m, req);
  CHECK(p.goal_radius < 1);
  CHECK(cone_obstacle_clearance(req.obstacles, req.from, {p.goal, p.goal_radius}) > 0);
  CHECK(dist(p.reach.center, {5, 0.05}) > p.reach.radius);
}

TEST_CASE("plan_move detours around an obstacle on the segment") {
  MovementModel m{0.3, 0.3};
  MoveRequest req;
  req.from = {0, 0};
  req.target.inside({{10, 0}, 2});
  req.hint = {10, 0};
  req.obstacles = {{{5, 0}, 0.5}};
  std::mt19937_64 rng(3);
  Point x = req.from;
  int steps = 0;
  while (!req.target.contains(x)) {
    req.from = x;
    StepPlan p = plan_move(m, req);
    Point z = sample_error(m, {ErrorKind::kAdversarial, AdversaryMode::kTowardNearest}, x, p.intended, rng,
                           p.goal, Point{5, 0});
    CHECK(segment_distance({5, 0}, x, z) > 0.5);
    x = z;
    REQUIRE(++steps < 500);
  }
}

TEST_CASE("plan_move is blocked when an obstacle covers the goal") {
  MovementModel m{0.3, 0.3};
  MoveRequest req;
  req.from = {0, 0};
  req.target.inside({{10, 0}, 1});
  req.hint = {10, 0};
  req.obstacles = {{{10, 0}, 3}};
  CHECK_THROWS_AS(plan_move(m, req), Error);
}
