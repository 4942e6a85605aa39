#include "doctest.h"

#include <random>

#include "apf/geometry.hpp"
#include "apf/verify.hpp"

using namespace apf;

namespace {

const Pattern kPattern{{{0, 0}, {4, 0}, {1.5, 2.8}, {2, 1}, {0.7, 0.4}}, 0.05};

std::vector<Point> copy_of(const Pattern& p, double angle, double scale, Point shift, bool mirror) {
  std::vector<Point> out;
  for (Point f : p.points) {
    if (mirror) f.y = -f.y;
    out.push_back(shift + rotate(f, angle) * scale);
  }
  // Shuffle robot identities so the matching is not the identity.
  std::rotate(out.begin(), out.begin() + 2, out.end());
  return out;
}

}  // namespace

TEST_CASE("exact copies are epsilon-close") {
  for (bool mirror : {false, true}) {
    auto robots = copy_of(kPattern, 1.1, 0.6, {-2, 5}, mirror);
    auto w = epsilon_close(robots, kPattern);
    REQUIRE(w);
    for (std::size_t m = 0; m < kPattern.size(); ++m) CHECK(dist(w->points[m], robots[w->robot[m]]) < 1e-9);
  }
}

TEST_CASE("perturbed copies are found and far ones rejected") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  auto base = copy_of(kPattern, 0.4, 2.0, {1, 1}, false);
  double d = 2 * mec(base).radius;
  for (int trial = 0; trial < 20; ++trial) {
    auto robots = base;
    for (auto& r : robots) r = r + rotate({0.4 * kPattern.epsilon * d, 0}, u(rng));
    auto w = epsilon_close(robots, kPattern);
    REQUIRE(w);
    for (std::size_t m = 0; m < kPattern.size(); ++m)
      CHECK(dist(w->points[m], robots[w->robot[m]]) <= kPattern.epsilon * w->diameter + kTol);
  }
  auto far = base;
  far[3] = far[3] + Point{3 * kPattern.epsilon * d, 0};
  CHECK_FALSE(epsilon_close(far, kPattern));
  CHECK_THROWS_AS(epsilon_close(std::vector<Point>{{0, 0}}, kPattern), Error);
}

TEST_CASE("brute symmetry") {
  std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto s = brute_symmetry(sq);
  CHECK(s.rotations.size() == 4);
  CHECK(s.axes.size() == 4);
  std::vector<Point> scalene{{0, 0}, {4, 0}, {1, 2}};
  s = brute_symmetry(scalene);
  CHECK(s.rotations.size() == 1);
  CHECK(s.axes.empty());
  std::vector<Point> e5{{0, -2}, {0, 2}, {1, 0.5}, {-1, 0.5}};
  s = brute_symmetry(e5);
  REQUIRE(s.axes.size() == 1);
  CHECK(std::abs(s.axes[0].x) < 1e-12);
}

TEST_CASE("mec_brute") {
  std::vector<Point> acute{{0, 0}, {4, 0}, {2, 3}};
  Circle c = mec_brute(acute);
  CHECK(c.center.y == doctest::Approx(5.0 / 6));
  CHECK(c.radius == doctest::Approx(13.0 / 6));
  std::vector<Point> right{{0, 0}, {2, 0}, {1, 1}};
  CHECK(near(mec_brute(right).center, {1, 0}));
  std::vector<Point> two{{0, 0}, {2, 0}};
  CHECK(mec_brute(two).radius == doctest::Approx(1));
}
