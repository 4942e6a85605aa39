#include "doctest.h"

#include <random>

#include "apf/analysis.hpp"
#include "apf/verify.hpp"

using namespace apf;

namespace {

std::vector<Point> regular(int k, double r, Point c = {}, double phase = 0.3) {
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) pts.push_back(c + rotate({r, 0}, phase + 2 * kPi * i / k));
  return pts;
}

const std::vector<Point> kScalene{{0, 0}, {4, 0}, {1, 2}};
const std::vector<Point> kE5{{0, -2}, {0, 2}, {1, 0.5}, {-1, 0.5}};
const std::vector<Point> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_CASE("views") {
  std::vector<Point> pair{{-1, 0}, {1, 0}};
  auto v = views(pair);
  CHECK(v[0].min() == v[1].min());

  v = views(kScalene);
  CHECK(v[0].min() != v[1].min());
  CHECK(v[1].min() != v[2].min());
  CHECK(v[0].min() != v[2].min());

  std::vector<Point> centered{{0, 0}, {1, 0}, {-1, 0}};
  v = views(centered);
  REQUIRE(v[0].cw.size() == 4);
  for (const auto& e : v[0].cw) CHECK(e == ViewElement{});
}

TEST_CASE("symmetry classification") {
  CHECK(symmetry_type(regular(3, 1)) == SymmetryType::kBoth);
  std::vector<Point> iso{{0, 0}, {4, 0}, {2, 3}};
  CHECK(symmetry_type(iso) == SymmetryType::kReflection);
  CHECK(symmetry_type(kScalene) == SymmetryType::kAsymmetric);
}

TEST_CASE("unbreakable symmetry") {
  CHECK(has_unbreakable_symmetry(kSquare));
  CHECK_FALSE(has_unbreakable_symmetry(kE5));
  CHECK_FALSE(has_unbreakable_symmetry(kScalene));
  // Mirror pair with nothing on the axis.
  std::vector<Point> mirrored{{-1, 0}, {1, 0}, {-2, 1}, {2, 1}};
  CHECK(has_unbreakable_symmetry(mirrored));
  // Rotation with a robot at the center is breakable.
  auto tri = regular(3, 1);
  tri.push_back({0, 0});
  CHECK_FALSE(has_unbreakable_symmetry(tri));
}

TEST_CASE("symmetry safety") {
  std::vector<Point> a{{0, 0}, {4, 0}, {1, 1}};
  CHECK(is_symmetry_safe(a));
  std::vector<Point> iso{{0, 0}, {4, 0}, {2, 3}};
  CHECK_FALSE(is_symmetry_safe(iso));
  CHECK_FALSE(is_symmetry_safe(kE5));
  // Branch 1: a non-critical boundary robot plus unique inner robots.
  std::vector<Point> b1{{2, 0}, {-2, 0}, {0, 2}, {0.3, 0.1}, {-0.5, 0.6}};
  CHECK(is_symmetry_safe(b1));
  CHECK(symmetry_type(b1) == SymmetryType::kAsymmetric);
}

TEST_CASE("minimum view robot") {
  std::vector<std::size_t> one{2};
  CHECK(min_view_robot(kScalene, one) == 2);
  std::vector<std::size_t> all{0, 1, 2};
  auto w = min_view_robot(kScalene, all);
  auto v = views(kScalene);
  for (std::size_t i : all) CHECK(!(v[i].min() < v[w].min()));
  std::vector<std::size_t> mirrored{2, 3};
  CHECK_THROWS_AS(min_view_robot(kE5, mirrored), Error);
}

TEST_CASE("bounding structure") {
  Pattern sq{kSquare, 0.05};
  CHECK(bounding_structure(sq).indices == std::vector<std::size_t>{1, 3});

  Pattern two{{{0, 0}, {3, 0}}, 0.05};
  CHECK(bounding_structure(two).indices == std::vector<std::size_t>{0, 1});

  Pattern tri{{{0.5, 0.5}, {0, 0}, {4, 0}, {1.8, 3}, {2, 1}}, 0.05};
  CHECK(bounding_structure(tri).indices == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("bounding structure is minimal with the same circle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Pattern p;
    p.epsilon = 0.01;
    int k = 3 + trial % 6;
    for (int i = 0; i < k; ++i) {
      double a = 2 * kPi * u(rng);
      p.points.push_back(rotate({2, 0}, a));
    }
    p.points.push_back({0.1, 0.2});
    auto bs = bounding_structure(p);
    REQUIRE((bs.indices.size() == 2 || bs.indices.size() == 3));
    std::vector<Point> sub;
    for (auto i : bs.indices) sub.push_back(p.points[i]);
    CHECK(same_circle(mec(sub), mec(p.points), 1e-7));
    for (std::size_t drop = 0; drop < sub.size(); ++drop) {
      std::vector<Point> smaller;
      for (std::size_t k2 = 0; k2 < sub.size(); ++k2)
        if (k2 != drop) smaller.push_back(sub[k2]);
      CHECK_FALSE(same_circle(mec(smaller), mec(p.points), 1e-7));
    }
  }
}

TEST_CASE("predicates and phases") {
  Pattern sq{kSquare, 0.05};
  std::vector<Point> a{{0, 0}, {4, 0}, {1, 1}};
  auto p = predicates(a, sq);
  CHECK(p.b);
  CHECK(phase_of(p) == Phase::kPhase3);

  std::vector<Point> iso{{0, 0}, {4, 0}, {2, 3}};
  Pattern tri{{{0, 0}, {4, 0}, {1.5, 2.8}}, 0.05};
  p = predicates(iso, tri);
  CHECK_FALSE(p.a);
  CHECK(phase_of(p) == Phase::kPhase1);

  p = predicates(kSquare, sq);
  CHECK(p.u);
  CHECK(phase_of(p) == Phase::kRejected);
}

TEST_CASE("triangle embedding forms the bounding structure") {
  Pattern tri{{{0, 0}, {4, 0}, {1.5, 2.8}, {2, 1}}, 0.05};
  // Robots forming a rotated, scaled copy of the pattern.
  std::vector<Point> robots;
  for (Point f : tri.points) robots.push_back(Point{3, -1} + rotate(f, 0.7) * 1.3);
  auto p = predicates(robots, tri);
  CHECK(p.s);
  CHECK(p.b);
  // Mirrored copy works too.
  std::vector<Point> mirrored;
  for (Point r : robots) mirrored.push_back({-r.x, r.y});
  CHECK(predicates(mirrored, tri).b);
  // Moving the third vertex far from its target breaks it.
  robots[2] = robots[2] + (robots[3] - robots[2]) * 0.3;
  CHECK_FALSE(predicates(robots, tri).b);
}

TEST_CASE("phase labels are exclusive on random configurations") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5, 5);
  Pattern sq{kSquare, 0.05};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> pts(3 + trial % 6);
    for (auto& q : pts) q = {u(rng), u(rng)};
    auto p = predicates(pts, sq);
    int count = (!p.u && (!p.a || !p.c)) + (p.a && p.c && !p.b) + p.b;
    CHECK(count == (p.u ? 0 : 1));
    if (p.s) CHECK(p.a);
  }
}

TEST_CASE("views agree with brute-force symmetry") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> pts(3 + trial % 6);
    for (auto& q : pts) q = {u(rng), u(rng)};
    CHECK(symmetry_type(pts) == brute_symmetry(pts).classify());
  }
  for (int k = 3; k <= 8; ++k) CHECK(symmetry_type(regular(k, 2)) == brute_symmetry(regular(k, 2)).classify());
  CHECK(symmetry_type(kE5) == brute_symmetry(kE5).classify());
}

TEST_CASE("asymmetric views are distinct, rotational views form orbits") {
  auto hex = regular(6, 1.5, {1, 1});
  auto v = views(hex);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].cw == v[0].cw);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts(5);
    for (auto& q : pts) q = {u(rng), u(rng)};
    auto vs = views(pts);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) CHECK(vs[i].min() != vs[j].min());
  }
}

TEST_CASE("pattern validation") {
  Pattern ok{kSquare, 0.1};
  CHECK_NOTHROW(validate(ok));
  Pattern crowded{{{0, 0}, {10, 0}, {0.5, 0}}, 0.1};
  CHECK_THROWS_AS(validate(crowded), Error);
  Pattern bad_eps{kSquare, 1.5};
  CHECK_THROWS_AS(validate(bad_eps), Error);
}
