#include "apf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apf {

namespace {

struct Similarity {
  Point from_origin, to_origin;
  double scale = 1.0, angle = 0.0;
  bool mirror = false;

  Point apply(Point p) const {
    Point d = p - from_origin;
    if (mirror) d.y = -d.y;
    return to_origin + rotate(d, angle) * scale;
  }
};

Similarity pin(Point fa, Point fb, Point ra, Point rb, bool mirror) {
  Similarity s;
  s.from_origin = fa;
  s.to_origin = ra;
  s.mirror = mirror;
  Point df = fb - fa;
  if (mirror) df.y = -df.y;
  Point dr = rb - ra;
  s.scale = norm(dr) / norm(df);
  s.angle = polar_angle(dr) - polar_angle(df);
  return s;
}

// Least-squares similarity from pattern points onto their matched robots.
Similarity fit(std::span<const Point> f, std::span<const Point> r, bool mirror) {
  Point fm{}, rm{};
  for (std::size_t k = 0; k < f.size(); ++k) {
    Point p = f[k];
    if (mirror) p.y = -p.y;
    fm = fm + p;
    rm = rm + r[k];
  }
  fm = fm / static_cast<double>(f.size());
  rm = rm / static_cast<double>(f.size());
  double a = 0.0, b = 0.0, ss = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    Point p = f[k];
    if (mirror) p.y = -p.y;
    Point x = p - fm, y = r[k] - rm;
    a += dot(x, y);
    b += cross(x, y);
    ss += dot(x, x);
  }
  Similarity s;
  s.mirror = mirror;
  s.from_origin = mirror ? Point{fm.x, -fm.y} : fm;
  s.to_origin = rm;
  s.angle = std::atan2(b, a);
  s.scale = std::hypot(a, b) / ss;
  return s;
}

std::optional<Witness> test(std::span<const Point> robots, const Pattern& pattern, const Similarity& s) {
  Witness w;
  for (Point f : pattern.points) w.points.push_back(s.apply(f));
  w.diameter = 2.0 * mec(w.points).radius;
  double reach = pattern.epsilon * w.diameter + kTol;
  const std::size_t n = robots.size();
  w.robot.assign(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k] || dist(robots[k], w.points[m]) > reach) continue;
      w.robot[m] = k;
      used[k] = true;
      break;
    }
    if (w.robot[m] == n) return std::nullopt;
  }
  return w;
}

// Robot nearest to each embedded point, when that is a bijection.
std::optional<std::vector<std::size_t>> nearest_matching(std::span<const Point> robots,
                                                         std::span<const Point> embedded) {
  const std::size_t n = robots.size();
  std::vector<std::size_t> match(n);
  std::vector<bool> used(n, false);
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (dist(robots[k], embedded[m]) < dist(robots[best], embedded[m])) best = k;
    if (used[best]) return std::nullopt;
    used[best] = true;
    match[m] = best;
  }
  return match;
}

}  // namespace

std::optional<Witness> epsilon_close(std::span<const Point> robots, const Pattern& pattern) {
  const std::size_t n = robots.size();
  if (n != pattern.size()) throw Error(ErrorCode::kInvalidInput, "robot and pattern counts differ");
  if (n == 0) return std::nullopt;
  const auto& f = pattern.points;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          if (k == l) continue;
          for (bool mirror : {false, true}) {
            Similarity s = pin(f[i], f[j], robots[k], robots[l], mirror);
            if (auto w = test(robots, pattern, s)) return w;
            std::vector<Point> embedded;
            for (Point p : f) embedded.push_back(s.apply(p));
            auto match = nearest_matching(robots, embedded);
            if (!match) continue;
            std::vector<Point> matched;
            for (std::size_t m = 0; m < n; ++m) matched.push_back(robots[(*match)[m]]);
            if (auto w = test(robots, pattern, fit(f, matched, mirror))) return w;
          }
        }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SymmetryType Isometries::classify() const {
  bool rot = std::any_of(rotations.begin(), rotations.end(), [](double a) { return a > 1e-9; });
  bool refl = !axes.empty();
  if (rot && refl) return SymmetryType::kBoth;
  if (rot) return SymmetryType::kRotation;
  if (refl) return SymmetryType::kReflection;
  return SymmetryType::kAsymmetric;
}

Isometries brute_symmetry(std::span<const Point> positions) {
  Isometries out;
  Circle c = mec_brute(positions);
  out.center = c.center;
  double tol = kTol * std::max(1.0, c.radius);

  auto maps_onto = [&](auto&& transform) {
    for (Point p : positions) {
      Point q = transform(p);
      bool hit = false;
      for (Point r : positions) hit = hit || dist(q, r) <= tol;
      if (!hit) return false;
    }
    return true;
  };

  const std::size_t n = positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point vi = positions[i] - c.center;
    if (norm(vi) <= tol) continue;
    for (std::size_t j = 0; j < n; ++j) {
      Point vj = positions[j] - c.center;
      if (std::abs(norm(vi) - norm(vj)) > tol) continue;
      double angle = i == j ? 0.0 : polar_angle(vj) - polar_angle(vi);
      if (angle < 0.0) angle += 2.0 * kPi;
      bool dup = false;
      for (double a : out.rotations) {
        double diff = std::abs(a - angle);
        dup = dup || std::min(diff, 2.0 * kPi - diff) <= 1e-9;
      }
      if (dup) continue;
      if (maps_onto([&](Point p) { return c.center + rotate(p - c.center, angle); }))
        out.rotations.push_back(angle);
    }
  }
  if (out.rotations.empty()) out.rotations.push_back(0.0);

  std::vector<Point> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    Point vi = positions[i] - c.center;
    if (norm(vi) <= tol) continue;
    candidates.push_back(unit(vi));
    for (std::size_t j = i + 1; j < n; ++j) {
      Point vj = positions[j] - c.center;
      if (std::abs(norm(vi) - norm(vj)) > tol) continue;
      Point m = vi + vj;
      candidates.push_back(norm(m) > tol ? unit(m) : unit(perp(vi)));
    }
  }
  for (Point axis : candidates) {
    bool dup = false;
    for (Point a : out.axes) dup = dup || std::abs(cross(a, axis)) <= 1e-9;
    if (dup) continue;
    auto reflect = [&](Point p) {
      Point d = p - c.center;
      return c.center + axis * (2.0 * dot(d, axis)) - d;
    };
    if (maps_onto(reflect)) out.axes.push_back(axis);
  }
  return out;
}

Circle mec_brute(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidInput, "empty point set");
  Circle best{points[0], 0.0};
  if (points.size() == 1) return best;
  best.radius = std::numeric_limits<double>::infinity();
  auto consider = [&](const Circle& c) {
    if (c.radius >= best.radius) return;
    for (Point p : points)
      if (dist(p, c.center) > c.radius + 1e-9 * std::max(1.0, c.radius)) return;
    best = c;
  };
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      consider({midpoint(points[i], points[j]), dist(points[i], points[j]) / 2});
      for (std::size_t k = j + 1; k < n; ++k) {
        Point a = points[i], b = points[j], q = points[k];
        double d = 2.0 * (a.x * (b.y - q.y) + b.x * (q.y - a.y) + q.x * (a.y - b.y));
        if (std::abs(d) < 1e-12) continue;
        double a2 = dot(a, a), b2 = dot(b, b), q2 = dot(q, q);
        Point o{(a2 * (b.y - q.y) + b2 * (q.y - a.y) + q2 * (a.y - b.y)) / d,
                (a2 * (q.x - b.x) + b2 * (a.x - q.x) + q2 * (b.x - a.x)) / d};
        consider({o, dist(o, a)});
      }
    }
  return best;
}

}  // namespace apf
