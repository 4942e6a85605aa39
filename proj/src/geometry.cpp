#include "apf/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

namespace apf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kAmbiguousView: return "AmbiguousView";
    case ErrorCode::kNoStepNeeded: return "NoStepNeeded";
    case ErrorCode::kBlocked: return "Blocked";
    case ErrorCode::kUnbreakableSymmetry: return "UnbreakableSymmetry";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

double polar_angle(Point v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a -= 2.0 * kPi;
  return a;
}

bool same_circle(const Circle& a, const Circle& b, double tol) {
  return near(a.center, b.center, tol) && std::abs(a.radius - b.radius) <= tol;
}

double segment_distance(Point p, Point a, Point b) {
  Point ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

// ---------------------------------------------------------------------------
// Regions

double Primitive::clearance(Point p) const {
  switch (kind) {
    case Kind::kInsideCircle: return circle.radius - dist(p, circle.center);
    case Kind::kOutsideCircle: return dist(p, circle.center) - circle.radius;
    case Kind::kHalfPlane: return line.signed_distance(p);
    case Kind::kStrip: {
      double s = line.signed_distance(p);
      return std::min(s - lo, hi - s);
    }
  }
  return 0.0;
}

Region& Region::inside(const Circle& c, bool open) {
  Primitive p;
  p.kind = Primitive::Kind::kInsideCircle;
  p.open = open;
  p.circle = c;
  return add(p);
}

Region& Region::outside(const Circle& c, bool open) {
  Primitive p;
  p.kind = Primitive::Kind::kOutsideCircle;
  p.open = open;
  p.circle = c;
  return add(p);
}

Region& Region::left_of(const Line& l, bool open) {
  Primitive p;
  p.kind = Primitive::Kind::kHalfPlane;
  p.open = open;
  p.line = l;
  return add(p);
}

Region& Region::strip(Point p1, Point p2, Point dir) {
  Primitive p;
  p.kind = Primitive::Kind::kStrip;
  p.open = true;
  p.line = Line{p1, p1 + unit(dir)};
  double off = p.line.signed_distance(p2);
  p.lo = std::min(0.0, off);
  p.hi = std::max(0.0, off);
  return add(p);
}

Region& Region::add(const Primitive& p) {
  constraints_.push_back(p);
  return *this;
}

Region& Region::append(const Region& other) {
  constraints_.insert(constraints_.end(), other.constraints_.begin(), other.constraints_.end());
  return *this;
}

double Region::clearance(Point p) const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& prim : constraints_) c = std::min(c, prim.clearance(p));
  return c;
}

bool Region::contains(Point p) const {
  for (const auto& prim : constraints_) {
    double c = prim.clearance(p);
    if (prim.open ? c <= kTol : c < -kTol) return false;
  }
  return true;
}

bool region_contains(const Region& region, Point p) { return region.contains(p); }

// ---------------------------------------------------------------------------
// Enclosing circles

namespace {

Circle circle_from_pair(Point a, Point b) { return {midpoint(a, b), dist(a, b) * 0.5}; }

bool circle_from_triple(Point a, Point b, Point c, Circle& out) {
  Point ab = b - a, ac = c - a;
  double d = 2.0 * cross(ab, ac);
  double scale = std::max({dot(ab, ab), dot(ac, ac), 1e-300});
  if (std::abs(d) <= 1e-14 * scale) return false;
  double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  Point center{a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
  out = {center, dist(center, a)};
  return true;
}

Circle widest_pair(Point a, Point b, Point c) {
  Circle best = circle_from_pair(a, b);
  for (const Circle& cand : {circle_from_pair(a, c), circle_from_pair(b, c)})
    if (cand.radius > best.radius) best = cand;
  return best;
}

bool encloses(const Circle& c, Point p) {
  return dist(c.center, p) <= c.radius + 1e-12 * std::max(1.0, c.radius);
}

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Circle mec(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidInput, "mec of an empty point set");
  for (Point p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::kInvalidInput, "non-finite coordinate");

  // Move-to-front incremental construction over a fixed permutation.
  std::vector<Point> pts(points.begin(), points.end());
  std::uint64_t seed = 0x5EEDull + pts.size();
  for (std::size_t i = pts.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(splitmix(seed) % i);
    std::swap(pts[i - 1], pts[j]);
  }

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (encloses(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (encloses(c, pts[j])) continue;
      c = circle_from_pair(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (encloses(c, pts[k])) continue;
        if (!circle_from_triple(pts[i], pts[j], pts[k], c)) c = widest_pair(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

Circle circumcircle(std::span<const Point> points) {
  if (points.size() == 2) {
    if (near(points[0], points[1])) throw Error(ErrorCode::kDegenerate, "coincident pair");
    return circle_from_pair(points[0], points[1]);
  }
  if (points.size() == 3) {
    Circle c;
    if (!circle_from_triple(points[0], points[1], points[2], c))
      throw Error(ErrorCode::kDegenerate, "collinear triple");
    return c;
  }
  throw Error(ErrorCode::kInvalidInput, "circumcircle needs 2 or 3 points");
}

bool is_critical(std::span<const Point> points, std::size_t index) {
  if (index >= points.size()) throw Error(ErrorCode::kInvalidInput, "index out of range");
  if (points.size() == 1) return true;
  std::vector<Point> rest;
  rest.reserve(points.size() - 1);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (i != index) rest.push_back(points[i]);
  return !same_circle(mec(points), mec(rest));
}

std::vector<ConcentricClass> concentric_classes(std::span<const Point> points, Point center) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> r(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    r[i] = dist(points[i], center);
    if (r[i] <= kTol) r[i] = 0.0;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });

  std::vector<ConcentricClass> classes;
  for (std::size_t idx : order) {
    if (!classes.empty() && r[idx] - classes.back().radius <= kTol) {
      classes.back().members.push_back(idx);
    } else {
      classes.push_back({r[idx], {idx}});
    }
  }
  return classes;
}

std::vector<ConcentricClass> concentric_classes(std::span<const Point> points) {
  return concentric_classes(points, mec(points).center);
}

// ---------------------------------------------------------------------------
// Cones

namespace {

struct Tangents {
  Point a, b;
  bool degenerate = false;  // apex inside the closed disk
};

Tangents tangent_points(const Cone& cone) {
  Point v = cone.target_center - cone.apex;
  double d = norm(v);
  if (d <= cone.target_radius) return {cone.apex, cone.apex, true};
  double half = std::asin(cone.target_radius / d);
  double len = std::sqrt(std::max(0.0, d * d - cone.target_radius * cone.target_radius));
  Point u = v / d;
  return {cone.apex + rotate(u, half) * len, cone.apex + rotate(u, -half) * len, false};
}

// Signed depth of q inside triangle (p0, p1, p2); positive strictly inside.
double triangle_depth(Point q, Point p0, Point p1, Point p2) {
  double orient = cross(p1 - p0, p2 - p0) >= 0.0 ? 1.0 : -1.0;
  auto edge = [&](Point a, Point b) {
    Point d = b - a;
    double len = norm(d);
    if (len == 0.0) return -std::numeric_limits<double>::infinity();
    return orient * cross(d, q - a) / len;
  };
  return std::min({edge(p0, p1), edge(p1, p2), edge(p2, p0)});
}

}  // namespace

bool cone_contains(const Cone& cone, Point p) {
  if (dist(p, cone.target_center) < cone.target_radius - kTol) return true;
  Tangents t = tangent_points(cone);
  if (t.degenerate) return false;
  return triangle_depth(p, cone.apex, t.a, t.b) > kTol;
}

double cone_angle(const Cone& cone) {
  double d = dist(cone.apex, cone.target_center);
  if (d <= cone.target_radius) return kPi;
  return 2.0 * std::asin(cone.target_radius / d);
}

double hull_distance(Point q, const Cone& cone) {
  double to_disk = dist(q, cone.target_center) - cone.target_radius;
  if (to_disk <= 0.0) return 0.0;
  Tangents t = tangent_points(cone);
  if (t.degenerate) return to_disk;
  if (triangle_depth(q, cone.apex, t.a, t.b) >= 0.0) return 0.0;
  return std::min({to_disk, segment_distance(q, cone.apex, t.a), segment_distance(q, cone.apex, t.b)});
}

// ---------------------------------------------------------------------------
// Circle families

Circle family_circle(const CircleFamilyArc& arc, double offset) {
  if (near(arc.anchor_a, arc.anchor_b)) throw Error(ErrorCode::kDegenerate, "family anchors coincide");
  Point m = midpoint(arc.anchor_a, arc.anchor_b);
  Point n = perp(unit(arc.anchor_b - arc.anchor_a));
  double half = dist(arc.anchor_a, arc.anchor_b) * 0.5;
  return {m + n * offset, std::sqrt(half * half + offset * offset)};
}

Circle largest_enclosing_family_circle(Point a, Point b, std::span<const Point> points, int side) {
  if (near(a, b)) throw Error(ErrorCode::kDegenerate, "family anchors coincide");
  Point m = midpoint(a, b);
  Point dir = unit(b - a);
  Point n = perp(dir) * (side >= 0 ? 1.0 : -1.0);
  double half = dist(a, b) * 0.5;

  // Closed containment of q in the member with center m + n t reduces to a
  // linear bound on t whose direction depends on the side q lies on.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  for (Point q : points) {
    double u = dot(q - m, dir), h = dot(q - m, n);
    double val = u * u + h * h - half * half;
    if (std::abs(h) <= kTol) {
      if (val > kTol) throw Error(ErrorCode::kInvalidInput, "point on line(a,b) outside seg(a,b)");
      continue;
    }
    double bound = val / (2.0 * h);
    if (h > 0.0) lower = std::max(lower, bound);
    else upper = std::min(upper, bound);
  }
  if (!std::isfinite(upper)) throw Error(ErrorCode::kUnbounded, "no point limits the family");
  if (upper < lower - kTol) throw Error(ErrorCode::kInvalidInput, "no family member encloses all points");
  return {m + n * upper, std::sqrt(half * half + upper * upper)};
}

// ---------------------------------------------------------------------------
// Clearance queries

double segment_clearance(const Region& region, Point p, Point q) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& prim : region.constraints()) {
    if (prim.kind == Primitive::Kind::kOutsideCircle) {
      c = std::min(c, segment_distance(prim.circle.center, p, q) - prim.circle.radius);
    } else {
      // The remaining clearances are concave, so the minimum is at an endpoint.
      c = std::min({c, prim.clearance(p), prim.clearance(q)});
    }
  }
  return c;
}

double cone_clearance(const Region& region, Point apex, const Disk& disk) {
  const Cone cone{apex, disk.center, disk.radius};
  double c = std::numeric_limits<double>::infinity();
  for (const auto& prim : region.constraints()) {
    double disk_margin = prim.clearance(disk.center) - disk.radius;
    double apex_c = prim.clearance(apex);
    if (prim.kind != Primitive::Kind::kOutsideCircle) {
      if (apex_c < -kTol) return apex_c;
      c = std::min(c, disk_margin);
      continue;
    }
    if (apex_c > kTol) {
      c = std::min(c, hull_distance(prim.circle.center, cone) - prim.circle.radius);
      continue;
    }
    if (apex_c < -kTol) return apex_c;
    // Apex on the circle: every cone direction must point away from it.
    Tangents t = tangent_points(cone);
    if (t.degenerate) return -1.0;
    Point inward = unit(prim.circle.center - apex);
    double worst = std::max(dot(unit(t.a - apex), inward), dot(unit(t.b - apex), inward));
    if (worst >= -1e-12) return -1.0;
    c = std::min(c, disk_margin);
  }
  return c;
}

double cone_obstacle_clearance(std::span<const Obstacle> obstacles, Point apex, const Disk& disk) {
  const Cone cone{apex, disk.center, disk.radius};
  double c = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) c = std::min(c, hull_distance(o.center, cone) - o.radius);
  return c;
}

// ---------------------------------------------------------------------------
// Inscribed disks

namespace {

constexpr int kGridLevels = 3;
constexpr int kGridSide = 33;

}  // namespace

Disk inscribed_disk(const Region& region, Point hint) { return inscribed_disk(region, hint, Frame{}); }

Disk inscribed_disk(const Region& region, Point hint, const Frame& frame,
                    std::span<const Obstacle> obstacles) {
  auto clearance = [&](Point p) {
    double c = region.clearance(p);
    for (const auto& o : obstacles) c = std::min(c, dist(p, o.center) - o.radius);
    return c;
  };

  // Bounding box in frame coordinates.
  Point h = frame.to_local(hint);
  double lo_x = -std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x;
  double scale = 0.0;
  for (const auto& prim : region.constraints()) {
    if (prim.kind == Primitive::Kind::kInsideCircle) {
      Point c = frame.to_local(prim.circle.center);
      lo_x = std::max(lo_x, c.x - prim.circle.radius);
      hi_x = std::min(hi_x, c.x + prim.circle.radius);
      lo_y = std::max(lo_y, c.y - prim.circle.radius);
      hi_y = std::min(hi_y, c.y + prim.circle.radius);
    }
    if (prim.kind == Primitive::Kind::kInsideCircle || prim.kind == Primitive::Kind::kOutsideCircle)
      scale = std::max(scale, prim.circle.radius);
  }
  if (!std::isfinite(lo_x)) {
    double half = scale > 0.0 ? 2.0 * scale : 1.0;
    lo_x = h.x - half; hi_x = h.x + half;
    lo_y = h.y - half; hi_y = h.y + half;
  }
  if (lo_x > hi_x || lo_y > hi_y) throw Error(ErrorCode::kEmptyRegion, "bounding box is empty");

  Point best_local = h;
  const double tie = 1e-12 * std::max({1.0, scale, hi_x - lo_x, hi_y - lo_y});
  double best = -std::numeric_limits<double>::infinity();
  double best_hint_d = std::numeric_limits<double>::infinity();
  for (int level = 0; level < kGridLevels; ++level) {
    double step_x = (hi_x - lo_x) / (kGridSide - 1);
    double step_y = (hi_y - lo_y) / (kGridSide - 1);
    for (int i = 0; i < kGridSide; ++i) {
      for (int j = 0; j < kGridSide; ++j) {
        Point local{lo_x + step_x * i, lo_y + step_y * j};
        double c = clearance(frame.to_world(local));
        double hd = dist(local, h);
        // Plateaus are common (annuli, strips) and often mirror-symmetric about
        // the hint; rounding must not pick the point, the frame does.
        bool better = c > best + tie;
        if (!better && c >= best - tie) {
          if (hd < best_hint_d - tie) better = true;
          else if (hd <= best_hint_d + tie)
            better = local.y > best_local.y + tie || (local.y >= best_local.y - tie && local.x > best_local.x + tie);
        }
        if (better) {
          best = c;
          best_hint_d = hd;
          best_local = local;
        }
      }
    }
    double half_x = 2.0 * step_x, half_y = 2.0 * step_y;
    lo_x = best_local.x - half_x; hi_x = best_local.x + half_x;
    lo_y = best_local.y - half_y; hi_y = best_local.y + half_y;
  }
  if (!(best > kTol)) throw Error(ErrorCode::kEmptyRegion, "no interior point found");
  return {frame.to_world(best_local), best * 0.5};
}

}  // namespace apf
