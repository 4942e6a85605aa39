#pragma once

// Planar primitives with a single absolute tolerance. Every equality and
// on-boundary test in the library goes through kTol.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "apf/error.hpp"

namespace apf {

inline constexpr double kTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  Point operator/(double s) const { return {x / s, y / s}; }
  Point operator-() const { return {-x, -y}; }
  bool operator==(const Point&) const = default;
};

inline Point operator*(double s, Point p) { return p * s; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }  // counterclockwise quarter turn
inline Point unit(Point a) {
  double n = norm(a);
  return n > 0.0 ? a / n : Point{};
}
inline Point rotate(Point v, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline Point midpoint(Point a, Point b) { return (a + b) * 0.5; }
inline bool near(Point a, Point b, double tol = kTol) { return dist(a, b) <= tol; }

// Counterclockwise angle of v in [0, 2pi).
double polar_angle(Point v);

struct Circle {
  Point center;
  double radius = 0.0;
};

bool same_circle(const Circle& a, const Circle& b, double tol = kTol);
inline bool on_circle(const Circle& c, Point p, double tol = kTol) {
  return std::abs(dist(c.center, p) - c.radius) <= tol;
}

// Open region bounded by the disk and the two tangent segments from the apex.
struct Cone {
  Point apex;
  Point target_center;
  double target_radius = 0.0;
};

// Infinite line through `a` with direction `b - a`. Its left side is the
// positive side.
struct Line {
  Point a;
  Point b;

  Point direction() const { return unit(b - a); }
  Point normal() const { return perp(direction()); }
  double signed_distance(Point p) const { return dot(p - a, normal()); }
  double distance(Point p) const { return std::abs(signed_distance(p)); }
};

double segment_distance(Point p, Point a, Point b);

struct Disk {
  Point center;
  double radius = 0.0;
};

// A closed disk obstacle; radius 0 is a point obstacle.
using Obstacle = Disk;

struct Primitive {
  enum class Kind { kInsideCircle, kOutsideCircle, kHalfPlane, kStrip };

  Kind kind = Kind::kInsideCircle;
  bool open = true;
  Circle circle;  // circle kinds
  Line line;      // half-plane: left side of line; strip: band around line
  double lo = 0.0, hi = 0.0;  // strip: signed offsets from `line`, lo < hi

  // Signed distance to the primitive's boundary, positive inside.
  double clearance(Point p) const;
};

class Region {
 public:
  Region() = default;

  Region& inside(const Circle& c, bool open = true);
  Region& outside(const Circle& c, bool open = true);
  Region& left_of(const Line& l, bool open = true);
  // Open strip between two parallel lines through p1 and p2 with direction dir.
  Region& strip(Point p1, Point p2, Point dir);
  Region& add(const Primitive& p);
  Region& append(const Region& other);

  const std::vector<Primitive>& constraints() const { return constraints_; }
  bool empty_constraints() const { return constraints_.empty(); }

  double clearance(Point p) const;
  bool contains(Point p) const;

 private:
  std::vector<Primitive> constraints_;
};

struct CircleFamilyArc {
  Point anchor_a;
  Point anchor_b;
  double offset_lo = 0.0;
  double offset_hi = 0.0;
};

// Local orthonormal frame used to make grid searches independent of the
// observer's coordinate system. handedness = +1 keeps orientation.
struct Frame {
  Point origin;
  Point x_axis{1.0, 0.0};
  int handedness = 1;

  Point y_axis() const { return perp(x_axis) * static_cast<double>(handedness); }
  Point to_world(Point local) const { return origin + x_axis * local.x + y_axis() * local.y; }
  Point to_local(Point world) const {
    Point d = world - origin;
    return {dot(d, x_axis), dot(d, y_axis())};
  }
};

Circle mec(std::span<const Point> points);
Circle circumcircle(std::span<const Point> points);
bool is_critical(std::span<const Point> points, std::size_t index);

struct ConcentricClass {
  double radius = 0.0;
  std::vector<std::size_t> members;
};

std::vector<ConcentricClass> concentric_classes(std::span<const Point> points, Point center);
std::vector<ConcentricClass> concentric_classes(std::span<const Point> points);

bool cone_contains(const Cone& cone, Point p);
double cone_angle(const Cone& cone);
// Distance from q to the closed convex hull of the apex and the target disk.
double hull_distance(Point q, const Cone& cone);

Circle family_circle(const CircleFamilyArc& arc, double offset);
// Largest circle through a and b whose center is on the `side` (+1 left of
// a->b, -1 right) and which encloses every point (closed).
Circle largest_enclosing_family_circle(Point a, Point b, std::span<const Point> points, int side);

bool region_contains(const Region& region, Point p);
Disk inscribed_disk(const Region& region, Point hint);
Disk inscribed_disk(const Region& region, Point hint, const Frame& frame,
                    std::span<const Obstacle> obstacles = {});

// Minimum clearance of the closed segment [p, q] to the region boundary.
double segment_clearance(const Region& region, Point p, Point q);
// Margin by which the cone from `apex` to `disk` stays inside the region;
// negative when it leaves. The apex itself may sit on the boundary.
double cone_clearance(const Region& region, Point apex, const Disk& disk);
// Margin between the cone and the obstacles (negative on overlap).
double cone_obstacle_clearance(std::span<const Obstacle> obstacles, Point apex, const Disk& disk);

}  // namespace apf
