#pragma once

// Shared machinery for the phase implementations.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apf/protocol.hpp"

namespace apf::detail {

struct Context {
  Context(std::span<const Point> positions, const MovementModel& model);

  std::span<const Point> pos;
  const MovementModel& model;
  Circle mec;
  std::vector<RobotViews> views;
  std::vector<std::size_t> boundary;
  int sigma = 1;        // +1: counterclockwise is the agreed positive sense
  double shape = 0.0;   // shape judgment tolerance
  double margin = 0.0;  // distance kept from curves that separate outcomes

  std::size_t n() const { return pos.size(); }
  bool on_boundary(std::size_t i) const;
  std::vector<std::size_t> interior() const;
  std::vector<Obstacle> others(std::size_t mover) const;
  std::size_t min_view(std::span<const std::size_t> candidates) const;
  // Frame at `origin` whose x axis points along `dir`, oriented by sigma.
  Frame frame(Point origin, Point dir) const;
};

Plan idle(std::string label);
Plan move(std::string label, std::size_t mover, Point intended, Point goal);
Plan move(std::string label, std::size_t mover, const StepPlan& step);

// Keeps every point at least `margin` off the line, on the side of `nominal`.
Region& avoid_line(Region& region, const Line& line, Point nominal, double margin);
Region& inside_by(Region& region, const Circle& c, double margin);
Region& outside_by(Region& region, const Circle& c, double margin);

// One-shot move: a destination whose reachable disk lies in `z`, whose cone
// lies in `cone` and avoids the obstacles. Directions fan out from the
// inscribed point of z and cone; step lengths halve until admissible.
Point find_destination(const MovementModel& model, Point x, const Region& z, const Region& cone,
                       std::span<const Obstacle> obstacles, const Frame& frame, Point hint, int sigma);

// Chooses inside or outside for each circle that the reachable disk must not
// meet, preferring the combination with the widest inscribed disk and, on
// ties, outside. Adds the chosen constraints to `z`.
void choose_circle_sides(Region& z, const Region& cone, std::span<const Circle> circles, double margin,
                         Point hint, const Frame& frame);

// Symmetry axes of the configuration without robot `skip`, as lines.
std::vector<Line> residual_axes(std::span<const Point> positions, std::size_t skip);

// Outward move of a boundary robot that leaves a scalene acute triangle
// r1 r2 y on the new circle (also used to break isosceles triangles).
Plan break_triangle(const Context& ctx, std::size_t mover, std::size_t r1, std::size_t r2, const std::string& label);

// Makes the robot nearest `origin` among `members` unique and off both
// lines. Returns nullopt when that already holds with margin.
std::optional<Plan> make_innermost_safe(const Context& ctx, Point origin, const Line& first, const Line& second,
                                        std::span<const std::size_t> members, const Region& extra,
                                        double outer_radius, const std::string& label);

}  // namespace apf::detail
