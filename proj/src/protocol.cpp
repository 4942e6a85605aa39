#include "apf/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "protocol_detail.hpp"

namespace apf {

namespace detail {

Context::Context(std::span<const Point> positions, const MovementModel& m)
    : pos(positions), model(m), mec(apf::mec(positions)), views(apf::views(positions)),
      boundary(boundary_robots(positions)) {
  shape = kViewQuantum * std::max(1.0, mec.radius);
  margin = 100.0 * shape;
  std::vector<std::size_t> all(n());
  for (std::size_t i = 0; i < n(); ++i) all[i] = i;
  try {
    std::size_t leader = apf::min_view_robot(pos, all, views);
    sigma = views[leader].cw <= views[leader].ccw ? 1 : -1;
  } catch (const Error&) {
    sigma = 1;  // symmetric: any local choice is as good as another
  }
}

bool Context::on_boundary(std::size_t i) const {
  return std::find(boundary.begin(), boundary.end(), i) != boundary.end();
}

std::vector<std::size_t> Context::interior() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n(); ++i)
    if (!on_boundary(i)) out.push_back(i);
  return out;
}

std::vector<Obstacle> Context::others(std::size_t mover) const {
  std::vector<Obstacle> out;
  for (std::size_t i = 0; i < n(); ++i)
    if (i != mover) out.push_back({pos[i], 0.0});
  return out;
}

std::size_t Context::min_view(std::span<const std::size_t> candidates) const {
  return apf::min_view_robot(pos, candidates, views);
}

Frame Context::frame(Point origin, Point dir) const {
  Point u = unit(dir);
  if (norm(u) == 0.0) u = {1.0, 0.0};
  return Frame{origin, u, sigma};
}

Plan idle(std::string label) {
  Plan p;
  p.label = std::move(label);
  return p;
}

Plan move(std::string label, std::size_t mover, Point intended, Point goal) {
  Plan p;
  p.label = std::move(label);
  p.mover = mover;
  p.intended = intended;
  p.goal = goal;
  return p;
}

Plan move(std::string label, std::size_t mover, const StepPlan& step) {
  return move(std::move(label), mover, step.intended, step.goal);
}

Region& avoid_line(Region& region, const Line& line, Point nominal, double margin) {
  Line l = line.signed_distance(nominal) >= 0.0 ? line : Line{line.b, line.a};
  Point shift = l.normal() * margin;
  return region.left_of({l.a + shift, l.b + shift});
}

Region& inside_by(Region& region, const Circle& c, double margin) {
  return region.inside({c.center, std::max(0.0, c.radius - margin)});
}

Region& outside_by(Region& region, const Circle& c, double margin) {
  return region.outside({c.center, c.radius + margin});
}

Point find_destination(const MovementModel& model, Point x, const Region& z, const Region& cone,
                       std::span<const Obstacle> obstacles, const Frame& frame, Point hint, int sigma) {
  Region both = z;
  both.append(cone);
  Point q = inscribed_disk(both, hint, frame).center;
  auto admissible = [&](Point y, double s) {
    Disk reach{y, error_d(model, s)};
    return z.clearance(y) > reach.radius + kTol && cone_clearance(cone, x, reach) > kTol &&
           cone_obstacle_clearance(obstacles, x, reach) > kTol;
  };
  // Aim at the widest point first, then at the caller's nominal point: a far
  // inscribed point can be out of reach within the error bound.
  const double turn_step = 5.0 * kPi / 180.0;
  for (Point aim : {q, hint}) {
    double d0 = dist(x, aim);
    if (d0 <= kTol) continue;
    Point u = unit(aim - x);
    for (int k = 0; k <= 32; ++k) {
      double turn = k == 0 ? 0.0 : ((k + 1) / 2) * turn_step * (k % 2 == 1 ? sigma : -sigma);
      Point dir = rotate(u, turn);
      for (int j = 0; j < 16; ++j) {
        double s = d0 * (1.0 - j / 16.0);
        if (admissible(x + dir * s, s)) return x + dir * s;
      }
      for (double s = d0 / 16.0, h = 0; h < 50; ++h, s *= 0.5)
        if (admissible(x + dir * s, s)) return x + dir * s;
    }
  }
  throw Error(ErrorCode::kBlocked, "no admissible destination");
}

void choose_circle_sides(Region& z, const Region& cone, std::span<const Circle> circles, double margin,
                         Point hint, const Frame& frame) {
  const std::size_t combos = std::size_t{1} << circles.size();
  double best = -1.0;
  Region chosen;
  for (std::size_t mask = 0; mask < combos; ++mask) {
    Region extra;
    for (std::size_t k = 0; k < circles.size(); ++k) {
      if (mask & (std::size_t{1} << k)) inside_by(extra, circles[k], margin);
      else outside_by(extra, circles[k], margin);
    }
    Region all = z;
    all.append(extra);
    all.append(cone);
    try {
      double r = inscribed_disk(all, hint, frame).radius;
      if (r > best + kTol) {
        best = r;
        chosen = extra;
      }
    } catch (const Error&) {
    }
  }
  if (best < 0.0) throw Error(ErrorCode::kEmptyRegion, "every side choice is empty");
  z.append(chosen);
}

std::vector<Line> residual_axes(std::span<const Point> positions, std::size_t skip) {
  std::vector<Point> rest;
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (i != skip) rest.push_back(positions[i]);
  if (rest.size() < 2) return {};
  SymmetryInfo info = symmetry(rest);
  std::vector<Line> out;
  for (Point a : info.axes) out.push_back({info.center, info.center + a});
  return out;
}

Plan break_triangle(const Context& ctx, std::size_t mover, std::size_t r1, std::size_t r2,
                    const std::string& label) {
  Point x = ctx.pos[mover], a = ctx.pos[r1], b = ctx.pos[r2];
  Point c = ctx.mec.center;
  double base = dist(a, b);
  Point along = unit(b - a);
  Point mid = midpoint(a, b);
  Line axis{mid, mid + perp(along)};
  Line chord = Line{a, b}.signed_distance(x) >= 0.0 ? Line{a, b} : Line{b, a};
  int grow = Line{a, b}.signed_distance(x) >= 0.0 ? 1 : -1;

  Point out = unit(x - c);
  Point nominal = x + (out + perp(out) * static_cast<double>(ctx.sigma)) * (base / 8.0);

  Region z, cone;
  cone.outside(ctx.mec).left_of(chord);
  outside_by(z, ctx.mec, ctx.margin);
  avoid_line(z, chord, x, ctx.margin);
  try {
    Circle widest = largest_enclosing_family_circle(a, b, ctx.pos, grow);
    cone.inside(widest);
    inside_by(z, widest, ctx.margin);
  } catch (const Error&) {
    // No robot bounds the family on the far side of the chord.
  }
  z.inside({x, base / 2.0});  // keeps the side choice local
  z.strip(a + along * ctx.margin, b - along * ctx.margin, perp(along));
  avoid_line(z, axis, nominal, ctx.margin);
  Frame frame = ctx.frame(c, out);
  const Circle rings[] = {{a, base}, {b, base}};
  choose_circle_sides(z, cone, rings, ctx.margin, nominal, frame);
  auto obstacles = ctx.others(mover);
  Point y = find_destination(ctx.model, x, z, cone, obstacles, frame, nominal, ctx.sigma);
  return move(label, mover, y, y);
}

std::optional<Plan> make_innermost_safe(const Context& ctx, Point origin, const Line& first, const Line& second,
                                        std::span<const std::size_t> members, const Region& extra,
                                        double outer_radius, const std::string& label) {
  if (members.empty()) return std::nullopt;
  std::vector<Point> pts;
  for (std::size_t i : members) pts.push_back(ctx.pos[i]);
  auto classes = concentric_classes(pts, origin);
  const auto& inner = classes[0];
  double next = classes.size() > 1 ? classes[1].radius : outer_radius;

  std::size_t mover;
  double radius;
  if (inner.radius == 0.0) {
    mover = members[inner.members[0]];
    radius = next;
  } else if (inner.members.size() > 1) {
    std::vector<std::size_t> tied;
    for (std::size_t k : inner.members) tied.push_back(members[k]);
    mover = ctx.min_view(tied);
    radius = inner.radius;
  } else {
    mover = members[inner.members[0]];
    Point x = ctx.pos[mover];
    if (first.distance(x) > ctx.margin && second.distance(x) > ctx.margin) return std::nullopt;
    radius = next;
  }

  Point x = ctx.pos[mover];
  Point probe = x;
  if (first.distance(x) <= ctx.margin || second.distance(x) <= ctx.margin) {
    Point base = near(x, origin) ? first.direction() * (radius / 2.0) : x - origin;
    probe = origin + rotate(base, ctx.sigma * kPi / 4.0);
  }
  Region z;
  inside_by(z, {origin, radius}, ctx.margin);
  outside_by(z, {origin, 0.0}, ctx.margin);
  avoid_line(z, first, probe, ctx.margin);
  avoid_line(z, second, probe, ctx.margin);
  z.append(extra);
  Point hint = origin + unit(probe - origin) * (radius / 2.0);
  Frame frame = ctx.frame(origin, first.direction());
  auto obstacles = ctx.others(mover);
  Point y = find_destination(ctx.model, x, z, extra, obstacles, frame, hint, ctx.sigma);
  return move(label, mover, y, y);
}

}  // namespace detail

Plan plan(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model) {
  if (positions.size() != pattern.size())
    throw Error(ErrorCode::kInvalidInput, "robot count differs from pattern size");
  PredicateSet p = predicates(positions, pattern);
  if (p.u) throw Error(ErrorCode::kUnbreakableSymmetry, "configuration has an unbreakable symmetry");
  if (p.b) return phase3(positions, pattern, model);
  if (p.a && p.c) return phase2(positions, pattern, model);
  if (!p.a) return subphase_1_1(positions, model);
  if (!p.s) return subphase_1_2(positions, model);
  return subphase_1_3(positions, model);
}

Decision compute(const Snapshot& snapshot, const Pattern& pattern, const MovementModel& model) {
  Plan p = plan(snapshot.positions, pattern, model);
  Decision d;
  d.phase_label = p.label;
  if (p.mover && *p.mover == snapshot.self) {
    d.move_to = p.intended;
    d.goal = p.goal;
  }
  return d;
}

Decision fcom_compute(const Snapshot& snapshot, const Pattern& pattern, const MovementModel& model) {
  for (std::size_t i = 0; i < snapshot.lights.size(); ++i)
    if (i != snapshot.self && snapshot.lights[i] == Light::kBusy) return Decision{{}, {}, "wait", {}};
  Decision d = compute(snapshot, pattern, model);
  d.light = d.move_to ? Light::kBusy : Light::kIdle;
  return d;
}

}  // namespace apf
