#include <algorithm>
#include <cmath>
#include <limits>

#include "protocol_detail.hpp"

namespace apf {

using namespace detail;

namespace {

// Oriented so that `side` lies on the left.
Line facing(Point a, Point b, Point side) {
  Line l{a, b};
  return l.signed_distance(side) >= 0.0 ? l : Line{b, a};
}

std::size_t isosceles_apex(const Context& ctx) {
  const auto& v = ctx.boundary;
  std::vector<std::size_t> apex;
  for (int k = 0; k < 3; ++k) {
    Point p = ctx.pos[v[k]], q = ctx.pos[v[(k + 1) % 3]], s = ctx.pos[v[(k + 2) % 3]];
    if (std::abs(dist(p, q) - dist(p, s)) <= ctx.shape) apex.push_back(v[k]);
  }
  if (apex.empty()) apex.assign(v.begin(), v.end());
  return apex.size() == 1 ? apex[0] : ctx.min_view(apex);
}

// Geometry shared by the two three-robot cases.
struct Triangle {
  Point a, b, t, mid, along, apex;
  double base = 0.0;
  Line chord;    // t on the left
  Line bisector; // t (and a) on the left
  Line near_edge;  // through a, parallel to the bisector, the bisector on the left
  Circle c1, c2, c3, c4;
  Frame frame;
};

Triangle triangle_of(const Context& ctx, const TriangleRoles& roles) {
  Triangle g;
  g.a = ctx.pos[roles.r1];
  g.b = ctx.pos[roles.r2];
  g.t = ctx.pos[roles.r3];
  g.base = dist(g.a, g.b);
  g.mid = midpoint(g.a, g.b);
  g.along = unit(g.b - g.a);
  g.chord = facing(g.a, g.b, g.t);
  g.bisector = facing(g.mid, g.mid + perp(g.along), g.a);
  g.near_edge = facing(g.a, g.a + perp(g.along), g.mid);
  g.c1 = {g.a, g.base};
  g.c2 = {g.b, g.base};
  g.c3 = {g.mid, g.base / 2.0};
  g.apex = g.mid + g.chord.normal() * (g.base * std::sqrt(3.0) / 2.0);
  const Point tri[] = {g.a, g.b, g.apex};
  g.c4 = circumcircle(tri);
  g.frame = Frame{g.mid, g.along, cross(g.along, g.t - g.mid) >= 0.0 ? 1 : -1};
  return g;
}

// H ∩ H' ∩ H'' ∩ encl(C1) ∩ encl(C2), shrunk by `margin`.
Region wedge(const Triangle& g, double margin) {
  Region r;
  avoid_line(r, g.chord, g.t, margin);
  avoid_line(r, g.bisector, g.a, margin);
  avoid_line(r, g.near_edge, g.mid, margin);
  inside_by(r, g.c1, margin);
  inside_by(r, g.c2, margin);
  return r;
}

Region red_zone(const Triangle& g, double margin) {
  Region r;
  inside_by(r, g.c3, margin);
  inside_by(r, g.c4, margin);
  return r;
}

StepPlan step_toward(const Context& ctx, std::size_t mover, const Region& target, const Region& corridor, Point hint,
                     const Frame& frame) {
  MoveRequest req;
  req.from = ctx.pos[mover];
  req.target = target;
  req.corridor = corridor;
  req.hint = hint;
  req.frame = frame;
  req.obstacles = ctx.others(mover);
  req.orientation = ctx.sigma;
  return plan_move(ctx.model, req);
}

// The interior robot outside U_red nearest its inscribed point goes in first.
std::optional<Plan> herd(const Context& ctx, const Triangle& g, const std::string& label) {
  Region red = red_zone(g, ctx.margin);
  std::vector<std::size_t> strays;
  for (std::size_t i : ctx.interior())
    if (!red.contains(ctx.pos[i])) strays.push_back(i);
  if (strays.empty()) return std::nullopt;
  Point p = inscribed_disk(red, midpoint(g.mid, g.apex), g.frame).center;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : strays) best = std::min(best, dist(ctx.pos[i], p));
  std::vector<std::size_t> nearest;
  for (std::size_t i : strays)
    if (dist(ctx.pos[i], p) <= best + ctx.shape) nearest.push_back(i);
  std::size_t mover = ctx.min_view(nearest);
  Region corridor;
  corridor.inside(ctx.mec);
  return move(label + "/herd", mover, step_toward(ctx, mover, red, corridor, p, g.frame));
}

Plan transform_case1(const Context& ctx, const Triangle& g, const TriangleRoles& roles, const Pattern& pattern,
                     const BoundingStructure& bs) {
  auto embeddings = triangle_embeddings(ctx.pos, roles, pattern, bs);
  const Embedding& e = embeddings[0];
  Point target_point = e.points[e.third];
  double reach = pattern.epsilon * e.diameter;

  Region corridor = wedge(g, 0.0);
  corridor.outside(g.c3);
  Region blue = wedge(g, ctx.margin);
  outside_by(blue, g.c3, ctx.margin);

  Region target = blue;
  target.inside({target_point, reach / 2.0});
  if (target.contains(g.t)) {
    target = blue;
    target.inside({target_point, dist(g.t, target_point) / 2.0});
  }
  return move("2/case1/transform", roles.r3, step_toward(ctx, roles.r3, target, corridor, target_point, g.frame));
}

Plan transform_case2(const Context& ctx, const Triangle& g, const TriangleRoles& roles) {
  auto inner = ctx.interior();
  Region corridor = wedge(g, 0.0);
  Region target;
  inside_by(target, g.c3, ctx.margin);
  if (inner.empty()) {
    avoid_line(target, g.chord, g.t, ctx.margin);
    avoid_line(target, g.bisector, g.a, ctx.margin);
  } else {
    const Line across{g.mid, g.mid + perp(g.along)};
    const Line base_line{g.a, g.b};
    Region red = red_zone(g, ctx.margin);
    if (auto p = make_innermost_safe(ctx, g.mid, base_line, across, inner, red, g.base / 2.0, "2/case2/safe"))
      return *p;
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t i : inner) closest = std::min(closest, dist(ctx.pos[i], g.mid));
    corridor.outside({g.mid, closest});
    outside_by(target, {g.mid, closest}, ctx.margin);
  }
  return move("2/case2/transform", roles.r3, step_toward(ctx, roles.r3, target, corridor, g.t, g.frame));
}

Plan triangle_case(const Context& ctx, const Pattern& pattern, const BoundingStructure& bs) {
  const std::string label = bs.indices.size() == 3 ? "2/case1" : "2/case2";
  auto roles = triangle_roles(ctx.pos, ctx.boundary);
  if (!roles) {
    std::size_t apex = isosceles_apex(ctx);
    std::vector<std::size_t> rest;
    for (std::size_t i : ctx.boundary)
      if (i != apex) rest.push_back(i);
    return break_triangle(ctx, apex, rest[0], rest[1], label + "/scalene");
  }
  Triangle g = triangle_of(ctx, *roles);
  if (auto p = herd(ctx, g, label)) return *p;
  if (bs.indices.size() == 3) return transform_case1(ctx, g, *roles, pattern, bs);
  return transform_case2(ctx, g, *roles);
}

// Two robots on C(R), three-point structure: the farthest interior robot
// steps out to make a scalene acute triangle.
Plan expand(const Context& ctx) {
  Point c = ctx.mec.center;
  auto inner = ctx.interior();
  double far = 0.0;
  for (std::size_t i : inner) far = std::max(far, dist(ctx.pos[i], c));
  std::vector<std::size_t> farthest;
  for (std::size_t i : inner)
    if (dist(ctx.pos[i], c) >= far - ctx.shape) farthest.push_back(i);
  std::size_t r = ctx.min_view(farthest);
  Point x = ctx.pos[r];

  std::size_t e0 = ctx.boundary[0], e1 = ctx.boundary[1];
  Point p0 = ctx.pos[e0], p1 = ctx.pos[e1];
  Point mid = midpoint(p0, p1);
  Line across{mid, mid + perp(p1 - p0)};
  std::size_t r1;
  if (across.distance(x) <= ctx.shape) {
    const std::size_t pair[] = {e0, e1};
    r1 = ctx.min_view(pair);
  } else {
    r1 = (across.signed_distance(x) > 0.0) == (across.signed_distance(p0) > 0.0) ? e0 : e1;
  }
  std::size_t r2 = r1 == e0 ? e1 : e0;
  Point a = ctx.pos[r1], b = ctx.pos[r2];
  Point along = unit(b - a);
  double base = dist(a, b);

  Line chord{a, b};
  double side = chord.signed_distance(x);
  if (std::abs(side) <= ctx.shape) side = ctx.sigma;
  if (side < 0.0) chord = Line{b, a};
  Point inward = chord.normal();

  Region target, corridor;
  corridor.left_of(chord).inside({a, base}).inside({b, base});
  corridor.strip(a, b, perp(along));
  avoid_line(target, chord, a + inward, ctx.margin);
  inside_by(target, {a, base}, ctx.margin);
  inside_by(target, {b, base}, ctx.margin);
  outside_by(target, ctx.mec, ctx.margin);
  target.strip(a + along * ctx.margin, mid - along * ctx.margin, perp(along));
  try {
    Circle widest = largest_enclosing_family_circle(ctx.pos[e0], ctx.pos[e1], ctx.pos,
                                                    Line{p0, p1}.signed_distance(a + inward) > 0.0 ? 1 : -1);
    corridor.inside(widest);
    inside_by(target, widest, ctx.margin);
  } catch (const Error&) {
    // Nothing bounds the family on the far side.
  }
  // Only outward motion: the transformer stays the farthest robot.
  corridor.outside({c, dist(x, c)}, false);

  Frame frame{mid, along, cross(along, inward) >= 0.0 ? 1 : -1};
  return move("2/case3", r, step_toward(ctx, r, target, corridor, x, frame));
}

}  // namespace

Plan phase2(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model) {
  Context ctx(positions, model);
  BoundingStructure bs = bounding_structure(pattern);
  if (ctx.boundary.size() == 3) return triangle_case(ctx, pattern, bs);
  if (ctx.boundary.size() != 2) throw Error(ErrorCode::kInvalidInput, "phase 2 needs two or three robots on C(R)");
  if (bs.indices.size() == 3) return expand(ctx);

  Point c = ctx.mec.center;
  Point p0 = ctx.pos[ctx.boundary[0]], p1 = ctx.pos[ctx.boundary[1]];
  Region extra;
  inside_by(extra, ctx.mec, ctx.margin);
  auto inner = ctx.interior();
  if (auto p = make_innermost_safe(ctx, c, Line{p0, p1}, Line{c, c + perp(p1 - p0)}, inner, extra, ctx.mec.radius,
                                   "2/case4"))
    return *p;
  return idle("2/case4/settled");
}

}  // namespace apf
