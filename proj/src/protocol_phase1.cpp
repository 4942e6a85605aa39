#include <algorithm>
#include <cmath>
#include <limits>

#include "protocol_detail.hpp"

namespace apf {

using namespace detail;

namespace {

// Bisector of the widest angular gap around `c` between robots and axis rays.
Point widest_gap(const Context& ctx, std::size_t skip, std::span<const Line> axes) {
  std::vector<double> angles;
  for (std::size_t i = 0; i < ctx.n(); ++i)
    if (i != skip && dist(ctx.pos[i], ctx.mec.center) > kTol) angles.push_back(polar_angle(ctx.pos[i] - ctx.mec.center));
  for (const auto& l : axes) {
    angles.push_back(polar_angle(l.direction()));
    angles.push_back(polar_angle(-l.direction()));
  }
  if (angles.empty()) return {1.0, 0.0};
  std::sort(angles.begin(), angles.end());
  double best_gap = -1.0, best_mid = 0.0;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    double a = angles[k];
    double b = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2.0 * kPi;
    if (b - a > best_gap + 1e-12) {
      best_gap = b - a;
      best_mid = 0.5 * (a + b);
    }
  }
  return {std::cos(best_mid), std::sin(best_mid)};
}

// A robot at c(R) steps off the center inside the next class, off every
// residual axis.
Plan leave_center(const Context& ctx, std::size_t mover, double next_radius, const std::string& label) {
  Point c = ctx.mec.center;
  auto axes = residual_axes(ctx.pos, mover);
  Point dir = widest_gap(ctx, mover, axes);
  Point nominal = c + dir * (next_radius / 2.0);
  Region z;
  inside_by(z, {c, next_radius}, ctx.margin);
  outside_by(z, {c, 0.0}, ctx.margin);
  for (const auto& l : axes) avoid_line(z, l, nominal, ctx.margin);
  Region cone;
  cone.inside({c, next_radius});
  auto obstacles = ctx.others(mover);
  Point y = find_destination(ctx.model, ctx.pos[mover], z, cone, obstacles, ctx.frame(c, dir), nominal, ctx.sigma);
  return move(label, mover, y, y);
}

std::optional<std::size_t> center_robot(const Context& ctx) {
  for (std::size_t i = 0; i < ctx.n(); ++i)
    if (dist(ctx.pos[i], ctx.mec.center) <= kTol) return i;
  return std::nullopt;
}

// Moves robot `mover` from its circle into the open annulus just inside it,
// the whole cone staying between `inner` and `outer`, off `lines`.
Plan into_annulus(const Context& ctx, std::size_t mover, double inner, double outer, std::span<const Line> lines,
                  const std::string& label) {
  Point c = ctx.mec.center;
  Point x = ctx.pos[mover];
  double mid_radius = 0.5 * (inner + outer);
  // Turn with sigma unless that crosses a line the robot is clear of.
  auto nominal_for = [&](int sense) { return c + rotate(unit(x - c), sense * kPi / 8.0) * mid_radius; };
  auto keeps_sides = [&](Point q) {
    for (const auto& l : lines)
      if (l.distance(x) > ctx.margin && l.signed_distance(x) * l.signed_distance(q) <= 0.0) return false;
    return true;
  };
  Point nominal = nominal_for(ctx.sigma);
  if (!keeps_sides(nominal) && keeps_sides(nominal_for(-ctx.sigma))) nominal = nominal_for(-ctx.sigma);
  Region z, cone;
  inside_by(z, {c, outer}, ctx.margin);
  outside_by(z, {c, inner}, ctx.margin);
  for (const auto& l : lines) avoid_line(z, l, nominal, ctx.margin);
  z.inside({x, 1.5 * dist(x, nominal)});
  cone.inside({c, outer}).outside({c, inner}, false);
  auto obstacles = ctx.others(mover);
  Point y = find_destination(ctx.model, x, z, cone, obstacles, ctx.frame(c, x - c), nominal, ctx.sigma);
  return move(label, mover, y, y);
}

double class_radius(const std::vector<ConcentricClass>& classes, std::size_t k) {
  return k < classes.size() ? classes[k].radius : 0.0;
}

std::vector<std::size_t> non_critical(const Context& ctx, std::span<const std::size_t> candidates) {
  std::vector<std::size_t> out;
  for (std::size_t i : candidates)
    if (!is_critical(ctx.pos, i)) out.push_back(i);
  return out;
}

// Case 4: the smaller-view robot of the antipodal pair on the axis leaves
// C(R) sideways.
Plan antipodal_step(const Context& ctx, std::size_t r, std::size_t other, const Line& axis) {
  Point x = ctx.pos[r], far = ctx.pos[other];
  Point e = axis.normal();
  double reach = std::numeric_limits<double>::infinity();
  std::vector<Point> rest;
  for (std::size_t k = 0; k < ctx.n(); ++k) {
    if (k == r || k == other) continue;
    Point q = ctx.pos[k];
    rest.push_back(q);
    double den = dot(e, far - q);
    if (std::abs(den) <= kTol) continue;
    reach = std::min(reach, std::abs(dot(q - x, far - q) / den));
  }
  if (!std::isfinite(reach)) reach = ctx.mec.radius;

  Point out = unit(x - ctx.mec.center);
  Point nominal = x + e * (ctx.sigma * reach / 2.0) + out * (reach / 2.0);
  Region z, cone;
  cone.outside(ctx.mec);
  outside_by(z, ctx.mec, ctx.margin);
  avoid_line(z, axis, nominal, ctx.margin);
  z.strip(x + e * (reach - ctx.margin), x - e * (reach - ctx.margin), axis.direction());
  inside_by(z, {x, reach}, 0.0);
  Frame frame = ctx.frame(x, out);
  if (!rest.empty()) {
    Point rc = mec(rest).center;
    const Circle ring[] = {{rc, dist(rc, far)}};
    choose_circle_sides(z, cone, ring, ctx.margin, nominal, frame);
  }
  auto obstacles = ctx.others(r);
  Point y = find_destination(ctx.model, x, z, cone, obstacles, frame, nominal, ctx.sigma);
  return move("1.1/case4", r, y, y);
}

}  // namespace

Plan subphase_1_1(std::span<const Point> positions, const MovementModel& model) {
  Context ctx(positions, model);
  Point c = ctx.mec.center;
  auto classes = concentric_classes(positions, c);

  if (auto centre = center_robot(ctx)) {
    return leave_center(ctx, *centre, class_radius(classes, 1), "1.1/case1");
  }

  SymmetryInfo info = symmetry(positions);
  if (info.axes.empty()) throw Error(ErrorCode::kInvalidInput, "symmetric configuration without an axis");
  Line axis{c, c + info.axes[0]};
  std::vector<std::size_t> on_axis;
  for (std::size_t i = 0; i < ctx.n(); ++i)
    if (axis.distance(positions[i]) <= 10.0 * ctx.shape) on_axis.push_back(i);
  if (on_axis.empty()) throw Error(ErrorCode::kUnbreakableSymmetry, "axis carries no robot");

  auto movable = non_critical(ctx, on_axis);
  if (!movable.empty()) {
    std::size_t r = ctx.min_view(movable);
    std::size_t k = 0;
    while (std::find(classes[k].members.begin(), classes[k].members.end(), r) == classes[k].members.end()) ++k;
    double outer = classes[k].radius;
    double inner = k > 0 ? classes[k - 1].radius : 0.0;
    auto axes = residual_axes(positions, r);
    return into_annulus(ctx, r, inner, outer, axes, "1.1/case2");
  }

  if (ctx.boundary.size() > 2) {
    std::size_t r = on_axis[0];
    Point u = positions[r] - c;
    // The pair seen at the widest angle from r; mirror partners tie.
    double best = 2.0;
    for (std::size_t i : ctx.boundary)
      if (i != r) best = std::min(best, dot(unit(u), unit(positions[i] - c)));
    std::vector<std::size_t> far;
    for (std::size_t i : ctx.boundary)
      if (i != r && dot(unit(u), unit(positions[i] - c)) <= best + 10.0 * ctx.shape) far.push_back(i);
    if (far.size() != 2) throw Error(ErrorCode::kInvalidInput, "no mirror pair opposite the axis robot");
    return break_triangle(ctx, r, far[0], far[1], "1.1/case3");
  }

  std::size_t a = on_axis[0], b = on_axis.size() > 1 ? on_axis[1] : on_axis[0];
  std::vector<std::size_t> pair{a, b};
  std::size_t r = ctx.min_view(pair);
  return antipodal_step(ctx, r, r == a ? b : a, axis);
}

Plan subphase_1_2(std::span<const Point> positions, const MovementModel& model) {
  Context ctx(positions, model);
  Point c = ctx.mec.center;
  auto classes = concentric_classes(positions, c);
  if (auto centre = center_robot(ctx)) return leave_center(ctx, *centre, class_radius(classes, 1), "1.2/center");

  if (classes[0].members.size() > 1) {
    auto movable = non_critical(ctx, classes[0].members);
    std::size_t r = ctx.min_view(movable);
    auto axes = residual_axes(positions, r);
    return into_annulus(ctx, r, 0.0, classes[0].radius, axes, "1.2/inner");
  }

  std::size_t inner = classes[0].members[0];
  auto movable = non_critical(ctx, classes[1].members);
  std::size_t r = ctx.min_view(movable);
  const Line ray[] = {{c, positions[inner]}};
  return into_annulus(ctx, r, classes[0].radius, classes[1].radius, ray, "1.2/second");
}

Plan subphase_1_3(std::span<const Point> positions, const MovementModel& model) {
  Context ctx(positions, model);
  auto classes = concentric_classes(positions, ctx.mec.center);
  auto movable = non_critical(ctx, ctx.boundary);
  std::size_t r = ctx.min_view(movable);
  return into_annulus(ctx, r, classes[1].radius, ctx.mec.radius, {}, "1.3");
}

}  // namespace apf
