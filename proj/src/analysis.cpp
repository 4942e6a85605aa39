#include "apf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apf {

namespace {

// Tolerance for shape judgments (equal sides, collinearity) relative to the
// size of the configuration; matches the view quantization.
double shape_tol(double radius) { return kViewQuantum * std::max(1.0, radius); }

std::int64_t quantize(double v) { return std::llround(v / kViewQuantum); }

const std::int64_t kFullTurn = quantize(2.0 * kPi);

}  // namespace

void validate(const Configuration& config) {
  if (config.positions.empty()) throw Error(ErrorCode::kInvalidInput, "empty configuration");
  for (Point p : config.positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::kInvalidInput, "non-finite robot position");
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j)
      if (dist(config.positions[i], config.positions[j]) <= kTol)
        throw Error(ErrorCode::kInvalidInput, "robots " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " coincide");
  if (!config.lights.empty() && config.lights.size() != config.size())
    throw Error(ErrorCode::kInvalidInput, "lights do not match robot count");
}

double Pattern::diameter() const { return 2.0 * mec(points).radius; }

void validate(const Pattern& pattern) {
  if (pattern.size() < 2) throw Error(ErrorCode::kInvalidInput, "pattern needs at least two points");
  if (!(pattern.epsilon > 0.0 && pattern.epsilon < 1.0))
    throw Error(ErrorCode::kInvalidInput, "epsilon must lie in (0,1)");
  for (Point p : pattern.points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::kInvalidInput, "non-finite pattern point");
  double d = pattern.diameter();
  if (d <= kTol) throw Error(ErrorCode::kInvalidInput, "pattern has zero diameter");
  for (std::size_t i = 0; i < pattern.size(); ++i)
    for (std::size_t j = i + 1; j < pattern.size(); ++j)
      if (dist(pattern.points[i], pattern.points[j]) < 2.0 * pattern.epsilon * d - kTol)
        throw Error(ErrorCode::kInvalidInput, "epsilon-disks around pattern points " + std::to_string(i) +
                                                  " and " + std::to_string(j) + " overlap");
}

// ---------------------------------------------------------------------------
// Views

std::vector<RobotViews> views(std::span<const Point> positions) {
  const std::size_t n = positions.size();
  Circle c = mec(positions);
  double scale = c.radius > 0.0 ? c.radius : 1.0;

  std::vector<double> radius(n), angle(n);
  for (std::size_t k = 0; k < n; ++k) {
    radius[k] = dist(positions[k], c.center) / scale;
    angle[k] = radius[k] * scale <= kTol ? 0.0 : polar_angle(positions[k] - c.center);
  }

  auto element = [&](std::size_t k, double ref, int dir) {
    if (radius[k] * scale <= kTol) return ViewElement{0, 0};
    double a = dir > 0 ? angle[k] - ref : ref - angle[k];
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    std::int64_t qa = quantize(a);
    if (qa >= kFullTurn) qa = 0;
    return ViewElement{quantize(radius[k]), qa};
  };

  std::vector<RobotViews> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (radius[i] * scale <= kTol) {
      out[i].cw.assign(n + 1, ViewElement{});
      out[i].ccw = out[i].cw;
      continue;
    }
    for (int dir : {-1, +1}) {
      View v;
      v.reserve(n + 1);
      v.push_back(element(i, angle[i], dir));
      for (std::size_t k = 0; k < n; ++k) v.push_back(element(k, angle[i], dir));
      std::sort(v.begin() + 1, v.end());
      (dir < 0 ? out[i].cw : out[i].ccw) = std::move(v);
    }
  }
  return out;
}

const char* to_string(SymmetryType t) {
  switch (t) {
    case SymmetryType::kAsymmetric: return "Asymmetric";
    case SymmetryType::kReflection: return "Reflection";
    case SymmetryType::kRotation: return "Rotation";
    case SymmetryType::kBoth: return "Both";
  }
  return "Unknown";
}

SymmetryInfo symmetry(std::span<const Point> positions) {
  SymmetryInfo info;
  Circle c = mec(positions);
  info.center = c.center;
  auto vs = views(positions);
  const std::size_t n = positions.size();
  std::vector<bool> at_center(n);
  for (std::size_t i = 0; i < n; ++i) at_center[i] = dist(positions[i], c.center) <= kTol;

  bool reflection = false, rotation = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (at_center[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (at_center[j]) continue;
      if (i != j && vs[i].cw == vs[j].cw) rotation = true;
      if (vs[i].cw == vs[j].ccw) {
        reflection = true;
        Point ui = unit(positions[i] - c.center), uj = unit(positions[j] - c.center);
        Point axis = ui + uj;
        axis = norm(axis) > 1e-9 ? unit(axis) : perp(ui);
        bool dup = false;
        for (Point a : info.axes) dup = dup || std::abs(cross(a, axis)) <= 1e-7;
        if (!dup) info.axes.push_back(axis);
      }
    }
  }
  if (reflection && rotation) info.type = SymmetryType::kBoth;
  else if (reflection) info.type = SymmetryType::kReflection;
  else if (rotation) info.type = SymmetryType::kRotation;
  return info;
}

SymmetryType symmetry_type(std::span<const Point> positions) { return symmetry(positions).type; }

bool has_unbreakable_symmetry(std::span<const Point> positions) {
  SymmetryInfo info = symmetry(positions);
  double r = mec(positions).radius;
  bool center_robot = false;
  for (Point p : positions) center_robot = center_robot || dist(p, info.center) <= kTol;
  bool rotation = info.type == SymmetryType::kRotation || info.type == SymmetryType::kBoth;
  if (rotation && !center_robot) return true;
  for (Point axis : info.axes) {
    bool carried = false;
    for (Point p : positions)
      carried = carried || std::abs(cross(axis, p - info.center)) <= 10.0 * shape_tol(r);
    if (!carried) return true;
  }
  return false;
}

std::vector<std::size_t> boundary_robots(std::span<const Point> positions) {
  Circle c = mec(positions);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (on_circle(c, positions[i])) out.push_back(i);
  return out;
}

bool all_boundary_critical(std::span<const Point> positions) {
  for (std::size_t i : boundary_robots(positions))
    if (!is_critical(positions, i)) return false;
  return true;
}

bool is_symmetry_safe(std::span<const Point> positions) {
  if (positions.size() < 3) return false;
  Circle c = mec(positions);
  double tol = shape_tol(c.radius);
  auto boundary = boundary_robots(positions);
  auto classes = concentric_classes(positions, c.center);
  bool all_critical = true;
  for (std::size_t i : boundary) all_critical = all_critical && is_critical(positions, i);

  if (!all_critical) {
    if (classes[0].radius == 0.0) return false;
    if (classes.size() < 2 || classes[0].members.size() != 1 || classes[1].members.size() != 1) return false;
    Point a = positions[classes[0].members[0]] - c.center;
    Point b = positions[classes[1].members[0]] - c.center;
    return std::abs(cross(unit(a), b)) > tol;
  }
  if (boundary.size() == 3) {
    double s0 = dist(positions[boundary[0]], positions[boundary[1]]);
    double s1 = dist(positions[boundary[1]], positions[boundary[2]]);
    double s2 = dist(positions[boundary[2]], positions[boundary[0]]);
    return std::abs(s0 - s1) > tol && std::abs(s1 - s2) > tol && std::abs(s2 - s0) > tol;
  }
  if (boundary.size() == 2) {
    if (classes[0].members.size() != 1) return false;
    Point r = positions[classes[0].members[0]];
    Line chord{positions[boundary[0]], positions[boundary[1]]};
    Line across{c.center, c.center + chord.normal()};
    return chord.distance(r) > tol && across.distance(r) > tol;
  }
  return false;
}

std::size_t min_view_robot(std::span<const Point> positions, std::span<const std::size_t> candidates) {
  return min_view_robot(positions, candidates, views(positions));
}

std::size_t min_view_robot(std::span<const Point> positions, std::span<const std::size_t> candidates,
                           const std::vector<RobotViews>& vs) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidInput, "no candidates");
  for (std::size_t i : candidates)
    if (i >= positions.size()) throw Error(ErrorCode::kInvalidInput, "candidate out of range");
  std::size_t best = candidates[0];
  bool tie = false;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    std::size_t i = candidates[k];
    if (vs[i].min() < vs[best].min()) {
      best = i;
      tie = false;
    } else if (vs[i].min() == vs[best].min()) {
      tie = true;
    }
  }
  if (tie) throw Error(ErrorCode::kAmbiguousView, "candidates share the minimum view");
  return best;
}

// ---------------------------------------------------------------------------
// Bounding structure

BoundingStructure bounding_structure(const Pattern& pattern) {
  std::vector<Point> pts = pattern.points;
  std::vector<std::size_t> alive(pts.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  std::vector<std::size_t> result = boundary_robots(pattern.points);
  for (std::size_t f : std::vector<std::size_t>(result)) {
    std::vector<Point> current;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (alive[k] == f) pos = current.size();
      current.push_back(pattern.points[alive[k]]);
    }
    if (!is_critical(current, pos)) {
      alive.erase(std::find(alive.begin(), alive.end(), f));
      result.erase(std::find(result.begin(), result.end(), f));
    }
  }
  return {result};
}

// ---------------------------------------------------------------------------
// Embeddings

std::optional<TriangleRoles> triangle_roles(std::span<const Point> positions,
                                            std::span<const std::size_t> boundary) {
  if (boundary.size() != 3) return std::nullopt;
  double tol = shape_tol(mec(positions).radius);
  std::size_t best = 0;
  double len[3];
  for (int k = 0; k < 3; ++k) len[k] = dist(positions[boundary[k]], positions[boundary[(k + 1) % 3]]);
  for (int k = 1; k < 3; ++k)
    if (len[k] > len[best]) best = k;
  for (int k = 0; k < 3; ++k)
    if (k != static_cast<int>(best) && len[best] - len[k] <= tol) return std::nullopt;
  std::size_t a = boundary[best], b = boundary[(best + 1) % 3], third = boundary[(best + 2) % 3];
  double da = dist(positions[a], positions[third]), db = dist(positions[b], positions[third]);
  if (std::abs(da - db) <= tol) return std::nullopt;
  if (db < da) std::swap(a, b);
  return TriangleRoles{a, b, third};
}

std::vector<Embedding> triangle_embeddings(std::span<const Point> positions, const TriangleRoles& roles,
                                           const Pattern& pattern, const BoundingStructure& bs) {
  if (bs.indices.size() != 3) throw Error(ErrorCode::kInvalidInput, "bounding structure is not a triangle");
  const auto& f = pattern.points;
  std::size_t pairs[3][2] = {{bs.indices[0], bs.indices[1]},
                             {bs.indices[0], bs.indices[2]},
                             {bs.indices[1], bs.indices[2]}};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (dist(f[pairs[k][0]], f[pairs[k][1]]) > dist(f[pairs[best][0]], f[pairs[best][1]]) + kTol) best = k;
  std::size_t fa = pairs[best][0], fb = pairs[best][1];
  std::size_t fc = bs.indices[0] + bs.indices[1] + bs.indices[2] - fa - fb;

  std::vector<std::pair<std::size_t, std::size_t>> orders;
  double da = dist(f[fa], f[fc]), db = dist(f[fb], f[fc]);
  if (std::abs(da - db) <= kTol) {
    orders = {{fa, fb}, {fb, fa}};
  } else {
    orders = {da < db ? std::pair{fa, fb} : std::pair{fb, fa}};
  }

  Point r1 = positions[roles.r1], r2 = positions[roles.r2], r3 = positions[roles.r3];
  Point ux = unit(r2 - r1), uy = perp(ux);
  double side = dot(r3 - r1, uy) >= 0.0 ? 1.0 : -1.0;
  double pattern_d = pattern.diameter();

  std::vector<Embedding> out;
  for (auto [pa, pb] : orders) {
    Point fx = unit(f[pb] - f[pa]), fy = perp(fx);
    double k = dist(r1, r2) / dist(f[pa], f[pb]);
    double flip = dot(f[fc] - f[pa], fy) >= 0.0 ? side : -side;
    Embedding e;
    e.anchor_a = pa;
    e.anchor_b = pb;
    e.third = fc;
    e.diameter = k * pattern_d;
    for (Point p : f) {
      Point d = p - f[pa];
      e.points.push_back(r1 + ux * (k * dot(d, fx)) + uy * (k * flip * dot(d, fy)));
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool embedding_satisfied(std::span<const Point> positions, const TriangleRoles& roles, const Embedding& e,
                         double epsilon) {
  double reach = epsilon * e.diameter;
  if (dist(positions[roles.r3], e.points[e.third]) >= reach - kTol) return false;
  std::vector<Point> tri{positions[roles.r1], positions[roles.r2], positions[roles.r3]};
  Circle cc = circumcircle(tri);
  for (Point p : e.points)
    if (dist(p, cc.center) >= cc.radius + reach - kTol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Predicates

PredicateSet predicates(std::span<const Point> positions, const Pattern& pattern) {
  return predicates(positions, pattern, bounding_structure(pattern));
}

PredicateSet predicates(std::span<const Point> positions, const Pattern& pattern,
                        const BoundingStructure& bs) {
  PredicateSet p;
  p.a = symmetry_type(positions) == SymmetryType::kAsymmetric;
  p.u = has_unbreakable_symmetry(positions);
  p.c = all_boundary_critical(positions);
  p.s = is_symmetry_safe(positions);
  auto boundary = boundary_robots(positions);
  if (bs.indices.size() == 2) {
    p.b = boundary.size() == 2 && p.s;
  } else if (bs.indices.size() == 3 && boundary.size() == 3 && p.s) {
    if (auto roles = triangle_roles(positions, boundary)) {
      for (const auto& e : triangle_embeddings(positions, *roles, pattern, bs))
        if (embedding_satisfied(positions, *roles, e, pattern.epsilon)) p.b = true;
    }
  }
  return p;
}

Phase phase_of(const PredicateSet& p) {
  if (p.u) return Phase::kRejected;
  if (p.b) return Phase::kPhase3;
  if (p.a && p.c) return Phase::kPhase2;
  return Phase::kPhase1;
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::kRejected: return "rejected";
    case Phase::kPhase1: return "phase1";
    case Phase::kPhase2: return "phase2";
    case Phase::kPhase3: return "phase3";
  }
  return "unknown";
}

}  // namespace apf
