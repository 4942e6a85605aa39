#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "protocol_detail.hpp"

namespace apf {

using namespace detail;

namespace {

TargetEmbedding two_point_embedding(const Context& ctx, const Pattern& pattern, const BoundingStructure& bs) {
  Point c = ctx.mec.center;
  Point p0 = ctx.pos[ctx.boundary[0]], p1 = ctx.pos[ctx.boundary[1]];
  auto classes = concentric_classes(ctx.pos, c);
  std::size_t leader = classes[0].members[0];
  Point rel = ctx.pos[leader] - c;

  Point u = unit(p1 - p0);
  if (dot(rel, u) < 0.0) u = -u;
  Point v = perp(u);
  int hand = 1;
  if (dot(rel, v) < 0.0) hand = -1;

  TargetEmbedding e;
  e.frame = Frame{c, u, hand};
  e.diameter = dist(p0, p1);
  e.leader_robot = leader;

  // Pattern with its bounding pair on the X axis, centered at c(F).
  const auto& f = pattern.points;
  Point fa = f[bs.indices[0]], fb = f[bs.indices[1]];
  Point fc = midpoint(fa, fb), w = unit(fb - fa);
  double pattern_d = dist(fa, fb);
  std::vector<Point> local;
  for (Point p : f) local.push_back({dot(p - fc, w), cross(w, p - fc)});

  auto fclasses = concentric_classes(local, Point{});
  const auto& inner = fclasses[0];
  double tol = kTol * std::max(1.0, pattern_d);
  auto in_bs = [&](std::size_t k) { return k == bs.indices[0] || k == bs.indices[1]; };
  const Point flips[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  Point flip{1, 1};
  std::optional<std::size_t> first;
  for (Point s : flips) {
    for (std::size_t k : inner.members) {
      if (in_bs(k)) continue;
      if (s.x * local[k].x >= -tol && s.y * local[k].y >= -tol && (!first || k < *first)) first = k;
    }
    if (first) {
      flip = s;
      break;
    }
  }
  if (!first) throw Error(ErrorCode::kInvalidInput, "pattern has no point besides its bounding pair");
  e.leader = *first;

  double k = e.diameter / pattern_d;
  for (Point p : local) e.targets.push_back(e.frame.to_world(Point{flip.x * p.x, flip.y * p.y} * k));
  e.boundary = {bs.indices[0], bs.indices[1]};
  for (std::size_t b : e.boundary)
    e.holder.push_back(dist(e.targets[b], p0) < dist(e.targets[b], p1) ? ctx.boundary[0] : ctx.boundary[1]);

  double eps_d = pattern.epsilon * e.diameter;
  if (inner.radius == 0.0) e.leader_circle = {c, eps_d};
  else if (fclasses.size() == 1) e.leader_circle = {c, (1.0 - pattern.epsilon) * e.diameter / 2.0};
  else e.leader_circle = {c, inner.radius * k};
  return e;
}

std::optional<TargetEmbedding> three_point_embedding(const Context& ctx, const Pattern& pattern,
                                                     const BoundingStructure& bs) {
  auto roles = triangle_roles(ctx.pos, ctx.boundary);
  if (!roles) return std::nullopt;
  for (auto& e : triangle_embeddings(ctx.pos, *roles, pattern, bs)) {
    if (!embedding_satisfied(ctx.pos, *roles, e, pattern.epsilon)) continue;
    Point a = ctx.pos[roles->r1], b = ctx.pos[roles->r2], t = ctx.pos[roles->r3];
    Point mid = midpoint(a, b), along = unit(b - a);
    TargetEmbedding out;
    out.frame = Frame{mid, along, cross(along, t - mid) >= 0.0 ? 1 : -1};
    out.targets = e.points;
    out.boundary = {e.anchor_a, e.anchor_b, e.third};
    out.holder = {roles->r1, roles->r2, roles->r3};
    out.diameter = e.diameter;
    return out;
  }
  return std::nullopt;
}

std::optional<TargetEmbedding> embed(const Context& ctx, const Pattern& pattern, const BoundingStructure& bs) {
  if (!predicates(ctx.pos, pattern, bs).b) return std::nullopt;
  if (bs.indices.size() == 2) return two_point_embedding(ctx, pattern, bs);
  return three_point_embedding(ctx, pattern, bs);
}

// Who realizes what.
struct Ledger {
  std::vector<std::optional<std::size_t>> realizer;  // per target
  bool leader_done = false;
  bool complete = false;
};

class Layout {
 public:
  Layout(const Context& ctx, const Pattern& pattern, TargetEmbedding e)
      : ctx_(ctx), e_(std::move(e)), reach_(pattern.epsilon * e_.diameter) {
    fixed_.assign(e_.targets.size(), false);
    for (std::size_t b : e_.boundary) fixed_[b] = true;
  }

  const TargetEmbedding& emb() const { return e_; }
  double reach() const { return reach_; }
  bool fixed(std::size_t k) const { return fixed_[k]; }
  bool is_leader_target(std::size_t k) const { return e_.leader && *e_.leader == k; }

  // Closed realization zone of target k.
  bool in_zone(std::size_t k, Point p) const {
    Point t = e_.targets[k];
    if (dist(p, t) > reach_ + kTol) return false;
    if (dist(p, ctx_.mec.center) > ctx_.mec.radius + kTol) return false;
    if (!e_.leader) return true;
    double lc = dist(p, e_.leader_circle.center);
    if (is_leader_target(k)) return lc < e_.leader_circle.radius - kTol;
    return lc >= e_.leader_circle.radius - kTol;
  }

  // Open zone shrunk by the margin: where movers aim.
  Region zone(std::size_t k) const {
    Region r;
    inside_by(r, {e_.targets[k], reach_}, ctx_.margin);
    inside_by(r, ctx_.mec, ctx_.margin);
    if (e_.leader) outside_by(r, e_.leader_circle, ctx_.margin);
    return r;
  }

  std::optional<std::size_t> closest(Point t) const {
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::size_t who = 0;
    for (std::size_t i = 0; i < ctx_.n(); ++i) {
      double d = dist(ctx_.pos[i], t);
      if (d < best) {
        second = best;
        best = d;
        who = i;
      } else if (d < second) {
        second = d;
      }
    }
    if (second - best <= kTol) return std::nullopt;
    return who;
  }

  Ledger ledger() const {
    Ledger l;
    l.realizer.assign(e_.targets.size(), std::nullopt);
    bool all = true;
    for (std::size_t k = 0; k < e_.targets.size(); ++k) {
      if (fixed_[k]) {
        l.realizer[k] = e_.holder[std::find(e_.boundary.begin(), e_.boundary.end(), k) - e_.boundary.begin()];
        continue;
      }
      if (is_leader_target(k)) continue;
      auto r = closest(e_.targets[k]);
      if (r && (!e_.leader_robot || *r != *e_.leader_robot) && in_zone(k, ctx_.pos[*r])) l.realizer[k] = r;
      else all = false;
    }
    if (e_.leader) {
      std::size_t k = *e_.leader;
      auto r = closest(e_.targets[k]);
      l.leader_done = all && r && *r == *e_.leader_robot && in_zone(k, ctx_.pos[*r]);
      if (l.leader_done) l.realizer[k] = r;
      l.complete = l.leader_done;
    } else {
      l.complete = all;
    }
    return l;
  }

  std::pair<std::int64_t, std::int64_t> key(Point p) const {
    Point q = e_.frame.to_local(p);
    return {std::llround(q.x / ctx_.shape), std::llround(q.y / ctx_.shape)};
  }

 private:
  const Context& ctx_;
  TargetEmbedding e_;
  double reach_;
  std::vector<bool> fixed_;
};

struct Blocker {
  Point center;
  double radius;
  std::size_t owner;
  std::optional<std::size_t> target;  // nullopt for the leader's disk around c(T)
};

StepPlan approach(const Context& ctx, std::size_t mover, const Region& target, const Region& corridor,
                  std::vector<Obstacle> obstacles, Point hint, const Frame& frame) {
  MoveRequest req;
  req.from = ctx.pos[mover];
  req.target = target;
  req.corridor = corridor;
  req.hint = hint;
  req.frame = frame;
  req.obstacles = std::move(obstacles);
  req.orientation = ctx.sigma;
  return plan_move(ctx.model, req);
}

class Phase3 {
 public:
  Phase3(const Context& ctx, const Layout& layout) : ctx_(ctx), lay_(layout), e_(layout.emb()) {}

  Plan run() {
    Ledger led = lay_.ledger();
    const std::string prefix = e_.leader ? "3/case1" : "3/case2";
    if (led.complete) {
      Plan p = idle("terminal");
      p.terminal = true;
      return p;
    }
    if (e_.leader_robot) {
      quadrant_ = quadrant();
      std::size_t rl = *e_.leader_robot;
      if (dist(ctx_.pos[rl], e_.leader_circle.center) >= e_.leader_circle.radius - kTol)
        return leader_move(led, prefix + "/step1", false);
    }
    auto blockers = obstacles_of(led);

    // Unrealized targets and free robots.
    std::vector<std::size_t> open_targets, free_robots;
    std::vector<bool> busy(ctx_.n(), false);
    for (std::size_t k = 0; k < e_.targets.size(); ++k) {
      if (led.realizer[k]) busy[*led.realizer[k]] = true;
      else if (!lay_.is_leader_target(k)) open_targets.push_back(k);
    }
    if (e_.leader_robot) busy[*e_.leader_robot] = true;
    for (std::size_t i = 0; i < ctx_.n(); ++i)
      if (!busy[i]) free_robots.push_back(i);

    if (open_targets.empty()) return leader_move(led, prefix + "/step3", true);
    if (free_robots.empty()) throw Error(ErrorCode::kInvalidInput, "targets left but no free robot");

    auto [r, k] = traveler(free_robots, open_targets);
    return travel(r, k, led, blockers, prefix);
  }

 private:
  // Open positive quadrant of the global frame, kept off both axes.
  Region quadrant() const {
    Point c = e_.frame.origin;
    Point inside = e_.frame.to_world({1.0, 1.0});
    Region q;
    avoid_line(q, {c, c + e_.frame.x_axis}, inside, ctx_.margin);
    avoid_line(q, {c, c + e_.frame.y_axis()}, inside, ctx_.margin);
    return q;
  }

  std::vector<Blocker> obstacles_of(const Ledger& led) const {
    std::vector<Blocker> out;
    for (std::size_t k = 0; k < e_.targets.size(); ++k) {
      if (!led.realizer[k] || lay_.fixed(k) || lay_.is_leader_target(k)) continue;
      Point t = e_.targets[k];
      out.push_back({t, dist(t, ctx_.pos[*led.realizer[k]]), *led.realizer[k], k});
    }
    if (e_.leader_robot) {
      Point c = e_.frame.origin;
      out.push_back({c, dist(c, ctx_.pos[*e_.leader_robot]), *e_.leader_robot, std::nullopt});
    }
    return out;
  }

  std::vector<Obstacle> disks(const std::vector<Blocker>& blockers, std::size_t mover) const {
    std::vector<Obstacle> out;
    for (const auto& b : blockers)
      if (b.owner != mover) out.push_back({b.center, b.radius + ctx_.margin});
    for (std::size_t i = 0; i < ctx_.n(); ++i)
      if (i != mover) out.push_back({ctx_.pos[i], 0.0});
    return out;
  }

  std::pair<std::size_t, std::size_t> traveler(const std::vector<std::size_t>& robots,
                                               const std::vector<std::size_t>& targets) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r : robots)
      for (std::size_t k : targets) best = std::min(best, dist(ctx_.pos[r], e_.targets[k]));
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t r : robots) {
      for (std::size_t k : targets) {
        if (dist(ctx_.pos[r], e_.targets[k]) > best + ctx_.shape) continue;
        if (!pick) {
          pick = {r, k};
          continue;
        }
        auto kt = lay_.key(e_.targets[k]), pt = lay_.key(e_.targets[pick->second]);
        if (kt < pt || (kt == pt && lay_.key(ctx_.pos[r]) < lay_.key(ctx_.pos[pick->first]))) pick = {r, k};
      }
    }
    return *pick;
  }

  Plan travel(std::size_t r, std::size_t k, const Ledger& led, const std::vector<Blocker>& blockers,
              const std::string& prefix) {
    Point x = ctx_.pos[r], t = e_.targets[k];
    Region zone = lay_.zone(k);
    auto obstacles = disks(blockers, r);

    if (zone.contains(x)) {
      // Inside the zone but not the unique closest: close in on t.
      double rival = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < ctx_.n(); ++i)
        if (i != r) rival = std::min(rival, dist(ctx_.pos[i], t));
      Region target = zone;
      target.inside({t, 0.5 * std::min(dist(x, t), rival)});
      return move(prefix + "/step2", r, approach(ctx_, r, target, {}, obstacles, t, e_.frame));
    }

    Disk goal = inscribed_disk(zone, t, e_.frame);
    double slack = 1e-2 * lay_.reach();
    std::optional<Blocker> worst;
    bool on_line = false;
    for (const auto& b : blockers) {
      if (b.owner == r) continue;
      double s = segment_distance(b.center, x, goal.center);
      if (s >= b.radius + slack) continue;
      if (s <= 2.0 * slack) on_line = true;
      if (!worst || key_of(b) < key_of(*worst)) worst = b;
    }
    // A center on the segment cannot be cleared by contraction: detour first.
    if (on_line)
      return move(prefix + "/sidestep", r, approach(ctx_, r, zone, {}, obstacles, t, e_.frame));
    if (worst) return contract(*worst, x, goal.center, led, blockers, slack, prefix);
    return move(prefix + "/step2", r, approach(ctx_, r, zone, {}, obstacles, t, e_.frame));
  }

  std::pair<std::int64_t, std::int64_t> key_of(const Blocker& b) const { return lay_.key(b.center); }

  // A realizer whose disk crosses the traveler's segment shrinks it.
  Plan contract(const Blocker& b, Point x, Point goal, const Ledger& led, const std::vector<Blocker>& blockers,
                double slack, const std::string& prefix) {
    (void)led;
    double s = segment_distance(b.center, x, goal);
    double radius = 0.5 * (s - slack);
    Region target, corridor;
    target.inside({b.center, radius});
    corridor.inside({b.center, b.radius});
    if (b.target) {
      target.append(lay_.zone(*b.target));
    } else {
      target.append(quadrant_);
      corridor.append(quadrant_);
    }
    auto obstacles = disks(blockers, b.owner);
    return move(prefix + "/contract", b.owner, approach(ctx_, b.owner, target, corridor, obstacles, b.center, e_.frame));
  }

  // r_l enters encl(C_l) (step 1) or the disk around t_l (step 3).
  Plan leader_move(const Ledger& led, const std::string& label, bool final_step) {
    std::size_t rl = *e_.leader_robot;
    Point c = e_.frame.origin;
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ctx_.n(); ++i)
      if (i != rl) second = std::min(second, dist(ctx_.pos[i], c));
    Region corridor = quadrant_;
    corridor.inside({c, second});
    Region target = quadrant_;
    inside_by(target, {c, second}, ctx_.margin);
    inside_by(target, e_.leader_circle, ctx_.margin);
    if (final_step) {
      corridor.inside(e_.leader_circle);
      inside_by(target, {e_.targets[*e_.leader], lay_.reach()}, ctx_.margin);
    }
    std::vector<Blocker> blockers = obstacles_of(led);
    auto obstacles = disks(blockers, rl);
    Point hint = e_.targets[*e_.leader];
    return move(label, rl, approach(ctx_, rl, target, corridor, obstacles, hint, e_.frame));
  }

  const Context& ctx_;
  const Layout& lay_;
  const TargetEmbedding& e_;
  Region quadrant_;
};

}  // namespace

std::optional<TargetEmbedding> target_embedding(std::span<const Point> positions, const Pattern& pattern) {
  MovementModel model;
  Context ctx(positions, model);
  return embed(ctx, pattern, bounding_structure(pattern));
}

bool is_terminal(std::span<const Point> positions, const Pattern& pattern) {
  MovementModel model;
  Context ctx(positions, model);
  auto e = embed(ctx, pattern, bounding_structure(pattern));
  if (!e) return false;
  Layout layout(ctx, pattern, std::move(*e));
  return layout.ledger().complete;
}

Plan phase3(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model) {
  Context ctx(positions, model);
  auto e = embed(ctx, pattern, bounding_structure(pattern));
  if (!e) throw Error(ErrorCode::kInvalidInput, "bounding structure is not formed");
  Layout layout(ctx, pattern, std::move(*e));
  return Phase3(ctx, layout).run();
}

}  // namespace apf
