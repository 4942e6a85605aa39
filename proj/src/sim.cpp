#include "apf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "apf/error.hpp"
#include "apf/protocol.hpp"

namespace apf {

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::kFsync: return "fsync";
    case SchedulerKind::kSsync: return "ssync";
    case SchedulerKind::kAsync: return "async";
  }
  return "?";
}

const char* to_string(Light l) {
  switch (l) {
    case Light::kOff: return "off";
    case Light::kBusy: return "busy";
    case Light::kIdle: return "idle";
  }
  return "?";
}

// ---------------------------------------------------------------- monitors

Monitor::Monitor(const std::vector<Point>& initial, const Pattern& pattern, const MovementModel& model)
    : pos_(initial), pattern_(pattern), model_(model) {
  formed_ = predicates(pos_, pattern_).b;
}

void Monitor::flag(const char* monitor, std::uint64_t t, std::optional<std::size_t> robot, std::string detail) {
  violations_.push_back({monitor, t, robot, std::move(detail)});
}

void Monitor::on_round(std::uint64_t t, std::size_t movers) {
  if (movers > 1) flag("m1", t, std::nullopt, std::to_string(movers) + " robots decided to move");
}

void Monitor::on_move_start(std::uint64_t t, std::size_t robot) {
  in_flight_.push_back(robot);
  if (in_flight_.size() > 1) flag("m1", t, robot, "moves overlap");
}

void Monitor::on_move_end(std::uint64_t, std::size_t robot) {
  auto it = std::find(in_flight_.begin(), in_flight_.end(), robot);
  if (it != in_flight_.end()) in_flight_.erase(it);
}

void Monitor::on_move(std::uint64_t t, std::size_t robot, Point from, Point intended, Point realized,
                      const std::string& label) {
  double radius = error_d(model_, dist(from, intended));
  if (dist(realized, intended) > radius + kTol) flag("m3", t, robot, "realized point outside the reachable disk");
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (i == robot) continue;
    if (segment_distance(pos_[i], from, realized) <= kTol) flag("m2", t, robot, "path touches robot " + std::to_string(i));
  }
  pos_[robot] = realized;

  PredicateSet p = predicates(pos_, pattern_);
  if (formed_ && !p.b) flag("m4", t, robot, "bounding structure lost");
  formed_ = formed_ || p.b;
  if (p.b) return;
  if (p.u) flag("m5", t, robot, "move left an unbreakable symmetry");

  bool scalene_step = label == "1.1/case3" || label.ends_with("/scalene");
  if (scalene_step) {
    auto boundary = boundary_robots(pos_);
    if (boundary.size() != 3 || !triangle_roles(pos_, boundary))
      flag("m5", t, robot, "boundary is not a scalene triangle after " + label);
  }
  if (label == "2/case3") {
    auto boundary = boundary_robots(pos_);
    if (std::find(boundary.begin(), boundary.end(), robot) == boundary.end()) {
      Point c = mec(pos_).center;
      double mine = dist(pos_[robot], c);
      for (std::size_t i = 0; i < pos_.size(); ++i) {
        if (i == robot || std::find(boundary.begin(), boundary.end(), i) != boundary.end()) continue;
        if (dist(pos_[i], c) > mine + kViewQuantum * std::max(1.0, mec(pos_).radius))
          flag("m5", t, robot, "transformer is no longer the farthest interior robot");
      }
    }
  }
}

// ----------------------------------------------------------------- engines

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

// A robot's private coordinate system for one activation: any rotation,
// reflection and translation, unit length shared.
Frame random_frame(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), shift(-scale, scale);
  std::bernoulli_distribution flip(0.5);
  double a = angle(rng);
  Point origin{shift(rng), shift(rng)};
  return Frame{origin, {std::cos(a), std::sin(a)}, flip(rng) ? -1 : 1};
}

struct Observation {
  Frame frame;
  Snapshot snapshot;
};

Observation look(const std::vector<Point>& world, const std::vector<Light>& lights, std::size_t self,
                 std::mt19937_64& rng) {
  double scale = 1.0;
  for (Point p : world) scale = std::max(scale, norm(p));
  Observation o;
  o.frame = random_frame(rng, scale);
  for (Point p : world) o.snapshot.positions.push_back(o.frame.to_local(p));
  o.snapshot.self = self;
  o.snapshot.lights = lights;
  return o;
}

std::optional<Point> nearest_other(const std::vector<Point>& pos, std::size_t self) {
  std::optional<Point> best;
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (i != self && (!best || dist(pos[i], pos[self]) < dist(*best, pos[self]))) best = pos[i];
  return best;
}

class Engine {
 public:
  Engine(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& o)
      : pattern_(pattern), opt_(o), monitor_(initial, pattern, o.model),
        errors_(stream(o.seed, 1)), schedule_(stream(o.seed, 2)),
        frames_(stream(o.frame_seed.value_or(o.seed), 3)) {
    result_.report.scheduler = to_string(o.scheduler.kind);
  }

  // Common prologue; false when the run is already decided.
  bool start(const std::vector<Point>& initial) {
    TraceEvent e{.t = 0, .kind = "init"};
    e.positions = initial;
    e.label = to_string(opt_.scheduler.kind);
    e.model = opt_.model;
    record(std::move(e));
    if (predicates(initial, pattern_).u) {
      result_.report.outcome = "unbreakable-symmetry";
      finish(0);
      return false;
    }
    if (is_terminal(initial, pattern_)) {
      terminate(0);
      return false;
    }
    return true;
  }

  const std::vector<Point>& pos() const { return monitor_.positions(); }

  void record(TraceEvent e) {
    if (opt_.record_trace) result_.trace.push_back(std::move(e));
  }

  // Applies a realized move; true when the run must stop.
  bool apply(std::uint64_t t, std::size_t robot, Point intended, std::optional<Point> goal, const std::string& label) {
    Point from = pos()[robot];
    Point realized = sample_error(opt_.model, opt_.errors, from, intended, errors_, goal, nearest_other(pos(), robot));
    monitor_.on_move(t, robot, from, intended, realized, label);
    ++result_.report.moves;
    TraceEvent e{.t = t, .robot = robot, .kind = "move_end"};
    e.from = from;
    e.intended = intended;
    e.realized = realized;
    e.label = label;
    record(std::move(e));
    return check_violations(t);
  }

  bool check_violations(std::uint64_t t) {
    if (monitor_.violations().size() == reported_) return false;
    for (; reported_ < monitor_.violations().size(); ++reported_) {
      const auto& v = monitor_.violations()[reported_];
      TraceEvent e{.t = v.t, .robot = v.robot, .kind = "monitor_violation"};
      e.label = v.monitor;
      e.detail = v.detail;
      record(std::move(e));
    }
    result_.report.outcome = "violation";
    finish(t);
    return true;
  }

  // Runs compute and converts protocol failures into a stopped run.
  std::optional<Decision> decide(const Observation& o, bool lights, std::uint64_t t) {
    try {
      return lights ? fcom_compute(o.snapshot, pattern_, opt_.model) : compute(o.snapshot, pattern_, opt_.model);
    } catch (const Error& err) {
      result_.report.outcome = err.code() == ErrorCode::kUnbreakableSymmetry ? "unbreakable-symmetry" : "protocol-error";
      TraceEvent e{.t = t, .robot = o.snapshot.self, .kind = "decide"};
      e.detail = err.what();
      record(std::move(e));
      finish(t);
      return std::nullopt;
    }
  }

  void terminate(std::uint64_t t) {
    result_.report.outcome = "terminated";
    result_.report.terminated = true;
    finish(t);
  }

  void finish(std::uint64_t t) {
    result_.report.steps = t;
    result_.report.final_positions = pos();
    result_.report.violations = monitor_.violations();
    if (result_.report.terminated) result_.report.witness = epsilon_close(pos(), pattern_);
    TraceEvent e{.t = t, .kind = "terminated"};
    e.positions = pos();
    e.label = result_.report.outcome;
    record(std::move(e));
  }

  void note_movers(std::size_t k) { result_.report.max_movers = std::max(result_.report.max_movers, k); }

  const Pattern& pattern_;
  const RunOptions& opt_;
  Monitor monitor_;
  std::mt19937_64 errors_, schedule_, frames_;
  RunResult result_;
  std::size_t reported_ = 0;
};

std::vector<std::size_t> activation(const Engine& eng, std::uint64_t round, std::vector<std::uint64_t>& last) {
  const Scheduler& s = eng.opt_.scheduler;
  std::size_t n = eng.pos().size();
  std::vector<std::size_t> active;
  if (s.kind == SchedulerKind::kFsync || s.policy == SsyncPolicy::kAll) {
    for (std::size_t i = 0; i < n; ++i) active.push_back(i);
  } else if (s.policy == SsyncPolicy::kRoundRobin) {
    std::size_t k = std::clamp<std::size_t>(s.subset, 1, n);
    for (std::size_t j = 0; j < k; ++j) active.push_back(((round - 1) * k + j) % n);
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
  } else {
    // Hold back whoever the protocol wants to move until the bound forces it.
    std::optional<std::size_t> wanted;
    try {
      wanted = plan(eng.pos(), eng.pattern_, eng.opt_.model).mover;
    } catch (const Error&) {
    }
    std::bernoulli_distribution coin(0.5);
    auto& rng = const_cast<Engine&>(eng).schedule_;
    std::uint64_t bound = std::max<std::uint64_t>(1, s.delay_k);
    for (std::size_t i = 0; i < n; ++i) {
      bool forced = round - last[i] >= bound;
      bool pick = coin(rng);
      if (forced || (pick && (!wanted || *wanted != i))) active.push_back(i);
    }
  }
  for (std::size_t i : active) last[i] = round;
  return active;
}

}  // namespace

RunResult run_ssync(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options) {
  Engine eng(initial, pattern, options);
  if (!eng.start(initial)) return std::move(eng.result_);
  std::vector<std::uint64_t> last(initial.size(), 0);

  for (std::uint64_t round = 1; round <= options.max_steps; ++round) {
    auto active = activation(eng, round, last);
    struct Move {
      std::size_t robot;
      Point intended;
      std::optional<Point> goal;
      std::string label;
    };
    std::vector<Move> moves;
    for (std::size_t i : active) {
      Observation o = look(eng.pos(), {}, i, eng.frames_);
      eng.record({.t = round, .robot = i, .kind = "look"});
      auto d = eng.decide(o, false, round);
      if (!d) return std::move(eng.result_);
      TraceEvent e{.t = round, .robot = i, .kind = "decide"};
      e.label = d->phase_label;
      if (d->move_to) {
        e.intended = o.frame.to_world(*d->move_to);
        std::optional<Point> goal;
        if (d->goal) goal = o.frame.to_world(*d->goal);
        moves.push_back({i, *e.intended, goal, d->phase_label});
      }
      eng.record(std::move(e));
    }
    eng.monitor_.on_round(round, moves.size());
    eng.note_movers(moves.size());
    for (const auto& m : moves) {
      TraceEvent s{.t = round, .robot = m.robot, .kind = "move_start"};
      s.from = eng.pos()[m.robot];
      s.intended = m.intended;
      eng.record(std::move(s));
    }
    for (const auto& m : moves)
      if (eng.apply(round, m.robot, m.intended, m.goal, m.label)) return std::move(eng.result_);
    if (eng.check_violations(round)) return std::move(eng.result_);
    if (!moves.empty() && is_terminal(eng.pos(), pattern)) {
      eng.terminate(round);
      return std::move(eng.result_);
    }
  }
  eng.result_.report.outcome = "limit";
  eng.finish(options.max_steps);
  return std::move(eng.result_);
}

RunResult run_async(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options) {
  Engine eng(initial, pattern, options);
  if (!eng.start(initial)) return std::move(eng.result_);
  const Scheduler& s = options.scheduler;
  const std::size_t n = initial.size();
  const bool rush = s.schedule == AsyncSchedule::kRush;

  enum Stage { kMoveEnd = 0, kComputeEnd = 1, kLook = 2 };
  struct Event {
    std::uint64_t t;
    int stage;
    std::uint64_t seq;
    std::size_t robot;
    std::uint64_t version;
    bool operator>(const Event& o) const {
      return std::tie(t, stage, seq) > std::tie(o.t, o.stage, o.seq);
    }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t seq = 0;
  std::vector<std::uint64_t> version(n, 0);
  std::vector<bool> waiting(n, false);
  std::vector<Light> lights(n, Light::kIdle);
  std::vector<Observation> seen(n);
  struct Pending {
    Point intended;
    std::optional<Point> goal;
    std::string label;
  };
  std::vector<std::optional<Pending>> moving(n);
  std::uniform_int_distribution<std::uint64_t> delay(std::max<std::uint64_t>(1, s.min_delay),
                                                     std::max(s.min_delay, s.max_delay));
  std::size_t in_flight = 0;

  auto schedule = [&](std::uint64_t t, int stage, std::size_t robot) {
    waiting[robot] = stage == kLook;
    queue.push({t, stage, seq++, robot, ++version[robot]});
  };
  // Rush: every waiting robot looks right at a move boundary.
  auto pull_waiting = [&](std::uint64_t t) {
    if (!rush) return;
    for (std::size_t i = 0; i < n; ++i)
      if (waiting[i]) schedule(t, kLook, i);
  };

  for (std::size_t i = 0; i < n; ++i) schedule(rush ? 0 : delay(eng.schedule_) - 1, kLook, i);

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (ev.version != version[ev.robot]) continue;
    if (ev.t > options.max_steps) break;
    std::size_t r = ev.robot;

    if (ev.stage == kLook) {
      waiting[r] = false;
      seen[r] = look(eng.pos(), lights, r, eng.frames_);
      eng.record({.t = ev.t, .robot = r, .kind = "look"});
      schedule(ev.t + delay(eng.schedule_), kComputeEnd, r);
    } else if (ev.stage == kComputeEnd) {
      auto d = eng.decide(seen[r], true, ev.t);
      if (!d) return std::move(eng.result_);
      TraceEvent e{.t = ev.t, .robot = r, .kind = "decide"};
      e.label = d->phase_label;
      if (d->move_to) e.intended = seen[r].frame.to_world(*d->move_to);
      eng.record(e);
      if (d->light && *d->light != lights[r]) {
        lights[r] = *d->light;
        TraceEvent l{.t = ev.t, .robot = r, .kind = "light_set"};
        l.light = lights[r];
        eng.record(std::move(l));
      }
      if (d->move_to) {
        std::optional<Point> goal;
        if (d->goal) goal = seen[r].frame.to_world(*d->goal);
        moving[r] = Pending{*e.intended, goal, d->phase_label};
        ++in_flight;
        eng.note_movers(in_flight);
        eng.monitor_.on_move_start(ev.t, r);
        TraceEvent m{.t = ev.t, .robot = r, .kind = "move_start"};
        m.from = eng.pos()[r];
        m.intended = e.intended;
        eng.record(std::move(m));
        if (eng.check_violations(ev.t)) return std::move(eng.result_);
        schedule(ev.t + delay(eng.schedule_), kMoveEnd, r);
        pull_waiting(ev.t);
      } else {
        schedule(ev.t + delay(eng.schedule_), kLook, r);
      }
    } else {
      Pending p = *moving[r];
      moving[r].reset();
      --in_flight;
      eng.monitor_.on_move_end(ev.t, r);
      if (eng.apply(ev.t, r, p.intended, p.goal, p.label)) return std::move(eng.result_);
      if (in_flight == 0 && is_terminal(eng.pos(), pattern)) {
        eng.terminate(ev.t);
        return std::move(eng.result_);
      }
      schedule(ev.t + delay(eng.schedule_), kLook, r);
      pull_waiting(ev.t);
    }
  }
  eng.result_.report.outcome = "limit";
  eng.finish(options.max_steps);
  return std::move(eng.result_);
}

Replay replay(const Trace& trace, const Pattern& pattern) {
  if (trace.empty() || trace.front().kind != "init" || !trace.front().model)
    throw Error(ErrorCode::kInvalidInput, "trace does not start with an init event");
  const TraceEvent& init = trace.front();
  if (init.positions.size() != pattern.size())
    throw Error(ErrorCode::kInvalidInput, "robot count differs from pattern size");
  Monitor monitor(init.positions, pattern, *init.model);
  const bool rounds = init.label != "async";
  Replay out;
  std::optional<std::uint64_t> round;
  std::size_t movers = 0;
  auto close_round = [&] {
    if (round) monitor.on_round(*round, movers);
    movers = 0;
  };
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const TraceEvent& e = trace[k];
    if (e.t < out.steps) throw Error(ErrorCode::kInvalidInput, "event times go backwards");
    out.steps = e.t;
    if (rounds && (!round || e.t != *round)) {
      close_round();
      round = e.t;
    }
    auto robot = [&] {
      if (!e.robot || *e.robot >= init.positions.size())
        throw Error(ErrorCode::kInvalidInput, "event " + e.kind + " without a valid robot");
      return *e.robot;
    };
    if (e.kind == "decide") {
      robot();
      if (e.intended) ++movers;
    } else if (e.kind == "move_start") {
      if (!rounds) monitor.on_move_start(e.t, robot());
    } else if (e.kind == "move_end") {
      std::size_t r = robot();
      if (!e.from || !e.intended || !e.realized) throw Error(ErrorCode::kInvalidInput, "move_end without points");
      if (dist(*e.from, monitor.positions()[r]) > kTol)
        throw Error(ErrorCode::kInvalidInput, "move_end starts away from the robot");
      if (!rounds) monitor.on_move_end(e.t, r);
      monitor.on_move(e.t, r, *e.from, *e.intended, *e.realized, e.label);
      ++out.moves;
    }
  }
  close_round();
  out.final_positions = monitor.positions();
  out.violations = monitor.violations();
  return out;
}

RunResult run(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options) {
  if (initial.size() != pattern.size()) throw Error(ErrorCode::kInvalidInput, "robot count differs from pattern size");
  if (options.scheduler.kind == SchedulerKind::kAsync) return run_async(initial, pattern, options);
  return run_ssync(initial, pattern, options);
}

}  // namespace apf
