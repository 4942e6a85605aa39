#pragma once

// Execution engines. Robots look through a fresh random isometry on every
// activation; the engine keeps world coordinates and checks every move.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apf/analysis.hpp"
#include "apf/motion.hpp"
#include "apf/verify.hpp"

namespace apf {

enum class SchedulerKind { kFsync, kSsync, kAsync };
enum class SsyncPolicy { kAll, kRoundRobin, kAdversarialDelay };
enum class AsyncSchedule { kRandom, kRush };

struct Scheduler {
  SchedulerKind kind = SchedulerKind::kSsync;
  SsyncPolicy policy = SsyncPolicy::kRoundRobin;
  std::size_t subset = 2;        // robots per round, round-robin policy
  std::size_t delay_k = 4;       // adversarial-delay bound, in rounds
  AsyncSchedule schedule = AsyncSchedule::kRandom;
  std::uint64_t min_delay = 1;   // ticks between consecutive cycle stages
  std::uint64_t max_delay = 5;
};

struct TraceEvent {
  std::uint64_t t = 0;
  std::optional<std::size_t> robot;
  std::string kind;  // init, look, decide, move_start, move_end, light_set, monitor_violation, terminated
  std::vector<Point> positions;
  std::optional<Point> from, intended, realized;
  std::string label;  // phase label; scheduler name on init; outcome on terminated
  std::optional<Light> light;
  std::string detail;
  std::optional<MovementModel> model;  // init only, so a trace can be replayed alone
};

using Trace = std::vector<TraceEvent>;

struct Violation {
  std::string monitor;  // m1 .. m5
  std::uint64_t t = 0;
  std::optional<std::size_t> robot;
  std::string detail;
};

struct RunOptions {
  MovementModel model;
  ErrorPolicy errors;
  Scheduler scheduler;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> frame_seed;  // defaults to a stream derived from seed
  std::uint64_t max_steps = 100000;         // rounds, or ticks under async
  bool record_trace = true;
};

struct RunReport {
  std::string outcome;  // terminated, limit, unbreakable-symmetry, violation
  bool terminated = false;
  std::uint64_t steps = 0;
  std::uint64_t moves = 0;
  std::size_t max_movers = 0;  // most non-null decisions in one round / moves in flight at one tick
  std::vector<Point> final_positions;
  std::optional<Witness> witness;
  std::vector<Violation> violations;
  std::string scheduler;
};

struct RunResult {
  RunReport report;
  Trace trace;
};

RunResult run_ssync(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options);
RunResult run_async(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options);
// Dispatches on options.scheduler.kind; fsync is ssync with every robot active.
RunResult run(const std::vector<Point>& initial, const Pattern& pattern, const RunOptions& options);

// Stateful checker shared by the engines and the offline trace verifier.
class Monitor {
 public:
  Monitor(const std::vector<Point>& initial, const Pattern& pattern, const MovementModel& model);

  // A move whose realized endpoint is now applied.
  void on_move(std::uint64_t t, std::size_t robot, Point from, Point intended, Point realized,
               const std::string& label);
  void on_move_start(std::uint64_t t, std::size_t robot);
  void on_move_end(std::uint64_t t, std::size_t robot);
  // Non-null decisions taken from one common configuration.
  void on_round(std::uint64_t t, std::size_t movers);

  const std::vector<Point>& positions() const { return pos_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  void flag(const char* monitor, std::uint64_t t, std::optional<std::size_t> robot, std::string detail);

  std::vector<Point> pos_;
  const Pattern& pattern_;
  MovementModel model_;
  std::vector<std::size_t> in_flight_;
  bool formed_ = false;
  std::vector<Violation> violations_;
};

// Offline replay of a recorded trace through a fresh Monitor. Throws
// InvalidInput when the trace lacks an init event or is inconsistent.
struct Replay {
  std::vector<Point> final_positions;
  std::vector<Violation> violations;
  std::uint64_t moves = 0;
  std::uint64_t steps = 0;
};
Replay replay(const Trace& trace, const Pattern& pattern);

const char* to_string(SchedulerKind k);
const char* to_string(Light l);

}  // namespace apf
