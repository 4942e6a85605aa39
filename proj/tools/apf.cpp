// apf: simulate pattern formation runs, verify recorded traces, plot them.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "apf/error.hpp"
#include "apf/io.hpp"
#include "apf/render.hpp"
#include "apf/sim.hpp"
#include "apf/verify.hpp"

namespace fs = std::filesystem;
using namespace apf;

namespace {

enum Exit { kOk = 0, kNotTerminated = 1, kInputError = 2, kUnbreakable = 3, kViolation = 4 };

int exit_for(const RunReport& r) {
  if (!r.violations.empty() || r.outcome == "violation") return kViolation;
  if (r.outcome == "unbreakable-symmetry") return kUnbreakable;
  if (r.terminated && r.witness) return kOk;
  return kNotTerminated;
}

struct SimulateArgs {
  std::string pattern, init, out = ".";
  std::string scheduler = "ssync", errors = "none", policy = "round-robin", schedule = "random";
  std::uint64_t seed = 1, max_rounds = 0, runs = 1;
  double lambda = 0.3, delta = 0.3;
  unsigned jobs = 1;
  std::uint64_t min_delay = 1, max_delay = 5;
};

int simulate(const SimulateArgs& a) {
  Pattern pattern;
  std::vector<Point> init;
  RunOptions base;
  try {
    pattern = parse_pattern(read_file(a.pattern));
    init = parse_configuration(read_file(a.init));
    if (init.size() != pattern.size()) throw Error(ErrorCode::kInvalidInput, "robot count differs from pattern size");
    base.model = {a.lambda, a.delta};
    validate(base.model);
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  static const std::map<std::string, SchedulerKind> kinds{
      {"fsync", SchedulerKind::kFsync}, {"ssync", SchedulerKind::kSsync}, {"async", SchedulerKind::kAsync}};
  static const std::map<std::string, ErrorKind> errors{
      {"none", ErrorKind::kNone}, {"uniform", ErrorKind::kUniform}, {"adversarial", ErrorKind::kAdversarial}};
  static const std::map<std::string, SsyncPolicy> policies{{"all", SsyncPolicy::kAll},
                                                           {"round-robin", SsyncPolicy::kRoundRobin},
                                                           {"adversarial-delay", SsyncPolicy::kAdversarialDelay}};
  base.scheduler.kind = kinds.at(a.scheduler);
  base.scheduler.policy = policies.at(a.policy);
  base.scheduler.schedule = a.schedule == "rush" ? AsyncSchedule::kRush : AsyncSchedule::kRandom;
  base.scheduler.min_delay = a.min_delay;
  base.scheduler.max_delay = std::max(a.min_delay, a.max_delay);
  base.errors.kind = errors.at(a.errors);
  base.max_steps = a.max_rounds ? a.max_rounds : (base.scheduler.kind == SchedulerKind::kAsync ? 1000000 : 100000);

  std::vector<int> codes(a.runs, kOk);
  std::atomic<std::uint64_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::uint64_t k; (k = next++) < a.runs;) {
      RunOptions o = base;
      o.seed = a.seed + k;
      fs::path dir = a.runs == 1 ? fs::path(a.out) : fs::path(a.out) / ("seed-" + std::to_string(o.seed));
      try {
        fs::create_directories(dir);
        RunResult r = run(init, pattern, o);
        std::ofstream trace(dir / "trace.jsonl", std::ios::binary);
        write_trace(trace, r.trace);
        write_file((dir / "report.json").string(), report_json(r.report, o));
        codes[k] = exit_for(r.report);
        std::lock_guard lock(log);
        std::cout << "seed " << o.seed << ": " << r.report.outcome << " after " << r.report.steps << " steps, "
                  << r.report.moves << " moves" << (r.report.witness ? ", epsilon-close" : "") << "\n";
        if (codes[k] == kUnbreakable) std::cerr << "unbreakable symmetry: the pattern cannot be formed\n";
      } catch (const std::exception& e) {
        std::lock_guard lock(log);
        std::cerr << "seed " << o.seed << ": " << e.what() << "\n";
        codes[k] = kInputError;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::max(1u, std::min<unsigned>(a.jobs, a.runs)); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return *std::max_element(codes.begin(), codes.end());
}

int verify(const std::string& trace_path, const std::string& pattern_path) {
  Trace trace;
  Pattern pattern;
  try {
    pattern = parse_pattern(read_file(pattern_path));
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kParse, "cannot read " + trace_path);
    trace = read_trace(in);
    if (trace.empty()) throw Error(ErrorCode::kParse, "empty trace");
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  Replay r;
  try {
    r = replay(trace, pattern);
  } catch (const Error& e) {
    std::cerr << "malformed trace: " << e.what() << "\n";
    return kInputError;
  }
  const TraceEvent& last = trace.back();
  bool consistent = last.positions.size() == r.final_positions.size();
  for (std::size_t i = 0; consistent && i < last.positions.size(); ++i)
    consistent = dist(last.positions[i], r.final_positions[i]) <= kTol;
  for (const auto& v : r.violations)
    std::cout << v.monitor << " at t=" << v.t << (v.robot ? " robot " + std::to_string(*v.robot) : "") << ": "
              << v.detail << "\n";
  if (!consistent) std::cout << "final positions differ from the replayed moves\n";
  if (!r.violations.empty() || !consistent) return kViolation;
  if (last.label == "unbreakable-symmetry") {
    std::cout << "run stopped on an unbreakable symmetry\n";
    return kUnbreakable;
  }
  auto w = epsilon_close(r.final_positions, pattern);
  std::cout << r.moves << " moves replayed, monitors clean, final configuration "
            << (w ? "is" : "is not") << " epsilon-close\n";
  return w ? kOk : kNotTerminated;
}

int render_cmd(const std::string& trace_path, const std::string& pattern_path, std::uint64_t every,
               const std::string& out) {
  Trace trace;
  Pattern pattern;
  try {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kParse, "cannot read " + trace_path);
    trace = read_trace(in);
    if (!pattern_path.empty()) pattern = parse_pattern(read_file(pattern_path));
    RenderOptions o;
    o.every = every;
    if (!pattern_path.empty()) o.pattern = &pattern;
    auto plots = render(trace, o);
    fs::create_directories(out);
    for (const auto& p : plots) {
      char name[48];
      std::snprintf(name, sizeof name, "plot-%08llu.svg", static_cast<unsigned long long>(p.t));
      write_file((fs::path(out) / name).string(), p.svg);
    }
    std::cout << plots.size() << " plot(s) written to " << out << "\n";
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate pattern formation with inaccurate movement: simulate, verify, render."};
  app.require_subcommand(1);

  SimulateArgs s;
  auto* sim = app.add_subcommand("simulate", "Run the protocol and write trace.jsonl and report.json");
  sim->add_option("--pattern", s.pattern, "Pattern JSON file")->required();
  sim->add_option("--init", s.init, "Initial configuration JSON file")->required();
  sim->add_option("--scheduler", s.scheduler)->check(CLI::IsMember({"fsync", "ssync", "async"}));
  sim->add_option("--errors", s.errors)->check(CLI::IsMember({"none", "uniform", "adversarial"}));
  sim->add_option("--ssync-policy", s.policy, "Robots activated per round")
      ->check(CLI::IsMember({"all", "round-robin", "adversarial-delay"}));
  sim->add_option("--async-schedule", s.schedule)->check(CLI::IsMember({"random", "rush"}));
  sim->add_option("--min-delay", s.min_delay, "Async delay bounds, in ticks");
  sim->add_option("--max-delay", s.max_delay);
  sim->add_option("--seed", s.seed);
  sim->add_option("--max-rounds", s.max_rounds, "Rounds, or ticks under async (default 1e5 / 1e6)");
  sim->add_option("--lambda", s.lambda)->check(CLI::PositiveNumber);
  sim->add_option("--delta", s.delta)->check(CLI::Range(0.0, 1.0));
  sim->add_option("--runs", s.runs, "Consecutive seeds to run; each gets its own subdirectory")
      ->check(CLI::PositiveNumber);
  sim->add_option("--jobs", s.jobs, "Worker threads for --runs")->check(CLI::PositiveNumber);
  sim->add_option("-o,--out", s.out, "Output directory");

  std::string trace_path, pattern_path, out = ".";
  std::uint64_t every = 0;
  auto* ver = app.add_subcommand("verify", "Replay the monitors over a trace and check the final configuration");
  ver->add_option("--trace", trace_path)->required();
  ver->add_option("--pattern", pattern_path)->required();

  auto* ren = app.add_subcommand("render", "Write SVG plots of a trace");
  ren->add_option("--trace", trace_path)->required();
  ren->add_option("--pattern", pattern_path, "Draw target disks for this pattern");
  ren->add_option("--every", every, "One plot every N steps");
  ren->add_option("-o,--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  if (*sim) return simulate(s);
  if (*ver) return verify(trace_path, pattern_path);
  return render_cmd(trace_path, pattern_path, every, out);
}
