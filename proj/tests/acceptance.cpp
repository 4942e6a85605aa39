// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>

#include "apf/analysis.hpp"
#include "apf/geometry.hpp"
#include "apf/io.hpp"
#include "apf/motion.hpp"
#include "apf/sampling.hpp"
#include "apf/sim.hpp"
#include "apf/verify.hpp"

using namespace apf;
namespace fs = std::filesystem;

namespace {

bool report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("criterion %d %-44s %s  %s\n", id, what.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < count;) body(k);
    });
  for (auto& t : pool) t.join();
}

// ------------------------------------------------------------ end to end

struct Instance {
  Pattern pattern;
  std::vector<Point> init;
  RunOptions options;
};

constexpr std::size_t kSuite = 210;

Instance instance(std::size_t k, bool async) {
  std::mt19937_64 rng(9000 + k);
  Instance in;
  std::size_t n = 4 + k % 5;
  double eps = (k / 5) % 2 ? 0.1 : 0.05;
  in.pattern = random_pattern(n, eps, rng);
  in.init = random_configuration(n, rng);
  RunOptions& o = in.options;
  o.model = {0.3, 0.3};
  const ErrorKind kinds[] = {ErrorKind::kNone, ErrorKind::kUniform, ErrorKind::kAdversarial};
  o.errors.kind = kinds[(k / 10) % 3];
  o.seed = 100 + k;
  o.record_trace = async;  // the busy-light scan needs the trace
  if (async) {
    o.scheduler.kind = SchedulerKind::kAsync;
    o.max_steps = 1000000;
    o.scheduler.schedule = k % 2 ? AsyncSchedule::kRandom : AsyncSchedule::kRush;
    const std::pair<std::uint64_t, std::uint64_t> bounds[] = {{1, 5}, {1, 20}, {3, 8}};
    std::tie(o.scheduler.min_delay, o.scheduler.max_delay) = bounds[(k / 2) % 3];
  } else {
    o.scheduler.kind = SchedulerKind::kSsync;
    o.max_steps = 100000;
    const SsyncPolicy policies[] = {SsyncPolicy::kRoundRobin, SsyncPolicy::kAdversarialDelay, SsyncPolicy::kAll};
    o.scheduler.policy = policies[(k / 30) % 3];
  }
  return in;
}

// Robots moving with a busy light, at worst, over the whole trace.
std::size_t busy_movers(const Trace& trace, std::size_t n) {
  std::vector<Light> light(n, Light::kIdle);
  std::vector<bool> moving(n, false);
  std::size_t worst = 0;
  for (const auto& e : trace) {
    if (e.kind == "light_set") light[*e.robot] = *e.light;
    if (e.kind == "move_start") moving[*e.robot] = true;
    if (e.kind == "move_end") moving[*e.robot] = false;
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += moving[i] && light[i] == Light::kBusy;
    worst = std::max(worst, c);
  }
  return worst;
}

struct SuiteResult {
  std::size_t ok = 0, sequential = 0, busy_ok = 0;
  std::vector<std::string> failures;
};

SuiteResult run_suite(bool async) {
  SuiteResult s;
  std::vector<int> ok(kSuite), seq(kSuite), busy(kSuite);
  std::vector<std::string> why(kSuite);
  parallel_for(kSuite, [&](std::size_t k) {
    Instance in = instance(k, async);
    RunResult r = run(in.init, in.pattern, in.options);
    bool close = r.report.terminated && r.report.witness && epsilon_close(r.report.final_positions, in.pattern);
    ok[k] = close && r.report.violations.empty();
    seq[k] = r.report.max_movers <= 1;
    busy[k] = !async || busy_movers(r.trace, in.init.size()) <= 1;
    if (!ok[k]) why[k] = "#" + std::to_string(k) + ":" + r.report.outcome;
  });
  for (std::size_t k = 0; k < kSuite; ++k) {
    s.ok += ok[k];
    s.sequential += seq[k];
    s.busy_ok += busy[k];
    if (!why[k].empty() && s.failures.size() < 5) s.failures.push_back(why[k]);
  }
  return s;
}

std::string ratio(std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); }

std::string joined(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += " " + s;
  return out;
}

// ------------------------------------------------------------ approach

bool approach_suite(std::string& detail) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::size_t good = 0, total = 1000, most_steps = 0;
  for (std::size_t trial = 0; trial < total; ++trial) {
    MovementModel m{0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng)};
    Point x0{10 * u(rng), 10 * u(rng)};
    Point y = x0 + rotate({1.0 + 9.0 * u(rng), 0.0}, 2 * kPi * u(rng));
    double l = dist(x0, y) * (0.02 + 0.9 * u(rng));
    ErrorPolicy policy{ErrorKind::kAdversarial, trial % 2 ? AdversaryMode::kAwayFromGoal : AdversaryMode::kTowardNearest};
    // The toward-nearest adversary leans on a fixed point beside the path.
    Point lure = midpoint(x0, y) + perp(unit(y - x0)) * (l * (u(rng) - 0.5) * 4);
    std::mt19937_64 errors(trial);
    const Cone cone{x0, y, l};

    Point x = x0;
    double prev_bound = 0.0;
    std::size_t steps = 0;
    bool ok = true;
    while (ok && dist(x, y) >= l) {
      if (++steps > 1000) {
        ok = false;
        break;
      }
      StepPlan p = safe_step(m, x, y, l);
      Point z = sample_error(m, policy, x, p.intended, errors, y, lure);
      ok = hull_distance(z, cone) <= kTol && dist(z, y) < dist(x, y);
      if (!p.done) {
        // Guaranteed reduction of d(., y): step length less the error radius at its cap.
        double s = dist(x, p.intended);
        double bound = s * (1.0 - m.delta);
        ok = ok && bound >= prev_bound - kTol;
        prev_bound = bound;
      }
      x = z;
    }
    ok = ok && dist(x, y) < l;
    good += ok;
    most_steps = std::max(most_steps, steps);
  }
  detail = ratio(good, total) + " trajectories, at most " + std::to_string(most_steps) + " steps";
  return good == total;
}

// ------------------------------------------------------------ geometry

Circle circumcircle_oracle(Point a, Point b, Point c) {
  double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
  Point o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  return {o, dist(o, a)};
}

bool geometry_suite(std::string& detail) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1), unit01(0, 1);
  double worst_c = 0, worst_r = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Point> pts(1 + t % 12);
    for (auto& p : pts) p = {5 * u(rng), 5 * u(rng)};
    Circle a = mec(pts), b = mec_brute(pts);
    worst_c = std::max(worst_c, dist(a.center, b.center));
    worst_r = std::max(worst_r, std::abs(a.radius - b.radius));
  }
  bool mec_ok = worst_c <= 1e-9 && worst_r <= 1e-9;

  // Points of a cone are closer to the target center than the apex.
  std::size_t p1 = 0;
  for (int t = 0; t < 1000; ++t) {
    Point apex{5 * u(rng), 5 * u(rng)}, c{5 * u(rng), 5 * u(rng)};
    double d = dist(apex, c);
    Cone cone{apex, c, d * (0.05 + 0.9 * unit01(rng))};
    bool ok = true;
    for (int s = 0; s < 50; ++s) {
      Point q = apex + (c - apex) * (1.5 * unit01(rng)) + perp(c - apex) * u(rng);
      if (cone_contains(cone, q)) ok = ok && dist(q, c) < d;
    }
    p1 += ok;
  }

  // An apex inside the cone, outside the disk, has a nested cone.
  std::size_t p2 = 0;
  for (int t = 0; t < 1000; ++t) {
    Point apex{0, 0}, c{8, 0};
    Cone outer{apex, c, 0.5 + 3 * unit01(rng)};
    Point a2;
    do a2 = {8 * unit01(rng), 4 * u(rng)};
    while (!cone_contains(outer, a2) || dist(a2, c) <= outer.target_radius);
    Cone inner{a2, c, outer.target_radius};
    bool ok = true;
    for (int s = 0; s < 50; ++s) {
      Point q{a2.x + (9 - a2.x) * unit01(rng), 4 * u(rng)};
      if (cone_contains(inner, q)) ok = ok && hull_distance(q, outer) <= kTol;
    }
    p2 += ok;
  }

  // A family member between two others contains their intersection.
  std::size_t p4 = 0;
  for (int t = 0; t < 1000; ++t) {
    Point a{u(rng), u(rng)}, b = a + rotate({0.5 + unit01(rng), 0}, kPi * u(rng));
    CircleFamilyArc arc{a, b, -10, 10};
    double t1 = 4 * u(rng), t3 = 4 * u(rng), t2 = t1 + (t3 - t1) * unit01(rng);
    Circle c1 = family_circle(arc, t1), c2 = family_circle(arc, t2), c3 = family_circle(arc, t3);
    bool ok = true;
    for (int s = 0; s < 50; ++s) {
      Point q = c1.center + Point{u(rng), u(rng)} * c1.radius;
      if (dist(q, c1.center) < c1.radius && dist(q, c3.center) < c3.radius)
        ok = ok && dist(q, c2.center) <= c2.radius + kTol;
    }
    p4 += ok;
  }

  // Four or more points on the circle leave one non-critical.
  std::size_t p6 = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Point> pts;
    double r = 0.5 + 3 * unit01(rng);
    for (int i = 0; i < 4 + t % 5; ++i) pts.push_back(rotate({r, 0}, 2 * kPi * unit01(rng)));
    for (int i = 0; i < t % 3; ++i) pts.push_back(Point{u(rng), u(rng)} * (0.5 * r));
    bool some = false;
    for (std::size_t i = 0; i < pts.size() && !some; ++i)
      some = dist(pts[i], {0, 0}) > r - 1e-9 && !is_critical(pts, i);
    p6 += some;
  }

  // The middle of three consecutive boundary points within a half
  // turn is non-critical.
  std::size_t p7 = 0;
  for (int t = 0; t < 1000; ++t) {
    double r = 0.5 + 3 * unit01(rng), a0 = 2 * kPi * unit01(rng);
    double span = 0.1 + (kPi - 0.2) * unit01(rng);
    std::vector<Point> pts;
    for (double a : {a0, a0 + span * (0.1 + 0.8 * unit01(rng)), a0 + span}) pts.push_back(rotate({r, 0}, a));
    double rest = 2 * kPi - span;
    for (double f : {0.25, 0.5, 0.75}) pts.push_back(rotate({r, 0}, a0 + span + f * rest));
    p7 += !is_critical(pts, 1);
  }

  detail = "mec dev " + std::to_string(worst_c).substr(0, 8) + "/" + std::to_string(worst_r).substr(0, 8) +
           "; closer " + ratio(p1, 1000) + " nested " + ratio(p2, 1000) + " family " + ratio(p4, 1000) +
           " non-critical " + ratio(p6, 1000) + " half-turn " + ratio(p7, 1000);
  char buf[64];
  std::snprintf(buf, sizeof buf, "mec dev %.1e/%.1e", worst_c, worst_r);
  detail = buf + detail.substr(detail.find(';'));
  return mec_ok && p1 == 1000 && p2 == 1000 && p4 == 1000 && p6 == 1000 && p7 == 1000;
}

// ------------------------------------------------------------ symmetry

std::vector<Point> regular(int k, double r, Point c, double phase) {
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) pts.push_back(c + rotate({r, 0}, phase + 2 * kPi * i / k));
  return pts;
}

std::vector<std::vector<Point>> crafted_symmetric() {
  std::vector<std::vector<Point>> out;
  for (int k = 3; k <= 12; ++k) out.push_back(regular(k, 1 + 0.3 * k, {0.5 * k, -1}, 0.1 * k));
  for (int k = 3; k <= 8; ++k) {
    auto p = regular(k, 2, {1, 1}, 0.2);
    p.push_back({1, 1});
    out.push_back(p);
  }
  for (int k = 2; k <= 6; ++k) {  // k-fold rotation without mirror axes
    std::vector<Point> p;
    for (int i = 0; i < k; ++i) {
      p.push_back(rotate({3, 0}, 2 * kPi * i / k));
      p.push_back(rotate({2, 0.7}, 2 * kPi * i / k));
    }
    out.push_back(p);
  }
  for (int k = 0; k < 10; ++k) {  // mirrored about the y axis, maybe a robot on it
    std::vector<Point> p;
    for (int i = 0; i < 2 + k % 3; ++i) {
      Point q{0.5 + i + 0.1 * k, 0.7 * i * i - 1};
      p.push_back(q);
      p.push_back({-q.x, q.y});
    }
    if (k % 2) p.push_back({0, 2.5 + 0.1 * k});
    out.push_back(p);
  }
  out.push_back({{0, 0}, {2, 0}, {1, 1}});                  // E1
  out.push_back({{0, 0}, {4, 0}, {2, 3}});                  // E4
  out.push_back({{0, -2}, {0, 2}, {1, 0.5}, {-1, 0.5}});    // E5
  out.push_back({{0, 0}, {1, 0}, {1, 1}, {0, 1}});          // square
  out.push_back({{0, 0}, {4, 0}, {1, 2}});                  // scalene
  out.push_back({{0, 0}, {4, 0}, {1, 2}, {2, 0.5}});
  out.push_back({{-1, 0}, {1, 0}, {-2, 1}, {2, 1}});
  out.push_back({{-1, 0}, {1, 0}, {0, 1}, {0, -1}, {0, 0}});
  for (int k = 0; k < 6; ++k) out.push_back(regular(2 + k, 1, {}, 0));
  out.push_back({{0, 0}, {3, 0}, {3, 1}, {0, 1}});            // rectangle
  out.push_back({{0, 2}, {1, 0}, {0, -2}, {-1, 0}});          // rhombus
  out.push_back({{0, 0}, {4, 0}, {2, 3}, {2, 1}});            // robot on the isosceles axis
  out.push_back({{1, 0}, {-0.5, 0.866}, {-0.5, -0.866}, {0.2, 0.1}});
  {
    auto two = regular(4, 2, {}, 0);
    auto inner = regular(4, 1, {}, 0.3);
    two.insert(two.end(), inner.begin(), inner.end());
    out.push_back(two);  // squares turned against each other: rotation only
  }
  return out;
}

bool symmetry_suite(std::string& detail) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  std::size_t agree = 0, total = 0;
  for (int t = 0; t < 500; ++t) {
    std::vector<Point> pts(3 + t % 8);
    for (auto& q : pts) q = {u(rng), u(rng)};
    agree += symmetry_type(pts) == brute_symmetry(pts).classify();
    ++total;
  }
  auto crafted = crafted_symmetric();
  std::size_t crafted_total = std::min<std::size_t>(crafted.size(), 50);
  for (std::size_t k = 0; k < crafted_total; ++k) {
    agree += symmetry_type(crafted[k]) == brute_symmetry(crafted[k]).classify();
    ++total;
  }
  detail = ratio(agree, total) + " (" + std::to_string(crafted_total) + " crafted)";
  return agree == total && crafted_total == 50;
}

// ------------------------------------------------------------ impossibility

int cli(const std::string& args) {
  int status = std::system((std::string(APF_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool impossibility_suite(std::string& detail) {
  fs::path dir = fs::temp_directory_path() / "apf-acceptance-gate";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::vector<Point>> cases;
  for (int k = 3; k <= 12; ++k) cases.push_back(regular(k, 0.5 + 0.25 * k, {1.5, -0.5 * k}, 0.37 * k));
  for (int k = 0; k < 10; ++k) {
    // Mirror pairs about the line x = 2 with nothing on it.
    std::vector<Point> p;
    for (int i = 0; i < 2 + k % 3; ++i) {
      double dx = 0.4 + 0.6 * i + 0.05 * k, y = std::sin(1.3 * i + k);
      p.push_back({2 - dx, y});
      p.push_back({2 + dx, y});
    }
    cases.push_back(p);
  }
  std::size_t rejected = 0;
  std::mt19937_64 rng(6);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    Pattern f = random_pattern(cases[k].size(), 0.05, rng);
    std::string pf = (dir / ("pattern" + std::to_string(k) + ".json")).string();
    std::string cf = (dir / ("init" + std::to_string(k) + ".json")).string();
    write_file(pf, pattern_json(f));
    write_file(cf, configuration_json(cases[k]));
    bool gate = has_unbreakable_symmetry(cases[k]);
    rejected += gate && cli("simulate --pattern " + pf + " --init " + cf + " -o " + (dir / "out").string()) == 3;
  }
  fs::remove_all(dir);
  detail = ratio(rejected, cases.size()) + " rejected with exit code 3";
  return rejected == cases.size() && cases.size() == 20;
}

// ------------------------------------------------------------ determinism

bool determinism_suite(std::string& detail) {
  std::size_t same = 0;
  for (std::size_t k = 0; k < 20; ++k) {
    Instance in = instance(k * 7, k % 2 == 1);
    in.options.record_trace = true;
    std::ostringstream a, b;
    write_trace(a, run(in.init, in.pattern, in.options).trace);
    write_trace(b, run(in.init, in.pattern, in.options).trace);
    same += a.str() == b.str() && !a.str().empty();
  }
  detail = ratio(same, 20) + " byte-identical trace pairs";
  return same == 20;
}

}  // namespace

int main() {
  bool all = true;
  std::string d;

  SuiteResult ssync = run_suite(false);
  all &= report(1, "end-to-end SSYNC", ssync.ok == kSuite,
                ratio(ssync.ok, kSuite) + " terminated epsilon-close, monitors clean" + joined(ssync.failures));
  SuiteResult async = run_suite(true);
  all &= report(2, "end-to-end ASYNC with lights", async.ok == kSuite && async.busy_ok == kSuite,
                ratio(async.ok, kSuite) + " epsilon-close, busy-light invariant " + ratio(async.busy_ok, kSuite) +
                    joined(async.failures));
  all &= report(3, "approach under adversarial errors", approach_suite(d), d);
  all &= report(4, "geometry oracles and properties", geometry_suite(d), d);
  all &= report(5, "symmetry classification vs brute force", symmetry_suite(d), d);
  all &= report(6, "unbreakable symmetry gate", impossibility_suite(d), d);
  all &= report(7, "at most one mover", ssync.sequential == kSuite && async.sequential == kSuite,
                ratio(ssync.sequential + async.sequential, 2 * kSuite) + " runs with <= 1 mover per round/tick");
  all &= report(8, "determinism", determinism_suite(d), d);
  return all ? 0 : 1;
}
