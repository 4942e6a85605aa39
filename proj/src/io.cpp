#include "apf/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "apf/error.hpp"

namespace apf {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

json points_json(std::span<const Point> ps) {
  json a = json::array();
  for (Point p : ps) a.push_back(point_json(p));
  return a;
}

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::kParse, "point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> points_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "points must be an array");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(point_from(p));
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParse, std::string("missing field ") + key);
  return j.at(key);
}

std::optional<Light> light_from(const std::string& s) {
  if (s == "off") return Light::kOff;
  if (s == "busy") return Light::kBusy;
  if (s == "idle") return Light::kIdle;
  throw Error(ErrorCode::kParse, "unknown light " + s);
}

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::kNone: return "none";
    case ErrorKind::kUniform: return "uniform";
    case ErrorKind::kAdversarial: return "adversarial";
  }
  return "?";
}

}  // namespace

Pattern parse_pattern(const std::string& text) {
  json j = parse(text);
  Pattern f;
  f.points = points_from(field(j, "points"));
  const json& e = field(j, "epsilon");
  if (!e.is_number()) throw Error(ErrorCode::kParse, "epsilon must be a number");
  f.epsilon = e.get<double>();
  validate(f);
  return f;
}

std::vector<Point> parse_configuration(const std::string& text) {
  json j = parse(text);
  std::vector<Point> pts = points_from(field(j, "points"));
  validate(Configuration{pts});
  return pts;
}

std::string pattern_json(const Pattern& pattern) {
  return json{{"points", points_json(pattern.points)}, {"epsilon", pattern.epsilon}}.dump();
}

std::string configuration_json(std::span<const Point> points) { return json{{"points", points_json(points)}}.dump(); }

std::string trace_line(const TraceEvent& e) {
  json j;
  j["t"] = e.t;
  j["robot"] = e.robot ? json(*e.robot) : json(nullptr);
  j["kind"] = e.kind;
  if (!e.positions.empty()) j["positions"] = points_json(e.positions);
  if (e.from) j["from"] = point_json(*e.from);
  if (e.intended) j["intended"] = point_json(*e.intended);
  if (e.realized) j["realized"] = point_json(*e.realized);
  if (!e.label.empty()) j["label"] = e.label;
  if (e.light) j["light"] = to_string(*e.light);
  if (!e.detail.empty()) j["detail"] = e.detail;
  if (e.model) j["model"] = {{"lambda", e.model->lambda}, {"delta", e.model->delta}};
  return j.dump();
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& e : trace) out << trace_line(e) << '\n';
}

TraceEvent parse_trace_line(const std::string& line) {
  json j = parse(line);
  TraceEvent e;
  try {
    e.t = field(j, "t").get<std::uint64_t>();
    const json& r = field(j, "robot");
    if (!r.is_null()) e.robot = r.get<std::size_t>();
    e.kind = field(j, "kind").get<std::string>();
    if (j.contains("positions")) e.positions = points_from(j["positions"]);
    if (j.contains("from")) e.from = point_from(j["from"]);
    if (j.contains("intended")) e.intended = point_from(j["intended"]);
    if (j.contains("realized")) e.realized = point_from(j["realized"]);
    if (j.contains("label")) e.label = j["label"].get<std::string>();
    if (j.contains("light")) e.light = light_from(j["light"].get<std::string>());
    if (j.contains("detail")) e.detail = j["detail"].get<std::string>();
    if (j.contains("model"))
      e.model = MovementModel{field(j["model"], "lambda").get<double>(), field(j["model"], "delta").get<double>()};
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParse, ex.what());
  }
  return e;
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      trace.push_back(parse_trace_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  // A cut-off file ends without its newline or without the closing event.
  if (!trace.empty() && trace.back().kind != "terminated")
    throw Error(ErrorCode::kParse, "trace is truncated: no closing event");
  return trace;
}

std::string report_json(const RunReport& r, const RunOptions& o) {
  json j;
  j["outcome"] = r.outcome;
  j["terminated"] = r.terminated;
  j["scheduler"] = r.scheduler;
  j["steps"] = r.steps;
  j["moves"] = r.moves;
  j["max_movers"] = r.max_movers;
  j["final_positions"] = points_json(r.final_positions);
  j["seed"] = o.seed;
  j["model"] = {{"lambda", o.model.lambda}, {"delta", o.model.delta}};
  j["errors"] = to_string(o.errors.kind);
  if (o.scheduler.kind == SchedulerKind::kAsync) {
    // Delays are bounded in simulation; the bound is part of the result.
    j["delay_bounds"] = {o.scheduler.min_delay, o.scheduler.max_delay};
    j["async_schedule"] = o.scheduler.schedule == AsyncSchedule::kRush ? "rush" : "random";
  }
  if (r.witness) {
    j["verification"] = {{"epsilon_close", true},
                         {"diameter", r.witness->diameter},
                         {"embedding", points_json(r.witness->points)},
                         {"robot", r.witness->robot}};
  } else if (r.terminated) {
    j["verification"] = {{"epsilon_close", false}};
  }
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"monitor", x.monitor}, {"t", x.t}, {"robot", x.robot ? json(*x.robot) : json(nullptr)},
                 {"detail", x.detail}});
  j["monitors"] = {{"violations", v}, {"clean", r.violations.empty()}};
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
  out << text;
}

}  // namespace apf
