#include "apf/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "apf/error.hpp"
#include "apf/protocol.hpp"

namespace apf {

namespace {

// Fixed precision keeps the bytes stable across platforms.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

class Canvas {
 public:
  Canvas(double lo_x, double lo_y, double hi_x, double hi_y, double size) : size_(size) {
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    scale_ = (size - 2.0 * kPad) / span;
    ox_ = lo_x - ((size - 2.0 * kPad) / scale_ - (hi_x - lo_x)) / 2.0;
    oy_ = lo_y - ((size - 2.0 * kPad) / scale_ - (hi_y - lo_y)) / 2.0;
    body_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) + "\" height=\"" + num(size) +
            "\" viewBox=\"0 0 " + num(size) + " " + num(size) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  std::string x(Point p) const { return num(kPad + (p.x - ox_) * scale_); }
  std::string y(Point p) const { return num(size_ - kPad - (p.y - oy_) * scale_); }
  std::string r(double v) const { return num(v * scale_); }

  void circle(Point c, double radius, const std::string& style) {
    body_ += "<circle cx=\"" + x(c) + "\" cy=\"" + y(c) + "\" r=\"" + r(radius) + "\" " + style + "/>\n";
  }
  void dot(Point c, double px, const std::string& style) {
    body_ += "<circle cx=\"" + x(c) + "\" cy=\"" + y(c) + "\" r=\"" + num(px) + "\" " + style + "/>\n";
  }
  void polyline(const std::vector<Point>& ps, const std::string& style) {
    if (ps.size() < 2) return;
    body_ += "<polyline points=\"";
    for (std::size_t k = 0; k < ps.size(); ++k) body_ += (k ? " " : "") + x(ps[k]) + "," + y(ps[k]);
    body_ += "\" fill=\"none\" " + style + "/>\n";
  }
  void text(double px, double py, const std::string& s) {
    body_ += "<text x=\"" + num(px) + "\" y=\"" + num(py) + "\" font-family=\"monospace\" font-size=\"12\">" + s +
             "</text>\n";
  }
  std::string finish() { return body_ + "</svg>\n"; }

 private:
  static constexpr double kPad = 24.0;
  double size_, scale_, ox_, oy_;
  std::string body_;
};


std::string draw(const std::vector<std::vector<Point>>& paths, const std::vector<Point>& initial,
                 const std::vector<Point>& current, std::uint64_t t, const RenderOptions& o, const Canvas& base) {
  Canvas c = base;
  Circle m = mec(current);
  c.circle(m.center, m.radius, "fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"");
  if (o.pattern && o.pattern->size() == current.size()) {
    std::vector<Point> targets;
    double radius = 0.0;
    if (auto w = epsilon_close(current, *o.pattern)) {
      targets = w->points;
      radius = o.pattern->epsilon * w->diameter;
    } else if (auto e = target_embedding(current, *o.pattern)) {
      targets = e->targets;
      radius = o.pattern->epsilon * e->diameter;
    }
    for (Point q : targets) c.circle(q, radius, "fill=\"#cde\" fill-opacity=\"0.5\" stroke=\"#58a\"");
  }
  for (const auto& p : paths) c.polyline(p, "stroke=\"#c63\" stroke-width=\"1\"");
  for (Point p : initial) c.dot(p, 3.5, "fill=\"none\" stroke=\"#444\"");
  for (Point p : current) c.dot(p, 3.0, "fill=\"#222\"");
  c.text(8, 16, "t=" + std::to_string(t));
  return c.finish();
}

}  // namespace

std::vector<Plot> render(const Trace& trace, const RenderOptions& o) {
  if (trace.empty() || trace.front().kind != "init" || trace.front().positions.empty())
    throw Error(ErrorCode::kInvalidInput, "trace does not start with an init event");
  const std::vector<Point>& initial = trace.front().positions;
  const std::size_t n = initial.size();

  struct Step {
    std::uint64_t t;
    std::size_t robot;
    Point to;
  };
  std::vector<Step> steps;
  double lo_x = initial[0].x, hi_x = lo_x, lo_y = initial[0].y, hi_y = lo_y;
  auto grow = [&](Point p) {
    lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
  };
  auto grow_circle = [&](Circle c, double pad) {
    grow(c.center + Point{c.radius + pad, c.radius + pad});
    grow(c.center - Point{c.radius + pad, c.radius + pad});
  };
  std::uint64_t last = 0;
  for (const auto& e : trace) {
    last = std::max(last, e.t);
    if (e.kind != "move_end" || !e.realized || !e.robot || *e.robot >= n) continue;
    steps.push_back({e.t, *e.robot, *e.realized});
  }
  // Every circle drawn at any stop has to fit: MECs and target disks.
  std::vector<Point> pos = initial;
  double pad = o.pattern ? o.pattern->epsilon * 2.0 * mec(initial).radius : 0.0;
  grow_circle(mec(pos), pad);
  for (const auto& s : steps) {
    pos[s.robot] = s.to;
    Circle m = mec(pos);
    grow_circle(m, o.pattern ? o.pattern->epsilon * 2.0 * m.radius : 0.0);
  }
  Canvas base(lo_x, lo_y, hi_x, hi_y, o.size);

  std::vector<std::uint64_t> stops;
  if (o.every == 0 || steps.empty()) {
    stops.push_back(steps.empty() ? 0 : last);
  } else {
    for (std::uint64_t t = o.every; t < last; t += o.every) stops.push_back(t);
    stops.push_back(last);
  }

  std::vector<Plot> out;
  std::vector<std::vector<Point>> paths(n);
  for (std::size_t i = 0; i < n; ++i) paths[i].push_back(initial[i]);
  std::vector<Point> current = initial;
  std::size_t k = 0;
  for (std::uint64_t stop : stops) {
    for (; k < steps.size() && steps[k].t <= stop; ++k) {
      current[steps[k].robot] = steps[k].to;
      paths[steps[k].robot].push_back(steps[k].to);
    }
    out.push_back({stop, draw(paths, initial, current, stop, o, base)});
  }
  return out;
}

}  // namespace apf
