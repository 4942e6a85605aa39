#include "apf/sampling.hpp"

#include <cmath>

#include "apf/error.hpp"

namespace apf {

namespace {

bool spaced(const std::vector<Point>& pts, double spacing) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (dist(pts[i], pts[j]) < spacing) return false;
  return true;
}

}  // namespace

Pattern random_pattern(std::size_t n, double epsilon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Pattern f;
    f.epsilon = epsilon;
    while (f.points.size() < n) {
      Point p{u(rng), u(rng)};
      if (norm(p) <= 1.0) f.points.push_back(p);
    }
    try {
      validate(f);
      return f;
    } catch (const Error&) {
    }
  }
}

std::vector<Point> random_configuration(std::size_t n, std::mt19937_64& rng, double spacing) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    if (spaced(pts, spacing) && !has_unbreakable_symmetry(pts)) return pts;
  }
}

}  // namespace apf
