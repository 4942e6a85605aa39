#pragma once

// Oracles that share no code path with the protocol: brute-force symmetry,
// brute-force smallest enclosing circle and an embedding search for
// epsilon-closeness.

#include <optional>
#include <vector>

#include "apf/analysis.hpp"

namespace apf {

struct Witness {
  std::vector<Point> points;        // embedded pattern, by pattern index
  std::vector<std::size_t> robot;   // robot matched to each pattern point
  double diameter = 0.0;
};

// First embedding found with every robot in the closed disk of radius
// epsilon * diameter around its matched point, or nullopt.
std::optional<Witness> epsilon_close(std::span<const Point> robots, const Pattern& pattern);

struct Isometries {
  std::vector<double> rotations;  // angles in [0, 2pi) about the center, identity included
  std::vector<Point> axes;        // unit directions of reflection axes through the center
  Point center;

  SymmetryType classify() const;
};

Isometries brute_symmetry(std::span<const Point> positions);

Circle mec_brute(std::span<const Point> points);

}  // namespace apf
