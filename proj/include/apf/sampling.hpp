#pragma once

// Random instances for end-to-end runs.

#include <cstddef>
#include <random>
#include <vector>

#include "apf/analysis.hpp"

namespace apf {

// Uniform in the unit disk, rejected until the epsilon-disks are disjoint.
Pattern random_pattern(std::size_t n, double epsilon, std::mt19937_64& rng);

// Uniform in [-1, 1]^2 with a minimum spacing, rejected while the
// configuration has an unbreakable symmetry.
std::vector<Point> random_configuration(std::size_t n, std::mt19937_64& rng, double spacing = 0.05);

}  // namespace apf
