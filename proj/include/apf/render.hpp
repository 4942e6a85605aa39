#pragma once

// SVG plots of a recorded run: initial and current robots, polygonal
// trajectories, the smallest enclosing circle and, given the pattern, the
// target disks of radius epsilon * D around an embedding.

#include <cstdint>
#include <string>
#include <vector>

#include "apf/sim.hpp"

namespace apf {

struct RenderOptions {
  const Pattern* pattern = nullptr;  // target disks are drawn only with a pattern
  std::uint64_t every = 0;           // 0: one plot of the whole run
  double size = 640.0;               // canvas side in pixels
};

struct Plot {
  std::uint64_t t;  // last step included
  std::string svg;
};

// With every = N the plots stop at steps N, 2N, ... and at the last step,
// ceil(steps / N) plots in all. A trace without moves gives one plot of the
// initial configuration. Throws InvalidInput without an init event.
std::vector<Plot> render(const Trace& trace, const RenderOptions& options);

}  // namespace apf
