#pragma once

// The robots' Look-Compute step: a pure function from a snapshot to a
// decision. Every robot evaluates the same plan for the whole configuration
// and moves only if it is the planned mover.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apf/analysis.hpp"
#include "apf/motion.hpp"

namespace apf {

struct Snapshot {
  std::vector<Point> positions;  // in the observer's frame
  std::size_t self = 0;
  std::vector<Light> lights;     // empty without lights
};

struct Decision {
  std::optional<Point> move_to;
  std::optional<Light> light;
  std::string phase_label;
  std::optional<Point> goal;  // center of the disk being approached
};

// One decision for the whole configuration, in the frame of the positions.
struct Plan {
  std::string label;
  std::optional<std::size_t> mover;
  Point intended;
  Point goal;
  bool terminal = false;
};

// The pattern placed on the plane once the bounding structure is formed.
struct TargetEmbedding {
  Frame frame;                          // global frame (origin c(R))
  std::vector<Point> targets;           // in the snapshot frame, indexed like the pattern
  std::vector<std::size_t> boundary;    // pattern indices already held by boundary robots
  std::vector<std::size_t> holder;      // robot index for each boundary pattern index
  std::optional<std::size_t> leader;    // pattern index of t_l (two-point structures)
  std::optional<std::size_t> leader_robot;
  Circle leader_circle;                 // C_l
  double diameter = 0.0;
};

Plan plan(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model);

Plan subphase_1_1(std::span<const Point> positions, const MovementModel& model);
Plan subphase_1_2(std::span<const Point> positions, const MovementModel& model);
Plan subphase_1_3(std::span<const Point> positions, const MovementModel& model);
Plan phase2(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model);
Plan phase3(std::span<const Point> positions, const Pattern& pattern, const MovementModel& model);

// Requires b; nullopt otherwise.
std::optional<TargetEmbedding> target_embedding(std::span<const Point> positions, const Pattern& pattern);

bool is_terminal(std::span<const Point> positions, const Pattern& pattern);

// UnbreakableSymmetry when the observed configuration has u.
Decision compute(const Snapshot& snapshot, const Pattern& pattern, const MovementModel& model);

// Two-light wrapper: a visible busy light means wait, otherwise run compute
// and turn busy exactly when moving.
Decision fcom_compute(const Snapshot& snapshot, const Pattern& pattern, const MovementModel& model);

}  // namespace apf
