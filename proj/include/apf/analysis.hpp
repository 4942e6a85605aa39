#pragma once

// Configuration analysis: views, symmetry, symmetry safety, phase predicates
// and the bounding structure of a target pattern.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apf/geometry.hpp"

namespace apf {

enum class Light { kOff, kBusy, kIdle };

struct Configuration {
  std::vector<Point> positions;
  std::vector<Light> lights;  // empty when the model has no lights

  std::size_t size() const { return positions.size(); }
};

// Throws InvalidInput unless positions are finite and pairwise > kTol apart.
void validate(const Configuration& config);

struct Pattern {
  std::vector<Point> points;
  double epsilon = 0.05;

  std::size_t size() const { return points.size(); }
  double diameter() const;
};

// Throws InvalidInput unless n >= 2, 0 < epsilon < 1 and the epsilon-disks
// around pattern points are disjoint.
void validate(const Pattern& pattern);

// Quantized (radius, angle) pairs; radius is scaled by the radius of C(R).
struct ViewElement {
  std::int64_t radius = 0;
  std::int64_t angle = 0;
  auto operator<=>(const ViewElement&) const = default;
};

using View = std::vector<ViewElement>;

struct RobotViews {
  View cw;
  View ccw;
  const View& min() const { return ccw < cw ? ccw : cw; }
};

inline constexpr double kViewQuantum = 1e-7;

std::vector<RobotViews> views(std::span<const Point> positions);

enum class SymmetryType { kAsymmetric, kReflection, kRotation, kBoth };
const char* to_string(SymmetryType t);

struct SymmetryInfo {
  SymmetryType type = SymmetryType::kAsymmetric;
  std::vector<Point> axes;  // unit directions of reflection axes through the center
  Point center;
};

SymmetryInfo symmetry(std::span<const Point> positions);
SymmetryType symmetry_type(std::span<const Point> positions);
bool has_unbreakable_symmetry(std::span<const Point> positions);
bool is_symmetry_safe(std::span<const Point> positions);

// Index with the smallest view among candidates; AmbiguousView on a tie.
std::size_t min_view_robot(std::span<const Point> positions, std::span<const std::size_t> candidates);
std::size_t min_view_robot(std::span<const Point> positions, std::span<const std::size_t> candidates,
                           const std::vector<RobotViews>& precomputed);

// Indices of robots within kTol of C(R), ascending.
std::vector<std::size_t> boundary_robots(std::span<const Point> positions);
bool all_boundary_critical(std::span<const Point> positions);

struct BoundingStructure {
  std::vector<std::size_t> indices;  // into Pattern.points, size 2 or 3
};

BoundingStructure bounding_structure(const Pattern& pattern);

// The pattern placed on the plane so that its largest bounding side lies on
// the largest side of the robots' boundary triangle.
struct Embedding {
  std::vector<Point> points;
  double diameter = 0.0;
  std::size_t anchor_a = 0, anchor_b = 0, third = 0;  // pattern indices
};

struct TriangleRoles {
  std::size_t r1 = 0, r2 = 0, r3 = 0;  // robot indices; seg(r1,r2) is longest, r1 nearer r3
};

// Requires three boundary robots with a unique longest side.
std::optional<TriangleRoles> triangle_roles(std::span<const Point> positions,
                                            std::span<const std::size_t> boundary);

// Candidate embeddings in preference order (two when the pattern's longest
// side is equidistant from the third point, otherwise one).
std::vector<Embedding> triangle_embeddings(std::span<const Point> positions, const TriangleRoles& roles,
                                           const Pattern& pattern, const BoundingStructure& bs);

bool embedding_satisfied(std::span<const Point> positions, const TriangleRoles& roles,
                         const Embedding& e, double epsilon);

struct PredicateSet {
  bool a = false, u = false, c = false, s = false, b = false;
};

PredicateSet predicates(std::span<const Point> positions, const Pattern& pattern,
                        const BoundingStructure& bs);
PredicateSet predicates(std::span<const Point> positions, const Pattern& pattern);

enum class Phase { kRejected, kPhase1, kPhase2, kPhase3 };
Phase phase_of(const PredicateSet& p);
const char* to_string(Phase p);

}  // namespace apf
