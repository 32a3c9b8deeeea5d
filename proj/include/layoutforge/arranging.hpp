#pragma once

// Global placement of coherent groups as cuboids inside the room polygon:
// largest groups first, heuristic poses (corners, wall midpoints, sides of
// placed groups) before rounds of increasingly dense random wall sampling.

#include "layoutforge/grouping.hpp"

#include <optional>
#include <string>
#include <vector>

namespace layoutforge {

struct Block {
  enum class Kind { kDoor, kWindow };
  Kind kind = Kind::kDoor;
  Rect rect;
  /// Groups no taller than this may overlap the block (windows: the sill).
  double blocking_height = std::numeric_limits<double>::infinity();
  /// Free area in front of a door.
  std::optional<Rect> clearance;
};

/// Door clearance: the door rectangle extruded into the room by
/// swing_depth * clearance_scale.
std::vector<Block> room_blocks(const RoomEnvelope& room, double clearance_scale = 1.0);

Rect door_clearance(const Polygon2d& floor, const Door& door, double clearance_scale = 1.0);

struct ArrangeConfig {
  std::size_t n_max = 7;
  double door_clearance_scale = 1.0;
  /// Slack for the containment test so flush poses are not lost to rounding.
  double containment_tolerance = 0.01;
  TierRules rules = TierRules::defaults();
};

/// Indices of `groups` by descending plan area; equal areas keep input order.
std::vector<std::size_t> sort_groups(const std::vector<CoherentGroup>& groups);

/// World elevation of a group's origin: the mount height for wall-mounted
/// groups, the floor otherwise.
double group_elevation(const CoherentGroup& group);

Solid group_solid(const CoherentGroup& group, const Transform& pose);

bool check_ok(const CoherentGroup& group, const Transform& pose, const std::vector<Solid>& placed,
              const std::vector<Block>& blocks, const Polygon2d& floor,
              const ArrangeConfig& config = {});

/// Smaller side of the room's bounding box; the largest lifting is half of it.
double room_length(const RoomEnvelope& room);

/// Pose with the group's back to edge (a, b) at `along` in [0, 1], pushed
/// inward by the group's lifting.
Transform wall_pose(const CoherentGroup& group, const Vec2d& a, const Vec2d& b, double along,
                    double room_len);

enum class CandidateKind { kCorner, kEdge, kNeighbor, kRandom };

struct Candidate {
  CandidateKind kind = CandidateKind::kRandom;
  Transform pose;
};

struct PlacedGroup {
  std::size_t group = 0;
  Transform pose;
};

/// Corner poses, then edge midpoints, then four neighbour poses per placed
/// group. Wall-mounted groups only get edge midpoints.
std::vector<Candidate> heuristic_candidates(const CoherentGroup& group, const RoomEnvelope& room,
                                            const std::vector<CoherentGroup>& groups,
                                            const std::vector<PlacedGroup>& placed);

/// ceil(2^round * |edge|) uniform poses per edge, shuffled.
std::vector<Candidate> random_candidates(const CoherentGroup& group, const RoomEnvelope& room,
                                         std::size_t round, Rng& rng);

struct InsertStats {
  std::size_t heuristic_tried = 0;
  std::size_t random_tried = 0;
  std::size_t random_generated = 0;
  std::size_t rounds = 0;
};

/// First candidate that passes check_ok. Heuristic candidates are shuffled
/// within their kind; kinds keep their order.
std::optional<Transform> insert_rectangle(const CoherentGroup& group, const RoomEnvelope& room,
                                          const std::vector<CoherentGroup>& groups,
                                          const std::vector<PlacedGroup>& placed,
                                          const std::vector<Block>& blocks, Rng& rng,
                                          const ArrangeConfig& config, InsertStats* stats = nullptr);

struct Discard {
  std::size_t group = 0;
  std::string reason;
};

struct GroupStats {
  std::size_t group = 0;
  InsertStats insert;
  bool placed = false;
};

struct PlacementResult {
  std::vector<PlacedGroup> placed;
  std::vector<Discard> discarded;
  std::vector<GroupStats> stats;
};

PlacementResult arrange_groups(const std::vector<CoherentGroup>& groups, const RoomEnvelope& room,
                               Rng& rng, const ArrangeConfig& config = {});

/// World pose of every vertex of `graph` (nullopt for discarded groups).
std::vector<std::optional<Transform>> propagate(const std::vector<CoherentGroup>& groups,
                                                const PlacementResult& placement,
                                                std::size_t vertex_count);

}  // namespace layoutforge
