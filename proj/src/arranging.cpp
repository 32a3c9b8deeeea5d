#include "layoutforge/arranging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace layoutforge {
namespace {

std::size_t nearest_edge(const Polygon2d& floor, const Vec2d& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < floor.size(); ++i) {
    const double d = point_segment_distance(p, floor[i], floor[(i + 1) % floor.size()]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void shuffle_kind(std::vector<Candidate>& candidates, Rng& rng) {
  auto begin = candidates.begin();
  while (begin != candidates.end()) {
    auto end = std::find_if(begin, candidates.end(),
                            [&](const Candidate& c) { return c.kind != begin->kind; });
    std::shuffle(begin, end, rng);
    begin = end;
  }
}

}  // namespace

Rect door_clearance(const Polygon2d& floor, const Door& door, double clearance_scale) {
  const std::size_t e = nearest_edge(floor, door.rect.center);
  const Vec2d n = inward_normal(floor[e], floor[(e + 1) % floor.size()]);
  const Mat2d axes = door.rect.axes();
  const int along = std::abs(axes.col(0).dot(n)) >= std::abs(axes.col(1).dot(n)) ? 0 : 1;
  const Vec2d dir = axes.col(along) * (axes.col(along).dot(n) >= 0 ? 1.0 : -1.0);
  const double swing = door.swing_depth * clearance_scale;
  Rect clearance = door.rect;
  clearance.half_extents(along) = swing / 2;
  clearance.center = door.rect.center + dir * (door.rect.half_extents(along) + swing / 2);
  return clearance;
}

std::vector<Block> room_blocks(const RoomEnvelope& room, double clearance_scale) {
  std::vector<Block> blocks;
  for (const auto& door : room.doors) {
    blocks.push_back({Block::Kind::kDoor, door.rect, std::numeric_limits<double>::infinity(),
                      door_clearance(room.floor, door, clearance_scale)});
  }
  for (const auto& window : room.windows) {
    blocks.push_back({Block::Kind::kWindow, window.rect, window.sill_height, std::nullopt});
  }
  return blocks;
}

std::vector<std::size_t> sort_groups(const std::vector<CoherentGroup>& groups) {
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].area() > groups[b].area();
  });
  return order;
}

double group_elevation(const CoherentGroup& group) {
  return group.wall_mounted ? group.mount_elevation : 0.0;
}

Solid group_solid(const CoherentGroup& group, const Transform& pose) {
  return {group.footprint(pose), group.tier, pose.y + group.base, group.height};
}

bool check_ok(const CoherentGroup& group, const Transform& pose, const std::vector<Solid>& placed,
              const std::vector<Block>& blocks, const Polygon2d& floor,
              const ArrangeConfig& config) {
  const Solid solid = group_solid(group, pose);
  if (!polygon_contains(floor, solid.plan, config.containment_tolerance)) return false;
  for (const auto& other : placed) {
    if (tier_collides(solid, other, config.rules)) return false;
  }
  for (const auto& block : blocks) {
    const bool under = solid.top() <= block.blocking_height;
    if (!under && overlaps(solid.plan, block.rect)) return false;
    if (block.clearance && overlaps(solid.plan, *block.clearance)) return false;
  }
  return true;
}

double room_length(const RoomEnvelope& room) {
  const Vec2d size = room.bounds().size();
  return std::min(size.x(), size.y());
}

Transform wall_pose(const CoherentGroup& group, const Vec2d& a, const Vec2d& b, double along,
                    double room_len) {
  const Vec2d n = inward_normal(a, b);
  const double gap =
      room_len > 0 ? group.lifting * std::max(0.0, room_len - group.depth) / room_len : 0.0;
  const Vec2d p = a + (b - a) * along + n * (group.depth / 2 + gap);
  return {p.x(), group_elevation(group), p.y(), facing_angle(n)};
}

std::vector<Candidate> heuristic_candidates(const CoherentGroup& group, const RoomEnvelope& room,
                                            const std::vector<CoherentGroup>& groups,
                                            const std::vector<PlacedGroup>& placed) {
  std::vector<Candidate> out;
  const Polygon2d& poly = room.floor;
  const std::size_t n = poly.size();
  const double len = room_length(room);
  const double y = group_elevation(group);

  if (!group.wall_mounted) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2d& corner = poly[i];
      const Vec2d& prev = poly[(i + n - 1) % n];
      const Vec2d& next = poly[(i + 1) % n];
      // Back against the longer wall; a tie keeps the wall that ends here.
      const bool use_next = (next - corner).norm() > (corner - prev).norm();
      const Vec2d a = use_next ? corner : prev;
      const Vec2d b = use_next ? next : corner;
      const Vec2d inward = inward_normal(a, b);
      const Vec2d away = use_next ? (next - corner).normalized() : (prev - corner).normalized();
      const Vec2d p = corner + inward * (group.depth / 2) + away * (group.width / 2);
      out.push_back({CandidateKind::kCorner, {p.x(), y, p.y(), facing_angle(inward)}});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    CoherentGroup lifted = group;
    if (group.wall_mounted) lifted.lifting = 0;
    out.push_back({CandidateKind::kEdge, wall_pose(lifted, poly[i], poly[(i + 1) % n], 0.5, len)});
  }
  if (!group.wall_mounted) {
    for (const auto& p : placed) {
      const CoherentGroup& other = groups.at(p.group);
      const double hw = (other.width + group.width) / 2;
      const double back = -other.depth / 2 + group.depth / 2;
      const Vec2d offsets[4] = {{-hw, back},
                                {hw, back},
                                {0, (other.depth + group.depth) / 2},
                                {0, -(other.depth + group.depth) / 2}};
      for (const auto& off : offsets) {
        const Vec2d c = p.pose.apply(off);
        out.push_back({CandidateKind::kNeighbor, {c.x(), y, c.y(), p.pose.theta}});
      }
    }
  }
  return out;
}

std::vector<Candidate> random_candidates(const CoherentGroup& group, const RoomEnvelope& room,
                                         std::size_t round, Rng& rng) {
  std::vector<Candidate> out;
  const Polygon2d& poly = room.floor;
  const double len = room_length(room);
  CoherentGroup lifted = group;
  if (group.wall_mounted) lifted.lifting = 0;
  const double density = std::ldexp(1.0, static_cast<int>(round));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2d& a = poly[i];
    const Vec2d& b = poly[(i + 1) % poly.size()];
    const auto count = static_cast<std::size_t>(std::ceil(density * (b - a).norm() - 1e-9));
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back({CandidateKind::kRandom, wall_pose(lifted, a, b, uniform_real(rng, 0.0, 1.0), len)});
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::optional<Transform> insert_rectangle(const CoherentGroup& group, const RoomEnvelope& room,
                                          const std::vector<CoherentGroup>& groups,
                                          const std::vector<PlacedGroup>& placed,
                                          const std::vector<Block>& blocks, Rng& rng,
                                          const ArrangeConfig& config, InsertStats* stats) {
  InsertStats local;
  InsertStats& s = stats ? *stats : local;
  std::vector<Solid> solids;
  for (const auto& p : placed) solids.push_back(group_solid(groups.at(p.group), p.pose));

  std::vector<Candidate> heuristics = heuristic_candidates(group, room, groups, placed);
  shuffle_kind(heuristics, rng);
  for (const auto& c : heuristics) {
    ++s.heuristic_tried;
    if (check_ok(group, c.pose, solids, blocks, room.floor, config)) return c.pose;
  }
  for (std::size_t round = 1; round <= config.n_max; ++round) {
    s.rounds = round;
    const auto candidates = random_candidates(group, room, round, rng);
    s.random_generated += candidates.size();
    for (const auto& c : candidates) {
      ++s.random_tried;
      if (check_ok(group, c.pose, solids, blocks, room.floor, config)) return c.pose;
    }
  }
  return std::nullopt;
}

PlacementResult arrange_groups(const std::vector<CoherentGroup>& groups, const RoomEnvelope& room,
                               Rng& rng, const ArrangeConfig& config) {
  PlacementResult result;
  const auto blocks = room_blocks(room, config.door_clearance_scale);
  for (std::size_t g : sort_groups(groups)) {
    GroupStats stats{g, {}, false};
    const auto pose = insert_rectangle(groups[g], room, groups, result.placed, blocks, rng, config,
                                       &stats.insert);
    if (pose) {
      result.placed.push_back({g, *pose});
      stats.placed = true;
    } else {
      result.discarded.push_back(
          {g, "no collision-free pose after " + std::to_string(config.n_max) + " sampling rounds"});
    }
    result.stats.push_back(stats);
  }
  return result;
}

std::vector<std::optional<Transform>> propagate(const std::vector<CoherentGroup>& groups,
                                                const PlacementResult& placement,
                                                std::size_t vertex_count) {
  std::vector<std::optional<Transform>> out(vertex_count);
  for (const auto& p : placement.placed) {
    for (const auto& m : groups.at(p.group).members) out.at(m.vertex) = compose(p.pose, m.local);
  }
  return out;
}

}  // namespace layoutforge
