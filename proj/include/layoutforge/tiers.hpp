#pragma once

#include "layoutforge/scene.hpp"

#include <set>
#include <utility>

namespace layoutforge {

/// A footprint with a tier and a vertical extent [base, base + height).
struct Solid {
  Rect plan;
  Tier tier = Tier::kFloor;
  double base = 0;
  double height = 0;

  double top() const { return base + height; }
};

Solid solid_of(const ObjectInstance& instance, const Transform& transform);

/// Which tier pairs may overlap in plan. Pairs are unordered. Stacking (a
/// lamp on a desk, a TV on its stand) needs no entry: those objects sit above
/// their support, so their vertical extents are disjoint.
class TierRules {
 public:
  /// carpet passes under floor and surface objects.
  static TierRules defaults();

  void allow_overlap(Tier a, Tier b);
  bool passable(Tier a, Tier b) const;

 private:
  std::set<std::pair<Tier, Tier>> passable_;
};

/// Two solids collide when their tiers are not passable, their plans share at
/// least `eps` area, and their vertical extents intersect.
bool tier_collides(const Solid& a, const Solid& b, const TierRules& rules = TierRules::defaults(),
                   double eps = 1e-6);

}  // namespace layoutforge
