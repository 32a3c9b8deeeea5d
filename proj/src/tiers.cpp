#include "layoutforge/tiers.hpp"

#include <algorithm>

namespace layoutforge {

Solid solid_of(const ObjectInstance& instance, const Transform& transform) {
  return {world_footprint(instance, transform), instance.tier, transform.y, instance.height};
}

TierRules TierRules::defaults() {
  TierRules rules;
  rules.allow_overlap(Tier::kCarpet, Tier::kFloor);
  rules.allow_overlap(Tier::kCarpet, Tier::kSurface);
  return rules;
}

void TierRules::allow_overlap(Tier a, Tier b) { passable_.insert(std::minmax(a, b)); }

bool TierRules::passable(Tier a, Tier b) const { return passable_.contains(std::minmax(a, b)); }

bool tier_collides(const Solid& a, const Solid& b, const TierRules& rules, double eps) {
  if (a.tier != b.tier && rules.passable(a.tier, b.tier)) return false;
  if (!(a.base < b.top() && b.base < a.top())) return false;
  return overlaps(a.plan, b.plan, eps);
}

}  // namespace layoutforge
