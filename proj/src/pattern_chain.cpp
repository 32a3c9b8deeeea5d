#include "layoutforge/pattern_chain.hpp"

#include "layoutforge/error.hpp"
#include "layoutforge/scene_io.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>

namespace layoutforge {

std::size_t PatternChainSet::max_length() const {
  std::size_t best = 0;
  for (const auto& c : chains) best = std::max(best, c.size());
  return best;
}

std::string relation_hash(const PairwiseRelation& relation) {
  Json priors = Json::array();
  for (const auto& p : relation.priors) priors.push_back(transform_to_json(p));
  const std::uint64_t h = fnv1a(priors.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Rect copy_footprint(const ObjectInstance& secondary, const Transform& pose) {
  return world_footprint(secondary, pose);
}

bool copies_disjoint(const ObjectInstance& secondary, const std::vector<Transform>& poses) {
  std::vector<Rect> rects;
  rects.reserve(poses.size());
  for (const auto& p : poses) rects.push_back(copy_footprint(secondary, p));
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      if (overlaps(rects[i], rects[j], kCopyOverlapEps)) return false;
    }
  }
  return true;
}

Chain generate_chain(const PairwiseRelation& relation, const Catalog& catalog,
                     std::size_t start_index, Rng& rng) {
  const std::size_t n = relation.priors.size();
  if (start_index >= n) throw LookupError("chain start index out of range");
  const ObjectInstance& secondary = catalog.at(relation.secondary_id);
  std::vector<Rect> rects;
  rects.reserve(n);
  for (const auto& p : relation.priors) rects.push_back(copy_footprint(secondary, p));

  Chain chain{start_index};
  std::vector<std::size_t> candidates;
  candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != start_index && !overlaps(rects[i], rects[start_index], kCopyOverlapEps)) {
      candidates.push_back(i);
    }
  }
  while (!candidates.empty()) {
    const std::size_t pick = candidates[uniform_index(rng, candidates.size())];
    chain.push_back(pick);
    std::erase_if(candidates, [&](std::size_t i) {
      return i == pick || overlaps(rects[i], rects[pick], kCopyOverlapEps);
    });
  }
  return chain;
}

PatternChainSet generate_chain_set(const PairwiseRelation& relation, const Catalog& catalog,
                                   Rng& rng, bool aligned) {
  PatternChainSet set;
  set.dominant_id = relation.dominant_id;
  set.secondary_id = relation.secondary_id;
  set.relation_hash = relation_hash(relation);
  set.aligned = aligned;
  set.chains.reserve(relation.priors.size());
  for (std::size_t k = 0; k < relation.priors.size(); ++k) {
    set.chains.push_back(generate_chain(relation, catalog, k, rng));
  }
  return set;
}

namespace {

double snap_to_quarter(double theta, double tol) {
  const double quarter = std::numbers::pi / 2;
  const double nearest = std::round(theta / quarter) * quarter;
  if (nearest == theta) return theta;
  if (std::abs(normalize_angle(theta - nearest)) < tol) return normalize_angle(nearest);
  return theta;
}

/// Groups of indices whose coordinate values all lie within `tol` of the
/// group's smallest value.
std::vector<std::vector<std::size_t>> close_groups(const std::vector<double>& values, double tol) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    if (groups.empty() || values[idx] - values[groups.back().front()] >= tol) {
      groups.push_back({idx});
    } else {
      groups.back().push_back(idx);
    }
  }
  return groups;
}

}  // namespace

std::vector<Transform> align_chain(const PairwiseRelation& relation, const Chain& chain,
                                   const Catalog& catalog, const AlignOptions& options) {
  const ObjectInstance& secondary = catalog.at(relation.secondary_id);
  std::vector<Transform> poses;
  poses.reserve(chain.size());
  for (std::size_t i : chain) {
    if (i >= relation.priors.size()) throw LookupError("chain index out of range");
    poses.push_back(relation.priors[i]);
  }

  // Each adjustment is tried on a copy and kept only if the copies stay
  // disjoint. Repeat until nothing changes so the result is a fixed point.
  auto try_apply = [&](const std::vector<Transform>& candidate) {
    if (candidate == poses || !copies_disjoint(secondary, candidate)) return false;
    poses = candidate;
    return true;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < poses.size(); ++i) {
      std::vector<Transform> candidate = poses;
      candidate[i].theta = snap_to_quarter(poses[i].theta, options.snap_rad);
      changed |= try_apply(candidate);
    }
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<double> values;
      for (const auto& p : poses) values.push_back(axis == 0 ? p.x : p.z);
      for (const auto& group : close_groups(values, options.snap_m)) {
        if (group.size() < 2) continue;
        const bool already_equal = std::all_of(group.begin(), group.end(), [&](std::size_t i) {
          return values[i] == values[group.front()];
        });
        if (already_equal) continue;
        double mean = 0;
        for (std::size_t i : group) mean += values[i];
        mean /= static_cast<double>(group.size());
        std::vector<Transform> candidate = poses;
        for (std::size_t i : group) (axis == 0 ? candidate[i].x : candidate[i].z) = mean;
        changed |= try_apply(candidate);
      }
    }
  }
  return poses;
}

std::vector<Transform> chain_poses(const PairwiseRelation& relation, const PatternChainSet& set,
                                   const Chain& chain, const Catalog& catalog) {
  if (set.aligned) return align_chain(relation, chain, catalog);
  std::vector<Transform> poses;
  for (std::size_t i : chain) poses.push_back(relation.priors.at(i));
  return poses;
}

}  // namespace layoutforge
