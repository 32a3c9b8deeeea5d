#include "layoutforge/hyper_relation.hpp"

#include "layoutforge/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace layoutforge {

HyperKey HyperKey::make(std::string dominant_id, const std::vector<std::string>& secondary_ids) {
  std::map<std::string, int> counts;
  for (const auto& id : secondary_ids) ++counts[id];
  HyperKey key;
  key.dominant_id = std::move(dominant_id);
  key.secondaries.assign(counts.begin(), counts.end());
  return key;
}

HyperKey HyperKey::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos || bar == 0) {
    throw ParseError("hyper key '" + std::string(text) + "': expected 'dominant|id*count,...'");
  }
  std::vector<std::string> ids;
  std::string rest(text.substr(bar + 1));
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto star = item.rfind('*');
    int count = 1;
    std::string id = item;
    if (star != std::string::npos) {
      id = item.substr(0, star);
      try {
        count = std::stoi(item.substr(star + 1));
      } catch (const std::exception&) {
        throw ParseError("hyper key '" + std::string(text) + "': bad count in '" + item + "'");
      }
    }
    if (id.empty() || count < 1) {
      throw ParseError("hyper key '" + std::string(text) + "': bad entry '" + item + "'");
    }
    for (int i = 0; i < count; ++i) ids.push_back(id);
  }
  if (ids.empty()) throw ParseError("hyper key '" + std::string(text) + "': no secondaries");
  return make(std::string(text.substr(0, bar)), ids);
}

std::string HyperKey::str() const {
  std::string out = dominant_id + "|";
  for (std::size_t i = 0; i < secondaries.size(); ++i) {
    if (i) out += ",";
    out += secondaries[i].first + "*" + std::to_string(secondaries[i].second);
  }
  return out;
}

std::size_t HyperKey::copy_count() const {
  std::size_t n = 0;
  for (const auto& s : secondaries) n += static_cast<std::size_t>(s.second);
  return n;
}

std::vector<std::string> HyperKey::slots() const {
  std::vector<std::string> out;
  for (const auto& [id, count] : secondaries) {
    for (int i = 0; i < count; ++i) out.push_back(id);
  }
  return out;
}

std::string_view to_string(HyperStatus status) {
  switch (status) {
    case HyperStatus::kComplete:
      return "complete";
    case HyperStatus::kGenerating:
      return "generating";
    case HyperStatus::kFailed:
      return "failed";
  }
  return "failed";
}

std::optional<HyperStatus> parse_hyper_status(std::string_view text) {
  if (text == "complete") return HyperStatus::kComplete;
  if (text == "generating") return HyperStatus::kGenerating;
  if (text == "failed") return HyperStatus::kFailed;
  return std::nullopt;
}

namespace {

bool pose_less(const Transform& a, const Transform& b) {
  return std::tie(a.x, a.y, a.z, a.theta) < std::tie(b.x, b.y, b.z, b.theta);
}

bool pose_close(const Transform& a, const Transform& b, double tol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol &&
         std::abs(normalize_angle(a.theta - b.theta)) <= tol;
}

bool prior_close(const HyperPrior& a, const HyperPrior& b, double tol) {
  if (a.poses.size() != b.poses.size()) return false;
  for (std::size_t i = 0; i < a.poses.size(); ++i) {
    if (a.poses[i].slot != b.poses[i].slot || !pose_close(a.poses[i].pose, b.poses[i].pose, tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace

HyperPrior canonical_prior(const HyperKey& key, HyperPrior prior) {
  std::sort(prior.poses.begin(), prior.poses.end(),
            [](const SlotPose& a, const SlotPose& b) { return a.slot < b.slot; });
  std::size_t begin = 0;
  for (const auto& [id, count] : key.secondaries) {
    const std::size_t end = begin + static_cast<std::size_t>(count);
    if (end > prior.poses.size()) break;
    std::vector<Transform> poses;
    for (std::size_t s = begin; s < end; ++s) poses.push_back(prior.poses[s].pose);
    std::sort(poses.begin(), poses.end(), pose_less);
    for (std::size_t s = begin; s < end; ++s) prior.poses[s] = {s, poses[s - begin]};
    begin = end;
  }
  return prior;
}

bool hyper_prior_sound(const HyperKey& key, const HyperPrior& prior, const Catalog& catalog,
                       const TierRules& rules) {
  const auto slots = key.slots();
  std::vector<Solid> solids;
  for (const auto& sp : prior.poses) {
    solids.push_back(solid_of(catalog.at(slots.at(sp.slot)), sp.pose));
  }
  for (std::size_t i = 0; i < solids.size(); ++i) {
    for (std::size_t j = i + 1; j < solids.size(); ++j) {
      if (tier_collides(solids[i], solids[j], rules)) return false;
    }
  }
  return true;
}

std::optional<HyperPrior> generate_hyper_prior(const HyperKey& key, const RelationLookup& lookup,
                                               const Catalog& catalog, Rng& rng,
                                               std::size_t max_restarts, const TierRules& rules) {
  const std::vector<std::string> slots = key.slots();
  std::vector<std::shared_ptr<const PairwiseRelation>> relations;
  std::vector<std::vector<Solid>> candidates;
  for (const auto& id : slots) {
    auto rel = lookup({key.dominant_id, id});
    if (!rel || rel->priors.empty()) {
      throw UnsatisfiableKeyError("hyper key '" + key.str() + "': no pairwise relation " +
                                  key.dominant_id + " -> " + id);
    }
    const ObjectInstance& inst = catalog.at(id);
    std::vector<Solid> solids;
    solids.reserve(rel->priors.size());
    for (const auto& p : rel->priors) solids.push_back(solid_of(inst, p));
    relations.push_back(std::move(rel));
    candidates.push_back(std::move(solids));
  }

  std::vector<std::size_t> order(slots.size());
  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<std::size_t, std::size_t>> chosen;  // (slot, prior index)
    bool stuck = false;
    for (std::size_t slot : order) {
      std::vector<std::size_t> surviving;
      for (std::size_t i = 0; i < candidates[slot].size(); ++i) {
        const bool clear = std::none_of(chosen.begin(), chosen.end(), [&](const auto& c) {
          return tier_collides(candidates[slot][i], candidates[c.first][c.second], rules);
        });
        if (clear) surviving.push_back(i);
      }
      if (surviving.empty()) {
        stuck = true;
        break;
      }
      chosen.emplace_back(slot, surviving[uniform_index(rng, surviving.size())]);
    }
    if (stuck) continue;
    HyperPrior prior;
    for (const auto& [slot, index] : chosen) {
      prior.poses.push_back({slot, relations[slot]->priors[index]});
    }
    return canonical_prior(key, std::move(prior));
  }
  return std::nullopt;
}

HyperRelation enrich_hyper_relation(const HyperKey& key, const RelationLookup& lookup,
                                    const Catalog& catalog, Rng& rng,
                                    const HyperOptions& options) {
  HyperRelation out;
  out.key = key;
  // Each relation is fetched once per enrichment, not once per attempt.
  std::map<RelationKey, std::shared_ptr<const PairwiseRelation>> fetched;
  const RelationLookup once = [&](const RelationKey& k) {
    auto it = fetched.find(k);
    if (it == fetched.end()) it = fetched.emplace(k, lookup(k)).first;
    return it->second;
  };
  try {
    for (std::size_t attempt = 0;
         attempt < options.attempt_budget && out.priors.size() < options.target_count; ++attempt) {
      auto prior = generate_hyper_prior(key, once, catalog, rng, options.max_restarts,
                                        options.rules);
      if (!prior) continue;
      const bool seen = std::any_of(out.priors.begin(), out.priors.end(),
                                    [&](const HyperPrior& p) { return prior_close(p, *prior, 1e-6); });
      if (!seen) out.priors.push_back(std::move(*prior));
    }
  } catch (const UnsatisfiableKeyError& e) {
    out.status = HyperStatus::kFailed;
    out.reason = e.what();
    out.priors.clear();
    return out;
  } catch (const LookupError& e) {
    out.status = HyperStatus::kFailed;
    out.reason = e.what();
    out.priors.clear();
    return out;
  }
  if (out.priors.empty()) {
    out.status = HyperStatus::kFailed;
    out.reason = options.attempt_budget == 0 ? "no attempts budgeted"
                                             : "no collision-free assignment found";
  } else {
    out.status = HyperStatus::kComplete;
  }
  return out;
}

}  // namespace layoutforge
