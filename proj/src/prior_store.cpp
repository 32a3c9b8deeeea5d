#include "layoutforge/prior_store.hpp"

#include "layoutforge/error.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace layoutforge {
namespace {

const char* kPairwise = "pairwise";
const char* kChains = "chains";
const char* kHyper = "hyper";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double field(const Json& doc, const char* name, const std::string& source) {
  if (!doc.contains(name) || !doc.at(name).is_number()) {
    throw IntegrityError(source + ": missing numeric field '" + name + "'");
  }
  return doc.at(name).get<double>();
}

Transform pose_from(const Json& doc, const std::string& source) {
  return {field(doc, "x", source), field(doc, "y", source), field(doc, "z", source),
          field(doc, "theta", source)};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string canonical_text(const Json& doc) { return doc.dump(2) + "\n"; }

Json pairwise_to_json(const PairwiseRelation& relation) {
  Json priors = Json::array();
  for (const auto& p : relation.priors) priors.push_back(transform_to_json(p));
  return Json{{"dominant", relation.dominant_id},
              {"secondary", relation.secondary_id},
              {"meta",
               {{"angleWeight", relation.meta.angle_weight},
                {"rhoQ", relation.meta.rho_quantile},
                {"deltaQ", relation.meta.delta_quantile},
                {"proximity", relation.meta.proximity}}},
              {"priors", priors}};
}

PairwiseRelation pairwise_from_json(const Json& doc, const std::string& source) {
  try {
    PairwiseRelation rel;
    rel.dominant_id = doc.at("dominant").get<std::string>();
    rel.secondary_id = doc.at("secondary").get<std::string>();
    if (doc.contains("meta")) {
      const Json& m = doc.at("meta");
      rel.meta.angle_weight = m.value("angleWeight", rel.meta.angle_weight);
      rel.meta.rho_quantile = m.value("rhoQ", rel.meta.rho_quantile);
      rel.meta.delta_quantile = m.value("deltaQ", rel.meta.delta_quantile);
      rel.meta.proximity = m.value("proximity", rel.meta.proximity);
    }
    for (const auto& p : doc.at("priors")) rel.priors.push_back(pose_from(p, source));
    return rel;
  } catch (const Json::exception& e) {
    throw IntegrityError(source + ": " + e.what());
  }
}

Json chains_to_json(const PatternChainSet& set) {
  return Json{{"relationHash", set.relation_hash}, {"chains", set.chains}, {"aligned", set.aligned}};
}

PatternChainSet chains_from_json(const Json& doc, const RelationKey& key, const std::string& source) {
  try {
    PatternChainSet set;
    set.dominant_id = key.dominant;
    set.secondary_id = key.secondary;
    set.relation_hash = doc.at("relationHash").get<std::string>();
    set.chains = doc.at("chains").get<std::vector<Chain>>();
    set.aligned = doc.value("aligned", false);
    return set;
  } catch (const Json::exception& e) {
    throw IntegrityError(source + ": " + e.what());
  }
}

Json hyper_to_json(const HyperRelation& relation) {
  Json priors = Json::array();
  for (const auto& prior : relation.priors) {
    Json poses = Json::array();
    for (const auto& sp : prior.poses) {
      Json j = transform_to_json(sp.pose);
      j["slot"] = sp.slot;
      poses.push_back(std::move(j));
    }
    priors.push_back(std::move(poses));
  }
  Json doc{{"key", relation.key.str()},
           {"status", std::string(to_string(relation.status))},
           {"priors", priors}};
  if (!relation.reason.empty()) doc["reason"] = relation.reason;
  return doc;
}

HyperRelation hyper_from_json(const Json& doc, const std::string& source) {
  try {
    HyperRelation rel;
    rel.key = HyperKey::parse(doc.at("key").get<std::string>());
    const auto status = parse_hyper_status(doc.at("status").get<std::string>());
    if (!status) throw IntegrityError(source + ": unknown status");
    rel.status = *status;
    rel.reason = doc.value("reason", std::string());
    for (const auto& prior : doc.at("priors")) {
      HyperPrior hp;
      for (const auto& sp : prior) {
        hp.poses.push_back({sp.at("slot").get<std::size_t>(), pose_from(sp, source)});
      }
      rel.priors.push_back(std::move(hp));
    }
    return rel;
  } catch (const Json::exception& e) {
    throw IntegrityError(source + ": " + e.what());
  } catch (const ParseError& e) {
    throw IntegrityError(source + ": " + e.what());
  }
}

PriorStore::PriorStore() = default;

PriorStore::PriorStore(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path PriorStore::path_for(std::string_view kind, const std::string& key) const {
  const std::string h = hex64(fnv1a(key));
  const std::filesystem::path base = root_ ? *root_ : std::filesystem::path();
  return base / std::string(kind) / h.substr(0, 2) / (h + ".json");
}

std::mutex& PriorStore::key_lock(const std::string& cache_key) {
  return key_locks_[fnv1a(cache_key) % key_locks_.size()];
}

std::optional<PriorStore::Payload> PriorStore::load(
    std::string_view kind, const std::string& key,
    const std::function<Payload(const Json&, const std::string&)>& decode) {
  ++lookups_;
  const std::string cache_key = std::string(kind) + ":" + key;
  {
    std::lock_guard lock(cache_mutex_);
    if (const auto it = cache_.find(cache_key); it != cache_.end()) {
      ++cache_hits_;
      return it->second.payload;
    }
  }
  // Single flight per key: a second loader waits here, then hits the cache.
  std::lock_guard flight(key_lock(cache_key));
  {
    std::lock_guard lock(cache_mutex_);
    if (const auto it = cache_.find(cache_key); it != cache_.end()) {
      ++cache_hits_;
      return it->second.payload;
    }
  }
  Entry entry;
  if (root_) {
    entry.file = path_for(kind, key);
    if (std::filesystem::exists(entry.file)) {
      ++file_reads_;
      const std::string text = read_text(entry.file);
      Json doc;
      try {
        doc = Json::parse(text);
      } catch (const Json::parse_error& e) {
        throw IntegrityError("prior file for '" + key + "' at " + entry.file.string() +
                             " is corrupt: " + e.what());
      }
      entry.payload = decode(doc, entry.file.string());
      entry.content_hash = fnv1a(text);
    }
  }
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(cache_key, std::move(entry));
  return it->second.payload;
}

void PriorStore::save(std::string_view kind, const std::string& key, const Json& doc,
                      Payload payload) {
  const std::string cache_key = std::string(kind) + ":" + key;
  std::lock_guard flight(key_lock(cache_key));
  Entry entry;
  entry.payload = std::move(payload);
  if (root_) {
    const std::string text = canonical_text(doc);
    entry.file = path_for(kind, key);
    write_file_atomic(entry.file, text);
    entry.content_hash = fnv1a(text);
    ++file_writes_;
  }
  std::lock_guard lock(cache_mutex_);
  cache_[cache_key] = std::move(entry);
}

void PriorStore::save_pairwise(const PairwiseRelation& relation) {
  save(kPairwise, relation.key().str(), pairwise_to_json(relation),
       std::make_shared<const PairwiseRelation>(relation));
}

std::shared_ptr<const PairwiseRelation> PriorStore::load_pairwise(const RelationKey& key) {
  const std::string k = key.str();
  auto payload = load(kPairwise, k, [&](const Json& doc, const std::string& source) -> Payload {
    auto rel = pairwise_from_json(doc, source);
    if (rel.key() != key) throw IntegrityError(source + ": holds relation " + rel.key().str());
    return std::make_shared<const PairwiseRelation>(std::move(rel));
  });
  if (!payload) return nullptr;
  return std::get<std::shared_ptr<const PairwiseRelation>>(*payload);
}

void PriorStore::save_chains(const PatternChainSet& set) {
  save(kChains, set.key().str(), chains_to_json(set),
       std::make_shared<const PatternChainSet>(set));
}

ChainLoad PriorStore::load_chains(const RelationKey& key, const std::string& current_relation_hash) {
  auto payload = load(kChains, key.str(), [&](const Json& doc, const std::string& source) -> Payload {
    return std::make_shared<const PatternChainSet>(chains_from_json(doc, key, source));
  });
  if (!payload) return {ChainLoadStatus::kNotFound, nullptr};
  auto set = std::get<std::shared_ptr<const PatternChainSet>>(*payload);
  if (set->relation_hash != current_relation_hash) return {ChainLoadStatus::kStale, nullptr};
  return {ChainLoadStatus::kFound, std::move(set)};
}

void PriorStore::save_hyper(const HyperRelation& relation) {
  save(kHyper, relation.key.str(), hyper_to_json(relation),
       std::make_shared<const HyperRelation>(relation));
}

std::shared_ptr<const HyperRelation> PriorStore::load_hyper(const HyperKey& key) {
  auto payload = load(kHyper, key.str(), [&](const Json& doc, const std::string& source) -> Payload {
    auto rel = hyper_from_json(doc, source);
    if (rel.key != key) throw IntegrityError(source + ": holds hyper key " + rel.key.str());
    return std::make_shared<const HyperRelation>(std::move(rel));
  });
  if (!payload) return nullptr;
  return std::get<std::shared_ptr<const HyperRelation>>(*payload);
}

std::vector<RelationKey> PriorStore::pairwise_keys() const {
  std::set<RelationKey> keys;
  {
    std::lock_guard lock(cache_mutex_);
    for (const auto& [k, entry] : cache_) {
      if (!entry.payload) continue;
      if (const auto* rel = std::get_if<std::shared_ptr<const PairwiseRelation>>(&*entry.payload)) {
        keys.insert((*rel)->key());
      }
    }
  }
  if (root_ && std::filesystem::exists(*root_ / kPairwise)) {
    for (const auto& f : std::filesystem::recursive_directory_iterator(*root_ / kPairwise)) {
      if (!f.is_regular_file() || f.path().extension() != ".json") continue;
      ++file_reads_;
      const Json doc = read_json_file(f.path());
      keys.insert({doc.value("dominant", std::string()), doc.value("secondary", std::string())});
    }
  }
  return {keys.begin(), keys.end()};
}

std::vector<std::string> PriorStore::hyper_keys() const {
  std::set<std::string> keys;
  {
    std::lock_guard lock(cache_mutex_);
    for (const auto& [k, entry] : cache_) {
      if (!entry.payload) continue;
      if (const auto* rel = std::get_if<std::shared_ptr<const HyperRelation>>(&*entry.payload)) {
        keys.insert((*rel)->key.str());
      }
    }
  }
  if (root_ && std::filesystem::exists(*root_ / kHyper)) {
    for (const auto& f : std::filesystem::recursive_directory_iterator(*root_ / kHyper)) {
      if (!f.is_regular_file() || f.path().extension() != ".json") continue;
      ++file_reads_;
      keys.insert(read_json_file(f.path()).value("key", std::string()));
    }
  }
  return {keys.begin(), keys.end()};
}

std::vector<std::string> PriorStore::evict_dirty() {
  std::vector<std::string> evicted;
  std::lock_guard lock(cache_mutex_);
  for (auto it = cache_.begin(); it != cache_.end();) {
    const Entry& e = it->second;
    bool dirty = false;
    if (root_ && !e.file.empty()) {
      const bool on_disk = std::filesystem::exists(e.file);
      if (on_disk != e.payload.has_value()) {
        dirty = true;
      } else if (on_disk) {
        ++file_reads_;
        dirty = fnv1a(read_text(e.file)) != e.content_hash;
      }
    }
    if (dirty) {
      evicted.push_back(it->first);
      it = cache_.erase(it);
    } else {
      ++it;
    }
  }
  return evicted;
}

void PriorStore::drop_cache() {
  std::lock_guard lock(cache_mutex_);
  cache_.clear();
}

StoreCounters PriorStore::counters() const {
  return {lookups_.load(), cache_hits_.load(), file_reads_.load(), file_writes_.load()};
}

void PriorStore::reset_counters() {
  lookups_ = 0;
  cache_hits_ = 0;
  file_reads_ = 0;
  file_writes_ = 0;
}

RelationLookup PriorStore::relation_lookup() {
  return [this](const RelationKey& key) { return load_pairwise(key); };
}

}  // namespace layoutforge
