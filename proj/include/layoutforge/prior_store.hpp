#pragma once

// Persistence and caching for every prior artifact. One JSON file per
// pairwise relation, chain set and hyper key, under a two-level directory
// keyed by a hash of the key. Loads go through an in-memory cache (negative
// results included); a cache hit touches no file.

#include "layoutforge/extraction.hpp"
#include "layoutforge/hyper_relation.hpp"
#include "layoutforge/pattern_chain.hpp"
#include "layoutforge/scene_io.hpp"

#include <array>
#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace layoutforge {

Json pairwise_to_json(const PairwiseRelation& relation);
PairwiseRelation pairwise_from_json(const Json& doc, const std::string& source);
Json chains_to_json(const PatternChainSet& set);
PatternChainSet chains_from_json(const Json& doc, const RelationKey& key, const std::string& source);
Json hyper_to_json(const HyperRelation& relation);
HyperRelation hyper_from_json(const Json& doc, const std::string& source);

/// Canonical text of a stored document (stable key order, 2-space indent).
std::string canonical_text(const Json& doc);

enum class ChainLoadStatus { kFound, kNotFound, kStale };

struct ChainLoad {
  ChainLoadStatus status = ChainLoadStatus::kNotFound;
  std::shared_ptr<const PatternChainSet> set;
};

struct StoreCounters {
  std::size_t lookups = 0;
  std::size_t cache_hits = 0;
  std::size_t file_reads = 0;
  std::size_t file_writes = 0;
};

class PriorStore {
 public:
  /// Memory-only store.
  PriorStore();
  /// Store persisted under `root` (created on first write).
  explicit PriorStore(std::filesystem::path root);

  PriorStore(const PriorStore&) = delete;
  PriorStore& operator=(const PriorStore&) = delete;

  bool persistent() const { return root_.has_value(); }

  void save_pairwise(const PairwiseRelation& relation);
  /// nullptr when the relation does not exist. Throws IntegrityError on a
  /// corrupt file.
  std::shared_ptr<const PairwiseRelation> load_pairwise(const RelationKey& key);

  void save_chains(const PatternChainSet& set);
  /// kStale when the stored chains were built from a different prior list
  /// than `current_relation_hash`; the caller regenerates.
  ChainLoad load_chains(const RelationKey& key, const std::string& current_relation_hash);

  void save_hyper(const HyperRelation& relation);
  std::shared_ptr<const HyperRelation> load_hyper(const HyperKey& key);

  std::vector<RelationKey> pairwise_keys() const;
  std::vector<std::string> hyper_keys() const;

  /// Re-reads every cached file and evicts entries whose on-disk content hash
  /// no longer matches. Returns the evicted cache keys.
  std::vector<std::string> evict_dirty();
  /// Forgets everything cached (the next loads go to disk).
  void drop_cache();

  StoreCounters counters() const;
  void reset_counters();

  RelationLookup relation_lookup();

  std::filesystem::path path_for(std::string_view kind, const std::string& key) const;

 private:
  using Payload = std::variant<std::shared_ptr<const PairwiseRelation>,
                               std::shared_ptr<const PatternChainSet>,
                               std::shared_ptr<const HyperRelation>>;
  struct Entry {
    std::optional<Payload> payload;  // empty: known to be absent
    std::uint64_t content_hash = 0;
    std::filesystem::path file;
  };

  std::optional<Payload> load(std::string_view kind, const std::string& key,
                              const std::function<Payload(const Json&, const std::string&)>& decode);
  void save(std::string_view kind, const std::string& key, const Json& doc, Payload payload);
  std::mutex& key_lock(const std::string& cache_key);

  std::optional<std::filesystem::path> root_;
  mutable std::mutex cache_mutex_;
  std::map<std::string, Entry> cache_;
  std::array<std::mutex, 64> key_locks_;

  std::atomic<std::size_t> lookups_{0};
  std::atomic<std::size_t> cache_hits_{0};
  mutable std::atomic<std::size_t> file_reads_{0};
  std::atomic<std::size_t> file_writes_{0};
};

}  // namespace layoutforge
