#pragma once

// On-demand generation of hyper-relations. A request for a key that is not
// in the store returns immediately with a pending signal and enqueues one
// background task for that key; later requests see the stored result.

#include "layoutforge/hyper_relation.hpp"
#include "layoutforge/prior_store.hpp"

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace layoutforge {

class Executor {
 public:
  virtual ~Executor() = default;
  virtual void submit(std::function<void()> task) = 0;
};

/// Fixed-size worker pool. The destructor drains the queue before joining.
class ThreadPoolExecutor : public Executor {
 public:
  explicit ThreadPoolExecutor(std::size_t workers = 0);
  ~ThreadPoolExecutor() override;

  void submit(std::function<void()> task) override;
  /// Blocks until the queue is empty and no task is running.
  void wait_idle();
  std::size_t workers() const { return threads_.size(); }

 private:
  void run();

  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable idle_;
  std::deque<std::function<void()>> queue_;
  std::size_t running_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

/// Queues tasks until the caller runs them; used for deterministic tests.
class ManualExecutor : public Executor {
 public:
  void submit(std::function<void()> task) override;
  std::size_t pending() const;
  bool run_one();
  std::size_t run_all();

 private:
  mutable std::mutex mutex_;
  std::deque<std::function<void()>> queue_;
};

enum class HyperRequestStatus { kComplete, kPending, kFailed };

std::string_view to_string(HyperRequestStatus status);

struct HyperResponse {
  HyperRequestStatus status = HyperRequestStatus::kPending;
  std::shared_ptr<const HyperRelation> relation;  // set when complete
  std::string reason;                             // set when failed
};

class HyperScheduler {
 public:
  /// `seed` salts the per-key generator, so a key's priors depend only on
  /// (seed, key, pairwise priors).
  HyperScheduler(PriorStore& store, std::shared_ptr<Executor> executor,
                 HyperOptions options = {}, std::uint64_t seed = 0);
  ~HyperScheduler();

  HyperScheduler(const HyperScheduler&) = delete;
  HyperScheduler& operator=(const HyperScheduler&) = delete;

  /// Never blocks on generation.
  HyperResponse request(const HyperKey& key, const Catalog& catalog);
  /// Generates inline when the key is neither stored nor failed.
  HyperResponse request_blocking(const HyperKey& key, const Catalog& catalog);

  /// Allows failed keys to be regenerated on their next request.
  void forget_failures();

  std::size_t tasks_enqueued() const;
  std::size_t in_flight() const;
  std::size_t max_in_flight_per_key() const;

 private:
  struct State;
  HyperResponse lookup(const HyperKey& key);
  void generate(const HyperKey& key, const Catalog& catalog);

  PriorStore& store_;
  std::shared_ptr<Executor> executor_;
  HyperOptions options_;
  std::uint64_t seed_;
  std::shared_ptr<State> state_;
};

}  // namespace layoutforge
