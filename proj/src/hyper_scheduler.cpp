#include "layoutforge/hyper_scheduler.hpp"

#include "layoutforge/error.hpp"

#include <algorithm>

namespace layoutforge {

ThreadPoolExecutor::ThreadPoolExecutor(std::size_t workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t i = 0; i < workers; ++i) threads_.emplace_back([this] { run(); });
}

ThreadPoolExecutor::~ThreadPoolExecutor() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void ThreadPoolExecutor::submit(std::function<void()> task) {
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(task));
  }
  wake_.notify_one();
}

void ThreadPoolExecutor::wait_idle() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [this] { return queue_.empty() && running_ == 0; });
}

void ThreadPoolExecutor::run() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      ++running_;
    }
    task();
    {
      std::lock_guard lock(mutex_);
      --running_;
      if (queue_.empty() && running_ == 0) idle_.notify_all();
    }
  }
}

void ManualExecutor::submit(std::function<void()> task) {
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(task));
}

std::size_t ManualExecutor::pending() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

bool ManualExecutor::run_one() {
  std::function<void()> task;
  {
    std::lock_guard lock(mutex_);
    if (queue_.empty()) return false;
    task = std::move(queue_.front());
    queue_.pop_front();
  }
  task();
  return true;
}

std::size_t ManualExecutor::run_all() {
  std::size_t n = 0;
  while (run_one()) ++n;
  return n;
}

std::string_view to_string(HyperRequestStatus status) {
  switch (status) {
    case HyperRequestStatus::kComplete: return "complete";
    case HyperRequestStatus::kPending: return "pending";
    case HyperRequestStatus::kFailed: return "failed";
  }
  return "pending";
}

struct HyperScheduler::State {
  mutable std::mutex mutex;
  std::set<std::string> in_flight;
  std::map<std::string, std::string> failures;
  std::map<std::string, std::size_t> concurrent;
  std::size_t max_concurrent = 0;
  std::size_t enqueued = 0;
};

HyperScheduler::HyperScheduler(PriorStore& store, std::shared_ptr<Executor> executor,
                               HyperOptions options, std::uint64_t seed)
    : store_(store),
      executor_(std::move(executor)),
      options_(std::move(options)),
      seed_(seed),
      state_(std::make_shared<State>()) {}

HyperScheduler::~HyperScheduler() {
  // Background tasks reference the store; a pool drains them on destruction,
  // but the scheduler may be destroyed first, so wait here when possible.
  if (auto* pool = dynamic_cast<ThreadPoolExecutor*>(executor_.get())) pool->wait_idle();
}

HyperResponse HyperScheduler::lookup(const HyperKey& key) {
  {
    std::lock_guard lock(state_->mutex);
    if (auto it = state_->failures.find(key.str()); it != state_->failures.end()) {
      return {HyperRequestStatus::kFailed, nullptr, it->second};
    }
  }
  if (auto stored = store_.load_hyper(key)) {
    if (stored->status == HyperStatus::kComplete) {
      return {HyperRequestStatus::kComplete, stored, {}};
    }
    if (stored->status == HyperStatus::kFailed) {
      return {HyperRequestStatus::kFailed, nullptr, stored->reason};
    }
  }
  return {HyperRequestStatus::kPending, nullptr, {}};
}

void HyperScheduler::generate(const HyperKey& key, const Catalog& catalog) {
  const std::string k = key.str();
  {
    std::lock_guard lock(state_->mutex);
    const std::size_t n = ++state_->concurrent[k];
    state_->max_concurrent = std::max(state_->max_concurrent, n);
  }
  Rng rng = seeded_rng(seed_, k);
  HyperRelation relation;
  try {
    relation = enrich_hyper_relation(key, store_.relation_lookup(), catalog, rng, options_);
  } catch (const Error& e) {
    relation.key = key;
    relation.status = HyperStatus::kFailed;
    relation.reason = e.what();
  }
  if (relation.status == HyperStatus::kComplete) store_.save_hyper(relation);
  std::lock_guard lock(state_->mutex);
  if (relation.status != HyperStatus::kComplete) state_->failures[k] = relation.reason;
  --state_->concurrent[k];
}

HyperResponse HyperScheduler::request(const HyperKey& key, const Catalog& catalog) {
  HyperResponse response = lookup(key);
  if (response.status != HyperRequestStatus::kPending) return response;
  const std::string k = key.str();
  {
    std::lock_guard lock(state_->mutex);
    if (!state_->in_flight.insert(k).second) return response;
    ++state_->enqueued;
  }
  executor_->submit([this, state = state_, key, catalog, k] {
    generate(key, catalog);
    std::lock_guard lock(state->mutex);
    state->in_flight.erase(k);
  });
  return response;
}

HyperResponse HyperScheduler::request_blocking(const HyperKey& key, const Catalog& catalog) {
  HyperResponse response = lookup(key);
  if (response.status != HyperRequestStatus::kPending) return response;
  const std::string k = key.str();
  {
    std::lock_guard lock(state_->mutex);
    if (!state_->in_flight.insert(k).second) return response;
  }
  generate(key, catalog);
  {
    std::lock_guard lock(state_->mutex);
    state_->in_flight.erase(k);
  }
  return lookup(key);
}

void HyperScheduler::forget_failures() {
  std::lock_guard lock(state_->mutex);
  state_->failures.clear();
}

std::size_t HyperScheduler::tasks_enqueued() const {
  std::lock_guard lock(state_->mutex);
  return state_->enqueued;
}

std::size_t HyperScheduler::in_flight() const {
  std::lock_guard lock(state_->mutex);
  return state_->in_flight.size();
}

std::size_t HyperScheduler::max_in_flight_per_key() const {
  std::lock_guard lock(state_->mutex);
  return state_->max_concurrent;
}

}  // namespace layoutforge
