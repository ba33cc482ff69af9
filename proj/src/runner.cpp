#include "msim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace msim {

std::vector<Replication> run_replications(const Scenario& scenario, std::uint64_t first_seed, int reps,
                                          int threads, bool keep_logs) {
  require_valid(scenario);
  std::vector<Replication> out(static_cast<std::size_t>(std::max(0, reps)));
  if (out.empty()) return out;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, reps);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < reps; i = next++) {
      try {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
        RunResult r = run(scenario, seed);
        Replication& rep = out[static_cast<std::size_t>(i)];
        rep.seed = seed;
        rep.digest = r.log.digest();
        rep.events = r.events_executed;
        rep.ledger = compute_ledger(r.log);
        if (keep_logs) rep.log = std::move(r.log);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

MetricsLedger merged_ledger(const std::vector<Replication>& reps) {
  MetricsLedger total;
  for (const auto& r : reps) total.merge(r.ledger);
  return total;
}

}  // namespace msim
