#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msim/engine.hpp"
#include "msim/metrics.hpp"

namespace msim {

struct Replication {
  std::uint64_t seed = 0;
  std::uint64_t digest = 0;
  std::uint64_t events = 0;
  MetricsLedger ledger;
  std::optional<EventLog> log;  // kept only on request
};

/// Runs seeds first_seed .. first_seed + reps - 1 on up to `threads` worker
/// threads (0 = hardware concurrency). Results come back in seed order, so
/// the thread count never changes the output.
std::vector<Replication> run_replications(const Scenario& scenario, std::uint64_t first_seed, int reps,
                                          int threads = 0, bool keep_logs = false);

MetricsLedger merged_ledger(const std::vector<Replication>& reps);

}  // namespace msim
