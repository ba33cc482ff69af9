#pragma once

#include <cstdint>

#include "msim/event_log.hpp"
#include "msim/scenario.hpp"

namespace msim {

struct RunResult {
  std::uint64_t seed = 0;
  EventLog log;
  std::uint64_t events_executed = 0;
  SimTime last_event{0};
};

/// Runs one replication of `scenario` with `seed`.
///
/// MT arrivals and mobility stop at the horizon; everything already in
/// flight (paging, services, holds) is played out so every MT event reaches
/// an outcome. Receiver on-time is clipped to the horizon. Identical
/// (scenario, seed) pairs yield identical logs. Throws Error(kConfigInvalid)
/// for an invalid scenario.
RunResult run(const Scenario& scenario, std::uint64_t seed);

}  // namespace msim
