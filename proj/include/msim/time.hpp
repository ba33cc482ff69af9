#pragma once

#include <chrono>
#include <cstdint>
#include <limits>

namespace msim {

// Simulated time is kept in integer microseconds from the start of a run.
using Duration = std::chrono::microseconds;
using SimTime = std::chrono::microseconds;

inline constexpr Duration kNever = Duration::max();

inline constexpr double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

inline constexpr Duration from_ms(double ms) {
  return Duration(static_cast<std::int64_t>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5)));
}

}  // namespace msim
