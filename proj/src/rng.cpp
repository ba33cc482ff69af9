#include "msim/rng.hpp"

#include <cmath>
#include <limits>

namespace msim {

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + x % range;
}

double RngStream::exponential(double mean) {
  if (!(mean > 0.0)) return 0.0;
  return -mean * std::log1p(-uniform01());
}

Duration RngStream::exponential(Duration mean) {
  return Duration(static_cast<std::int64_t>(std::llround(exponential(static_cast<double>(mean.count())))));
}

}  // namespace msim
