#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "msim/time.hpp"

namespace msim {

// What a random stream is used for. Each (run seed, device, sim, purpose)
// tuple owns an independent stream, so enabling a strategy never shifts the
// draws of unrelated entities.
enum class StreamPurpose : std::uint32_t {
  kIdentity = 1,
  kTemporalId,
  kTraffic,
  kServiceDuration,
  kMobility,
  kRadioLoss,
  kGapGrant,
  kSmsDelay,
  kGutiFit,
};

// SplitMix64 finalizer. Used only to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::uint64_t device,
                                           std::uint64_t sim, StreamPurpose purpose) {
  std::uint64_t h = splitmix64(run_seed);
  h = splitmix64(h ^ device);
  h = splitmix64(h ^ (sim + 0x100));
  return splitmix64(h ^ static_cast<std::uint64_t>(purpose));
}

/// A seeded random source backed by std::mt19937_64.
///
/// The engine is fully specified by the standard, so streams are
/// reproducible across toolchains. Distribution transforms are done here by
/// inverse CDF instead of <random> distributions, whose output is
/// implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  RngStream(std::uint64_t run_seed, std::uint64_t device, std::uint64_t sim, StreamPurpose purpose)
      : engine_(derive_stream_seed(run_seed, device, sim, purpose)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Upper 32 bits of the next draw.
  std::uint32_t next_u32() { return static_cast<std::uint32_t>(engine_() >> 32); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], rejection sampled.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  bool bernoulli(double p) { return p > 0.0 && uniform01() < p; }

  double exponential(double mean);
  Duration exponential(Duration mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace msim
