#pragma once

// Reference implementations used only by the tests. Each one is written
// from first principles and shares no code with the library routine it
// checks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "msim/domain.hpp"
#include "msim/event_log.hpp"
#include "msim/paging.hpp"

namespace oracle {

// Applicability matrix transcribed row by row: RAN, CN, 5G, 4G.
inline constexpr std::array<std::array<bool, 4>, 14> kTable2 = {{
    {true, true, true, true},    // 1 paging cause
    {true, false, true, true},   // 2 short absence
    {true, true, true, false},   // 3 busy
    {true, true, true, true},    // 4 local leaving
    {true, true, true, true},    // 5 graceful leaving
    {false, true, true, true},   // 6 leave and return
    {true, true, true, false},   // 7 scheduling gap
    {false, true, true, false},  // 8 push notification
    {false, true, true, true},   // 9 non-3GPP notification
    {false, true, true, true},   // 10 SMS notification
    {false, true, true, false},  // 11 NAS parameters change
    {false, true, true, false},  // 12 alternative UE id
    {true, true, true, true},    // 13 paging offset
    {true, true, true, true},    // 14 consecutive POs
}};

struct Timing {
  std::uint32_t T = 32;
  std::uint32_t Ns = 4;
  std::int64_t frame_us = 10000;
  std::int64_t frame_offset_us = 0;
  std::int64_t extra_offset_us = 0;
};

// First window start of `id` on `t`, reduced into one DRX cycle.
inline std::int64_t first_start(std::uint64_t id, const Timing& t) {
  const std::int64_t pf = static_cast<std::int64_t>(id % t.T);
  const std::int64_t po = static_cast<std::int64_t>((id / t.T) % t.Ns);
  const std::int64_t cycle = t.frame_us * t.T;
  const std::int64_t s = t.frame_offset_us + t.extra_offset_us + pf * t.frame_us + po * (t.frame_us / t.Ns);
  return ((s % cycle) + cycle) % cycle;
}

struct Enumerated {
  std::int64_t windows = 0;
  std::int64_t colliding = 0;
};

// Walks every window of `a` across the hyper-period and tests it against
// every window of `b` that could touch it.
inline Enumerated enumerate_collisions(std::int64_t phase_a, std::int64_t period_a, std::int64_t lw_a,
                                       std::int64_t phase_b, std::int64_t period_b, std::int64_t lw_b) {
  Enumerated e;
  const std::int64_t h = std::lcm(period_a, period_b);
  for (std::int64_t sa = phase_a; sa < phase_a + h; sa += period_a) {
    ++e.windows;
    bool hit = false;
    for (std::int64_t sb = phase_b - 2 * period_b; sb < phase_a + h + period_b; sb += period_b) {
      if (sa < sb + lw_b && sb < sa + lw_a) {
        hit = true;
        break;
      }
    }
    if (hit) ++e.colliding;
  }
  return e;
}

// Peak number of SIMs holding an Rx grant at the same instant, per device,
// by a sweep line. Overlapping grants of one SIM count once.
inline std::map<std::uint32_t, int> peak_rx(const std::vector<msim::LogRecord>& log) {
  std::map<std::pair<std::uint32_t, int>, std::vector<std::pair<std::int64_t, std::int64_t>>> spans;
  for (const auto& r : log) {
    if (r.kind != msim::RecordKind::kRadioGrant || r.detail != 0) continue;
    if (r.value2 <= r.value) continue;
    spans[{r.device, r.sim}].push_back({r.value, r.value2});
  }
  std::map<std::uint32_t, std::vector<std::pair<std::int64_t, int>>> edges;
  for (auto& [key, v] : spans) {
    std::sort(v.begin(), v.end());
    std::int64_t s = v.front().first, e = v.front().second;
    for (std::size_t i = 1; i <= v.size(); ++i) {
      if (i < v.size() && v[i].first <= e) {
        e = std::max(e, v[i].second);
        continue;
      }
      edges[key.first].push_back({s, +1});
      edges[key.first].push_back({e, -1});
      if (i < v.size()) s = v[i].first, e = v[i].second;
    }
  }
  std::map<std::uint32_t, int> peak;
  for (auto& [dev, ev] : edges) {
    std::sort(ev.begin(), ev.end());  // at equal times the release (-1) sorts first
    int cur = 0, best = 0;
    for (const auto& [t, d] : ev) {
      cur += d;
      best = std::max(best, cur);
    }
    peak[dev] = best;
  }
  return peak;
}

// First-matching-rule scan with its own matching predicate.
inline std::optional<msim::PolicyAction> scan_policy(const msim::PolicyTable& table,
                                                     std::optional<msim::ServiceKind> incoming,
                                                     std::optional<msim::ServiceKind> activity) {
  using msim::ActivityMatch;
  using msim::ServiceKind;
  for (const auto& rule : table.rules) {
    if (rule.incoming.has_value() && (!incoming.has_value() || *rule.incoming != *incoming)) continue;
    bool ok = false;
    switch (rule.activity) {
      case ActivityMatch::kAny: ok = true; break;
      case ActivityMatch::kIdle: ok = !activity.has_value(); break;
      case ActivityMatch::kBusy: ok = activity.has_value(); break;
      case ActivityMatch::kInVoice: ok = activity == ServiceKind::kVoice; break;
      case ActivityMatch::kInSms: ok = activity == ServiceKind::kSms; break;
      case ActivityMatch::kInData: ok = activity == ServiceKind::kData; break;
      case ActivityMatch::kInEmergency: ok = activity == ServiceKind::kEmergency; break;
    }
    if (ok) return rule.action;
  }
  return std::nullopt;
}

// TA-list replay: number of location updates an always-idle SIM sends while
// walking `cells`, with a list of radius `radius` re-centered on each update.
inline int replay_updates(const std::vector<std::uint32_t>& cells, std::uint32_t cells_per_ta, std::uint32_t num_tas,
                          std::uint32_t radius) {
  auto ring_dist = [&](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t d = a > b ? a - b : b - a;
    return std::min(d, num_tas - d);
  };
  if (cells.empty()) return 0;
  std::uint32_t center = cells.front() / cells_per_ta;
  int updates = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const std::uint32_t ta = cells[i] / cells_per_ta;
    if (ring_dist(ta, center) > radius) {
      ++updates;
      center = ta;
    }
  }
  return updates;
}

}  // namespace oracle
