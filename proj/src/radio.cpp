#include "msim/radio.hpp"

#include <algorithm>
#include <map>

namespace msim {

std::string_view to_string(RadioResource r) { return r == RadioResource::kRx ? "RX" : "TX"; }

std::string_view to_string(RadioUse u) {
  switch (u) {
    case RadioUse::kSession: return "SESSION";
    case RadioUse::kPageDecode: return "PAGE_DECODE";
    case RadioUse::kProcedure: return "PROCEDURE";
    case RadioUse::kRegistration: return "REGISTRATION";
    case RadioUse::kGap: return "GAP";
  }
  return "?";
}

std::optional<RadioConflict> RadioArbiter::check(RadioResource res, int sim, SimTime start,
                                                 SimTime end) const {
  if (end <= start || !shared(res)) return std::nullopt;
  std::vector<const Reservation*> overlapping;
  for (const auto& r : reservations_)
    if (r.resource == res && r.sim != sim && r.start < end && start < r.end) overlapping.push_back(&r);
  if (overlapping.empty()) return std::nullopt;

  const int cap = capacity(res);
  if (cap <= 1) return RadioConflict{overlapping.front()->sim, overlapping.front()->id};

  // Sweep: at every boundary inside [start, end) count distinct other SIMs.
  std::vector<SimTime> points{start};
  for (const auto* r : overlapping) {
    if (r->start > start) points.push_back(r->start);
  }
  for (SimTime p : points) {
    std::map<int, const Reservation*> holders;
    for (const auto* r : overlapping)
      if (r->start <= p && p < r->end) holders.emplace(r->sim, r);
    if (static_cast<int>(holders.size()) + 1 > cap)
      return RadioConflict{holders.begin()->first, holders.begin()->second->id};
  }
  return std::nullopt;
}

std::variant<ReservationId, RadioConflict> RadioArbiter::reserve(RadioResource res, int sim, SimTime start,
                                                                 SimTime end, RadioUse use) {
  if (auto c = check(res, sim, start, end)) return *c;
  const ReservationId id = next_id_++;
  reservations_.push_back({id, res, sim, start, end, use});
  return id;
}

SimTime RadioArbiter::earliest_free(RadioResource res, int sim, SimTime from, Duration len) const {
  SimTime t = from;
  // Each conflict pushes t to the end of the blocking reservation, so this
  // terminates after at most one pass per reservation.
  for (std::size_t guard = 0; guard <= reservations_.size(); ++guard) {
    const auto c = check(res, sim, t, t + len);
    if (!c) return t;
    t = find(c->reservation)->end;
  }
  return t;
}

const Reservation* RadioArbiter::find(ReservationId id) const {
  for (const auto& r : reservations_)
    if (r.id == id) return &r;
  return nullptr;
}

void RadioArbiter::truncate(ReservationId id, SimTime at) {
  for (auto& r : reservations_) {
    if (r.id != id) continue;
    r.end = std::min(r.end, std::max(at, r.start));
    return;
  }
}

void RadioArbiter::carve(ReservationId id, SimTime from, SimTime to) {
  for (std::size_t i = 0; i < reservations_.size(); ++i) {
    Reservation& r = reservations_[i];
    if (r.id != id) continue;
    if (to <= r.start || from >= r.end) return;
    if (from <= r.start) {
      r.start = std::min(to, r.end);
    } else if (to >= r.end) {
      r.end = from;
    } else {
      Reservation tail = r;
      tail.id = next_id_++;
      tail.start = to;
      r.end = from;
      reservations_.push_back(tail);
    }
    return;
  }
}

}  // namespace msim
