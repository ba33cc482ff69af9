#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "msim/domain.hpp"
#include "msim/time.hpp"

namespace msim {

enum class RadioResource : std::uint8_t { kRx, kTx };
enum class RadioUse : std::uint8_t { kSession, kPageDecode, kProcedure, kRegistration, kGap };

std::string_view to_string(RadioResource r);
std::string_view to_string(RadioUse u);

using ReservationId = std::uint32_t;

struct Reservation {
  ReservationId id = 0;
  RadioResource resource = RadioResource::kRx;
  int sim = 0;
  SimTime start{0};
  SimTime end{0};
  RadioUse use = RadioUse::kSession;
};

struct RadioConflict {
  int blocked_by = -1;  // SIM holding the resource
  ReservationId reservation = 0;
};

/// Rx/Tx reservations of one device.
///
/// Reservations of the same SIM never conflict with each other. On a DSDA
/// device every SIM owns a receiver, so Rx never conflicts across SIMs; on a
/// DSDS device all SIMs share num_rx receivers. Tx is always shared.
class RadioArbiter {
 public:
  RadioArbiter(DualSimMode mode, int num_rx, int num_tx) : mode_(mode), num_rx_(num_rx), num_tx_(num_tx) {}

  std::variant<ReservationId, RadioConflict> reserve(RadioResource res, int sim, SimTime start,
                                                     SimTime end, RadioUse use);
  std::optional<RadioConflict> check(RadioResource res, int sim, SimTime start, SimTime end) const;

  // Earliest t >= from such that [t, t + len) is free for `sim`.
  SimTime earliest_free(RadioResource res, int sim, SimTime from, Duration len) const;

  // Shortens a reservation to end at `at` (no-op if it already ends earlier).
  void truncate(ReservationId id, SimTime at);
  // Removes [from, to) from a reservation, splitting it in two if needed.
  void carve(ReservationId id, SimTime from, SimTime to);

  const Reservation* find(ReservationId id) const;
  const std::vector<Reservation>& reservations() const { return reservations_; }
  int capacity(RadioResource res) const { return res == RadioResource::kRx ? num_rx_ : num_tx_; }
  DualSimMode mode() const { return mode_; }

 private:
  bool shared(RadioResource res) const { return res == RadioResource::kTx || mode_ == DualSimMode::kDsds; }

  DualSimMode mode_;
  int num_rx_;
  int num_tx_;
  ReservationId next_id_ = 1;
  std::vector<Reservation> reservations_;
};

}  // namespace msim
