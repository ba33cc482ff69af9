#pragma once

// Per-SIM registration, location tracking and the IDLE/INACTIVE/CONNECTED
// state machine.

#include <optional>
#include <vector>

#include "msim/domain.hpp"
#include "msim/paging.hpp"
#include "msim/rng.hpp"
#include "msim/topology.hpp"

namespace msim {

// Registers a DEREGISTERED SIM on `net` while camped on `cell`: the SIM ends
// up IDLE, its TA list is centered on the camped TA and fresh temporary ids
// are drawn from `ids`.
std::vector<SimMessage> register_sim(SimProfile& sim, const NetworkModel& net, CellId cell,
                                     RngStream& ids, SimTime now);

struct MoveResult {
  std::optional<SimMessage> update;  // TauRequest (4G), RauRequest (5G) or RnaUpdate
  TaId new_ta = 0;
};

// Applies a cell change. Moves inside the TA list take effect at once. A move
// out of the list returns the location update the UE must transmit; the SIM
// keeps its old registration until complete_location_update() is called,
// which is when the update has actually gone out. CONNECTED SIMs are tracked
// by the network, so their list simply follows them.
MoveResult on_move(SimProfile& sim, const NetworkModel& net, CellId new_cell,
                   const std::vector<TaId>& rna, SimTime now);

void complete_location_update(SimProfile& sim, const NetworkModel& net, TaId new_ta);

enum class TransitionTrigger : std::uint8_t {
  kPagingResponse,
  kServiceRequest,
  kResume,
  kRelease,
  kSuspend,
  kRanPagingFailure,
  kRadioLinkFailure,
};

struct TransitionResult {
  std::vector<SimMessage> messages;
  int units = 0;
  Duration latency{0};  // air/core delay of the signaling path
};

struct LinkDelays {
  Duration as = std::chrono::milliseconds(2);
  Duration nas = std::chrono::milliseconds(10);
  Duration inter = std::chrono::milliseconds(30);

  Duration of(Segment s) const {
    switch (s) {
      case Segment::kRan: return as;
      case Segment::kCn: return nas;
      case Segment::kInter: return inter;
    }
    return as;
  }
};

/// Moves a SIM to `target`.
///
/// Legal moves: IDLE<->CONNECTED in both generations; CONNECTED->INACTIVE,
/// INACTIVE->CONNECTED and INACTIVE->IDLE in 5G only. Anything else throws
/// kIllegalTransition. IDLE->CONNECTED costs 6 units (random access, service
/// request, RRC setup, context setup); INACTIVE->CONNECTED costs 3 (random
/// access, resume request, resume).
TransitionResult transition(SimProfile& sim, Generation g, RanState target, TransitionTrigger trigger,
                            const LinkDelays& delays, SimTime now);

// Signaling units of the path between two RAN states, without applying it.
int transition_units(RanState from, RanState to);

// ---------------------------------------------------------------- mobility

struct MobilityModel {
  Duration mean_dwell = std::chrono::seconds(60);  // kNever disables movement
  std::uint32_t spots = 64;                       // positions on the ring
};

struct MobilityStep {
  SimTime time{0};
  std::uint32_t spot = 0;
};

// Position of a device on the ring mapped onto a network's cells.
CellId cell_at(std::uint32_t spot, std::uint32_t spots, const TopologyModel& topo);

// Seeded Markov walk: exponential dwell, then one step left or right with
// equal probability. Returns the piecewise-constant trace up to `horizon`,
// starting with (0, start_spot).
std::vector<MobilityStep> mobility_trace(const MobilityModel& model, std::uint32_t start_spot,
                                         Duration horizon, RngStream& rng);

// One step of the walk above; exposed so the engine can draw lazily.
MobilityStep next_step(const MobilityModel& model, const MobilityStep& from, RngStream& rng);

}  // namespace msim
