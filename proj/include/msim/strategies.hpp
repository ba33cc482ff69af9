#pragma once

// The fourteen multi-SIM coordination solutions: their applicability
// matrix, static cost metadata, stack validation and the pure decision
// helpers the engine calls when a solution is active.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msim/domain.hpp"
#include "msim/mobility.hpp"
#include "msim/paging.hpp"
#include "msim/rng.hpp"

namespace msim {

enum class StrategyId : std::uint8_t {
  kPagingCause = 1,
  kShortAbsence,
  kBusyIndication,
  kLocalLeaving,
  kGracefulLeaving,
  kLeaveAndReturn,
  kSchedulingGap,
  kPushNotification,
  kNon3gppNotification,
  kSmsNotification,
  kNasParameterChange,
  kAlternativeUeId,
  kPagingOffset,
  kConsecutivePos,
};

inline constexpr int kNumStrategies = 14;

enum class StrategyGroup : std::uint8_t { kGeneral, kSingleRxTxNotify, kCollisionAvoidance };
enum class Deployment : std::uint8_t { kRan, kCn };

std::string_view to_string(StrategyGroup g);
std::string_view to_string(Deployment d);
std::optional<Deployment> parse_deployment(std::string_view s);

struct StrategyDescriptor {
  StrategyId id;
  std::string_view name;
  std::string_view key;  // snake_case name used in scenario files
  StrategyGroup group;
  bool ran_based;
  bool cn_based;
  bool supports_5g;
  bool supports_4g;

  int number() const { return static_cast<int>(id); }
  bool supports(Generation g) const { return g == Generation::k5G ? supports_5g : supports_4g; }
  bool supports(Deployment d) const { return d == Deployment::kRan ? ran_based : cn_based; }
  Deployment default_deployment() const { return ran_based ? Deployment::kRan : Deployment::kCn; }
};

const std::array<StrategyDescriptor, kNumStrategies>& strategy_table();
const StrategyDescriptor& descriptor(StrategyId id);
std::optional<StrategyId> strategy_from_number(int n);
// Accepts the number ("3"), the key ("busy_indication") or the display name.
std::optional<StrategyId> parse_strategy(std::string_view s);

/// What a scenario looks like from the matrix's point of view.
struct ScenarioProfile {
  std::set<Generation> generations;
  std::optional<Deployment> deployment;  // nullopt: either basing is fine
};

// True iff the strategy supports the requested basing (when given) and at
// least one of the scenario's generations. Per-SIM gating happens at run
// time: a strategy only acts on SIMs whose network generation it supports.
bool applicability(StrategyId id, const ScenarioProfile& scenario);

// ------------------------------------------------------------- complexity

struct StrategyCost {
  std::vector<MsgKind> new_messages;  // message kinds introduced or extended
  std::vector<Node> impacted_nodes;   // node types whose handler changes
};

// Static metadata; scenario-independent.
StrategyCost strategy_cost(StrategyId id, Deployment d);
int complexity_score(StrategyId id, Deployment d);

// ------------------------------------------------------------------ stack

struct StrategyParams {
  Duration absence_duration = std::chrono::milliseconds(100);
  bool absence_discards_data = true;
  bool busy_in_inactive = false;
  bool local_leave_suspend = false;
  Duration inactive_threshold = std::chrono::seconds(1);
  Duration hold_interval = std::chrono::seconds(5);
  double gap_grant_probability = 1.0;
  Duration push_delay = std::chrono::milliseconds(200);
  Duration user_plane_delay = std::chrono::milliseconds(10);
  Duration sms_min_delay = std::chrono::milliseconds(500);
  Duration sms_mean_delay = std::chrono::seconds(2);
  int guti_fit_tries = 8;
  Duration offset_grid = std::chrono::microseconds(500);
};

struct StrategyStack {
  std::vector<StrategyId> active;
  std::map<StrategyId, Deployment> deployment;  // overrides the default basing
  StrategyParams params;

  bool has(StrategyId id) const;
  Deployment basing(StrategyId id) const;
  // Position in `active`, or -1.
  int position(StrategyId id) const;
};

// Every violation found, in a stable order; empty means valid.
std::vector<std::string> validate_stack(const StrategyStack& stack, const ScenarioProfile& scenario,
                                        bool n3iwf_registered);

// ---------------------------------------------------------- pure helpers

struct OffsetAssignment {
  std::vector<Duration> offsets;  // one per schedule, first SIM keeps 0
  bool feasible = true;
};

// First-fit over the grid [0, period) in SIM order: each SIM takes the
// smallest offset whose shifted schedule overlaps no earlier SIM. The input
// schedules carry no offset yet.
OffsetAssignment assign_paging_offsets(const std::vector<PagingSchedule>& base, Duration grid,
                                       int num_rx);

// Shifts a schedule's phase by `offset`.
PagingSchedule shifted(const PagingSchedule& s, Duration offset);

// True iff `s` overlaps none of `others` (with a single receiver).
bool collision_free(const PagingSchedule& s, const std::vector<PagingSchedule>& others, int num_rx);

// Smallest id > base_id (searching one full T*Ns residue cycle) whose
// occasions overlap none of `others`.
std::optional<std::uint64_t> choose_alternative_id(std::uint64_t base_id, const PagingConfig& cfg,
                                                   Duration sim_offset, Duration listen_window,
                                                   const std::vector<PagingSchedule>& others,
                                                   int num_rx);

struct NasChangeResult {
  std::optional<std::uint32_t> new_guti;  // fitting temporary id
  std::optional<Duration> offset;         // fallback when no id fits
  int tries = 0;
};

// The AMF draws up to `tries` candidate ids; the first collision-free one is
// kept. Otherwise it assigns a first-fit paging offset to `current`; if no
// offset fits either, both fields stay empty.
NasChangeResult nas_parameter_change(const PagingSchedule& current, const PagingConfig& cfg,
                                     Duration listen_window,
                                     const std::vector<PagingSchedule>& others, int num_rx,
                                     int tries, Duration grid, RngStream& rng);

// Graceful leaving: 5G and a short expected absence park the UE in
// INACTIVE, anything else goes to IDLE.
RanState graceful_target_state(Generation g, Duration expected_absence, Duration threshold);

// Delay of an SMS used as a notification bearer: min + Exp(mean - min).
Duration sms_delay(RngStream& rng, Duration min, Duration mean);

enum class LeaveMode : std::uint8_t { kUncoordinated, kLocal, kGraceful, kLeaveAndReturn, kShortAbsence };
std::string_view to_string(LeaveMode m);

// Time from the leave decision until the radio is tuned to the other SIM.
// Local leaving and short absence switch at once; graceful leaving waits for
// the notice and the release; leave-and-return signals intent, holds paging
// in the CN and waits for the release.
Duration leave_latency(LeaveMode mode, Deployment d, const LinkDelays& delays, Duration switch_delay);

}  // namespace msim
