#pragma once

// Paging schedules, occasion collisions and the paging/escalation procedure.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "msim/domain.hpp"
#include "msim/time.hpp"
#include "msim/topology.hpp"

namespace msim {

enum class PagingScope : std::uint8_t { kLastCell, kTaList, kRna, kFullRegistrationArea };
std::string_view to_string(PagingScope s);

struct PagingConfig {
  std::uint32_t drx_cycle_frames = 32;   // T, a power of two
  std::uint32_t occasions_per_frame = 4; // Ns in {1, 2, 4}
  Duration frame_duration = std::chrono::milliseconds(10);
  Duration frame_offset{0};              // per-PLMN clock misalignment, [0, frame)
  int max_attempts = 3;                  // per escalation level
  std::vector<PagingScope> escalation_levels = {PagingScope::kLastCell, PagingScope::kTaList,
                                                PagingScope::kFullRegistrationArea};

  Duration cycle_length() const { return frame_duration * drx_cycle_frames; }
  Duration occasion_spacing() const { return frame_duration / occasions_per_frame; }
  Duration default_listen_window() const { return occasion_spacing(); }
  void validate() const;
};

struct PagingOccasion {
  std::uint32_t pf = 0;
  std::uint32_t po = 0;
  NetworkId plmn = 0;

  friend bool operator==(const PagingOccasion&, const PagingOccasion&) = default;
};

// pf = id mod T, po = floor(id / T) mod Ns.
PagingOccasion compute_occasion(std::uint64_t ue_id_value, const PagingConfig& cfg,
                                NetworkId plmn = 0);

// Start instants of every occurrence of `occ` in [0, horizon).
std::vector<SimTime> occasion_wall_times(const PagingOccasion& occ, const PagingConfig& cfg,
                                         Duration horizon);

/// Periodic listen windows of one SIM on the simulation clock.
///
/// Window k starts at phase + k * period and lasts listen_window. `phase`
/// folds the PLMN frame offset, any per-SIM offset and the PF/PO position.
struct PagingSchedule {
  PagingOccasion occasion;
  Duration period{0};
  Duration phase{0};
  Duration listen_window{0};
  Duration spacing{0};  // distance between consecutive occasion slots

  static PagingSchedule make(const PagingOccasion& occ, const PagingConfig& cfg,
                             Duration sim_offset = Duration::zero(),
                             Duration listen_window = Duration::zero());

  SimTime first_at_or_after(SimTime t) const;
  SimTime next_after(SimTime t) const { return first_at_or_after(t + Duration(1)); }
  // Number of window starts in [from, to).
  std::int64_t count_in(SimTime from, SimTime to) const;
  // True if any window of this schedule intersects [start, start + len).
  bool overlaps(SimTime start, Duration len) const;

  friend bool operator==(const PagingSchedule&, const PagingSchedule&) = default;
};

Duration hyper_period(const PagingSchedule& a, const PagingSchedule& b);

struct CollisionReport {
  bool systematic = false;
  double fraction_colliding = 0.0;
  std::int64_t occurrences = 0;  // occurrences of a per hyper-period
  std::int64_t colliding = 0;
};

// Fraction of a's windows that overlap some window of b over the hyper-period.
// Receivers are only shared when num_rx == 1; otherwise nothing collides.
CollisionReport detect_collision(const PagingSchedule& a, const PagingSchedule& b, int num_rx = 1);

CollisionReport detect_collision(const PagingOccasion& occ_a, const PagingConfig& cfg_a,
                                 const PagingOccasion& occ_b, const PagingConfig& cfg_b,
                                 Duration listen_window, int num_rx = 1);

// ----------------------------------------------------------- procedure

enum class PagingKind : std::uint8_t { kCn, kRan };

struct PagingOutcome {
  bool responded = false;
  bool busy = false;  // the UE answered with a busy indication
  int attempts_used = 0;
  std::uint64_t cells_paged = 0;
  bool escalated = false;
  bool buffer_discarded = false;
  std::optional<ErrorCode> error;
};

/// Attempt and escalation bookkeeping for one paging procedure.
///
/// The procedure starts at level 0 and spends up to `max_attempts` attempts
/// per level before widening. Each attempt pages every cell of the current
/// scope once.
class PagingProcedure {
 public:
  enum class Step { kAnswered, kRetry, kEscalated, kExhausted };

  PagingProcedure(PagingKind kind, std::vector<PagingScope> levels,
                  std::vector<std::uint64_t> level_cells, int max_attempts);

  PagingKind kind() const { return kind_; }
  int level() const { return level_; }
  PagingScope scope() const { return levels_[static_cast<std::size_t>(level_)]; }
  std::uint64_t scope_cells() const { return level_cells_[static_cast<std::size_t>(level_)]; }
  int attempt_in_level() const { return attempt_in_level_; }
  int attempts_used() const { return attempts_used_; }
  std::uint64_t cells_paged() const { return cells_paged_; }
  bool escalated() const { return escalated_; }
  bool finished() const { return finished_; }

  // Accounts one attempt at the current scope.
  Step record_attempt(bool answered);
  // Replace the per-level cell counts, e.g. after the TA list changed.
  void set_level_cells(std::vector<std::uint64_t> cells) { level_cells_ = std::move(cells); }

  PagingOutcome outcome() const;

 private:
  PagingKind kind_;
  std::vector<PagingScope> levels_;
  std::vector<std::uint64_t> level_cells_;
  int max_attempts_;
  int level_ = 0;
  int attempt_in_level_ = 0;
  int attempts_used_ = 0;
  std::uint64_t cells_paged_ = 0;
  bool escalated_ = false;
  bool answered_ = false;
  bool finished_ = false;
};

struct NetworkModel {
  NetworkId id = 0;
  std::string name;
  std::string mno;
  Generation generation = Generation::k5G;
  TopologyModel topology;
  PagingConfig paging;
  bool suspend_on_release = true;  // 5G RAN parks released UEs in INACTIVE
};

// Identity value that drives a SIM's paging timing on `net`.
std::uint64_t paging_identity(const SimProfile& sim, Generation g, PagingKind kind);

std::uint64_t scope_cells(PagingScope scope, const TopologyModel& topo, Generation g,
                          const std::vector<TaId>& ta_list, const std::vector<TaId>& rna);
bool scope_contains(PagingScope scope, const TopologyModel& topo, Generation g,
                    const std::vector<TaId>& ta_list, const std::vector<TaId>& rna,
                    CellId last_cell, CellId cell);

struct PageAttempt {
  SimTime time{0};
  int level = 0;
  PagingScope scope = PagingScope::kLastCell;
  std::uint64_t cells = 0;
  int attempt = 0;
  std::optional<ServiceType> cause;
};

enum class PageReply : std::uint8_t { kNoListener, kSilent, kBusy, kAnswered };

using PageResponder = std::function<PageReply(const PageAttempt&)>;

// Synchronous drivers that step a PagingProcedure through the UE's
// successive occasions, asking `ue` how each attempt lands.
PagingOutcome run_cn_paging(const NetworkModel& net, const SimProfile& sim,
                            std::optional<ServiceType> cause, SimTime start,
                            const PageResponder& ue,
                            std::optional<PagingSchedule> schedule = std::nullopt);

PagingOutcome run_ran_paging(const NetworkModel& net, const SimProfile& sim,
                             const std::vector<TaId>& rna, SimTime start, const PageResponder& ue,
                             std::optional<PagingSchedule> schedule = std::nullopt);

}  // namespace msim
