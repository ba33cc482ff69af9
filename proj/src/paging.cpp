#include "msim/paging.hpp"

#include <numeric>
#include <stdexcept>

namespace msim {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Number of k >= 0 with phase + k * period < x.
std::int64_t starts_before(const PagingSchedule& s, SimTime x) {
  const std::int64_t rel = (x - s.phase).count();
  if (rel <= 0) return 0;
  const std::int64_t p = s.period.count();
  return (rel + p - 1) / p;
}

}  // namespace

std::string_view to_string(PagingScope s) {
  switch (s) {
    case PagingScope::kLastCell: return "LAST_CELL";
    case PagingScope::kTaList: return "TA_LIST";
    case PagingScope::kRna: return "RNA";
    case PagingScope::kFullRegistrationArea: return "FULL_REGISTRATION_AREA";
  }
  return "?";
}

void PagingConfig::validate() const {
  const auto t = drx_cycle_frames;
  if (t == 0 || (t & (t - 1)) != 0)
    throw Error(ErrorCode::kConfigInvalid, "drx_cycle_frames must be a power of two");
  if (occasions_per_frame != 1 && occasions_per_frame != 2 && occasions_per_frame != 4)
    throw Error(ErrorCode::kConfigInvalid, "occasions_per_frame must be 1, 2 or 4");
  if (frame_duration <= Duration::zero() || frame_duration.count() % occasions_per_frame != 0)
    throw Error(ErrorCode::kConfigInvalid, "frame_duration must split evenly into occasions");
  if (frame_offset < Duration::zero() || frame_offset >= frame_duration)
    throw Error(ErrorCode::kConfigInvalid, "frame_offset must lie in [0, frame_duration)");
  if (max_attempts < 1) throw Error(ErrorCode::kConfigInvalid, "max_attempts must be >= 1");
  if (escalation_levels.empty())
    throw Error(ErrorCode::kConfigInvalid, "escalation_levels must not be empty");
}

PagingOccasion compute_occasion(std::uint64_t ue_id_value, const PagingConfig& cfg, NetworkId plmn) {
  const std::uint64_t t = cfg.drx_cycle_frames;
  return PagingOccasion{static_cast<std::uint32_t>(ue_id_value % t),
                        static_cast<std::uint32_t>((ue_id_value / t) % cfg.occasions_per_frame), plmn};
}

std::vector<SimTime> occasion_wall_times(const PagingOccasion& occ, const PagingConfig& cfg,
                                         Duration horizon) {
  std::vector<SimTime> out;
  const Duration spacing = cfg.occasion_spacing();
  for (std::int64_t k = 0;; ++k) {
    const SimTime t = cfg.frame_offset +
                      cfg.frame_duration * (k * cfg.drx_cycle_frames + occ.pf) + spacing * occ.po;
    if (t >= horizon) break;
    out.push_back(t);
  }
  return out;
}

PagingSchedule PagingSchedule::make(const PagingOccasion& occ, const PagingConfig& cfg,
                                    Duration sim_offset, Duration listen_window) {
  PagingSchedule s;
  s.occasion = occ;
  s.period = cfg.cycle_length();
  s.spacing = cfg.occasion_spacing();
  s.listen_window = listen_window > Duration::zero() ? listen_window : cfg.default_listen_window();
  const Duration raw = cfg.frame_offset + sim_offset + cfg.frame_duration * occ.pf + s.spacing * occ.po;
  s.phase = Duration(floor_mod(raw.count(), s.period.count()));
  return s;
}

SimTime PagingSchedule::first_at_or_after(SimTime t) const {
  return phase + period * starts_before(*this, t);
}

std::int64_t PagingSchedule::count_in(SimTime from, SimTime to) const {
  if (to <= from) return 0;
  return starts_before(*this, to) - starts_before(*this, from);
}

bool PagingSchedule::overlaps(SimTime start, Duration len) const {
  if (len <= Duration::zero()) return false;
  return first_at_or_after(start - listen_window + Duration(1)) < start + len;
}

Duration hyper_period(const PagingSchedule& a, const PagingSchedule& b) {
  return Duration(std::lcm(a.period.count(), b.period.count()));
}

CollisionReport detect_collision(const PagingSchedule& a, const PagingSchedule& b, int num_rx) {
  CollisionReport rep;
  const Duration h = hyper_period(a, b);
  rep.occurrences = h / a.period;
  if (num_rx >= 2) return rep;

  const std::int64_t pb = b.period.count();
  for (std::int64_t k = 0; k < rep.occurrences; ++k) {
    const std::int64_t ta = (a.phase + a.period * k).count();
    // Distance from the latest b window start at or before ta.
    const std::int64_t d = floor_mod(ta - b.phase.count(), pb);
    if (d < b.listen_window.count() || pb - d < a.listen_window.count()) ++rep.colliding;
  }
  rep.fraction_colliding =
      rep.occurrences > 0 ? static_cast<double>(rep.colliding) / static_cast<double>(rep.occurrences) : 0.0;
  rep.systematic = rep.occurrences > 0 && rep.colliding == rep.occurrences;
  return rep;
}

CollisionReport detect_collision(const PagingOccasion& occ_a, const PagingConfig& cfg_a,
                                 const PagingOccasion& occ_b, const PagingConfig& cfg_b,
                                 Duration listen_window, int num_rx) {
  return detect_collision(PagingSchedule::make(occ_a, cfg_a, Duration::zero(), listen_window),
                          PagingSchedule::make(occ_b, cfg_b, Duration::zero(), listen_window), num_rx);
}

// ------------------------------------------------------------- procedure

PagingProcedure::PagingProcedure(PagingKind kind, std::vector<PagingScope> levels,
                                 std::vector<std::uint64_t> level_cells, int max_attempts)
    : kind_(kind),
      levels_(std::move(levels)),
      level_cells_(std::move(level_cells)),
      max_attempts_(max_attempts) {
  if (levels_.empty() || levels_.size() != level_cells_.size() || max_attempts_ < 1)
    throw std::invalid_argument("paging procedure needs matching levels and max_attempts >= 1");
}

PagingProcedure::Step PagingProcedure::record_attempt(bool answered) {
  if (finished_) throw std::logic_error("paging procedure already finished");
  cells_paged_ += scope_cells();
  ++attempts_used_;
  ++attempt_in_level_;
  if (answered) {
    answered_ = true;
    finished_ = true;
    return Step::kAnswered;
  }
  if (attempt_in_level_ < max_attempts_) return Step::kRetry;
  if (static_cast<std::size_t>(level_) + 1 < levels_.size()) {
    ++level_;
    attempt_in_level_ = 0;
    escalated_ = true;
    return Step::kEscalated;
  }
  finished_ = true;
  return Step::kExhausted;
}

PagingOutcome PagingProcedure::outcome() const {
  PagingOutcome o;
  o.responded = answered_;
  o.attempts_used = attempts_used_;
  o.cells_paged = cells_paged_;
  o.escalated = escalated_;
  if (finished_ && !answered_)
    o.error = kind_ == PagingKind::kCn ? ErrorCode::kPagingFailed : ErrorCode::kRanPagingFailed;
  return o;
}

// ----------------------------------------------------------- helpers

std::uint64_t paging_identity(const SimProfile& sim, Generation g, PagingKind kind) {
  if (g == Generation::k4G) return sim.identity.imsi;
  return kind == PagingKind::kCn ? sim.identity.temporal_cn_id : sim.identity.temporal_ran_id;
}

std::uint64_t scope_cells(PagingScope scope, const TopologyModel& topo, Generation g,
                          const std::vector<TaId>& ta_list, const std::vector<TaId>& rna) {
  switch (scope) {
    case PagingScope::kLastCell: return 1;
    case PagingScope::kTaList: return topo.cells_in(ta_list);
    case PagingScope::kRna: return topo.cells_in(rna);
    case PagingScope::kFullRegistrationArea: return topo.registration_area_cells(ta_list, g);
  }
  return 0;
}

bool scope_contains(PagingScope scope, const TopologyModel& topo, Generation g,
                    const std::vector<TaId>& ta_list, const std::vector<TaId>& rna,
                    CellId last_cell, CellId cell) {
  switch (scope) {
    case PagingScope::kLastCell: return cell == last_cell;
    case PagingScope::kTaList: return contains(ta_list, topo.ta_of(cell));
    case PagingScope::kRna: return contains(rna, topo.ta_of(cell));
    case PagingScope::kFullRegistrationArea: return topo.in_registration_area(cell, ta_list, g);
  }
  return false;
}

namespace {

PagingOutcome drive(PagingProcedure proc, const PagingSchedule& schedule, SimTime start,
                    std::optional<ServiceType> cause, const PageResponder& ue) {
  SimTime t = schedule.first_at_or_after(start);
  bool busy = false;
  for (;;) {
    const PageAttempt attempt{t, proc.level(), proc.scope(), proc.scope_cells(), proc.attempts_used(), cause};
    const PageReply reply = ue(attempt);
    busy = reply == PageReply::kBusy;
    const auto step = proc.record_attempt(reply == PageReply::kAnswered || busy);
    if (step == PagingProcedure::Step::kAnswered || step == PagingProcedure::Step::kExhausted) break;
    t = schedule.next_after(t);
  }
  PagingOutcome out = proc.outcome();
  if (busy) out.responded = false;
  out.busy = busy;
  return out;
}

}  // namespace

PagingOutcome run_cn_paging(const NetworkModel& net, const SimProfile& sim,
                            std::optional<ServiceType> cause, SimTime start, const PageResponder& ue,
                            std::optional<PagingSchedule> schedule) {
  if (sim.cn_state != CnState::kIdle) throw std::invalid_argument("CN paging needs an IDLE SIM");
  const auto& cfg = net.paging;
  std::vector<std::uint64_t> cells;
  for (PagingScope s : cfg.escalation_levels)
    cells.push_back(scope_cells(s, net.topology, net.generation, sim.ta_list, {}));
  const PagingSchedule sched = schedule.value_or(PagingSchedule::make(
      compute_occasion(paging_identity(sim, net.generation, PagingKind::kCn), cfg, net.id), cfg));
  return drive(PagingProcedure(PagingKind::kCn, cfg.escalation_levels, std::move(cells), cfg.max_attempts),
               sched, start, cause, ue);
}

PagingOutcome run_ran_paging(const NetworkModel& net, const SimProfile& sim,
                             const std::vector<TaId>& rna, SimTime start, const PageResponder& ue,
                             std::optional<PagingSchedule> schedule) {
  if (net.generation != Generation::k5G) throw std::invalid_argument("RAN paging exists only in 5G");
  if (sim.ran_state != RanState::kInactive) throw std::invalid_argument("RAN paging needs an INACTIVE SIM");
  const auto& cfg = net.paging;
  const PagingSchedule sched = schedule.value_or(PagingSchedule::make(
      compute_occasion(paging_identity(sim, net.generation, PagingKind::kRan), cfg, net.id), cfg));
  PagingOutcome out =
      drive(PagingProcedure(PagingKind::kRan, {PagingScope::kRna}, {net.topology.cells_in(rna)}, cfg.max_attempts),
            sched, start, std::nullopt, ue);
  out.buffer_discarded = out.error.has_value();
  return out;
}

}  // namespace msim
