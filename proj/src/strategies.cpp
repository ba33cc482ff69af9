#include "msim/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace msim {

namespace {

using S = StrategyId;
using G = StrategyGroup;

constexpr std::array<StrategyDescriptor, kNumStrategies> kTable = {{
    //  id                        name                                  key                      group                     RAN    CN     5G    4G
    {S::kPagingCause, "Paging cause", "paging_cause", G::kGeneral, true, true, true, true},
    {S::kShortAbsence, "Short absence", "short_absence", G::kGeneral, true, false, true, true},
    {S::kBusyIndication, "Busy", "busy_indication", G::kGeneral, true, true, true, false},
    {S::kLocalLeaving, "Local leaving", "local_leaving", G::kGeneral, true, true, true, true},
    {S::kGracefulLeaving, "Graceful leaving", "graceful_leaving", G::kGeneral, true, true, true, true},
    {S::kLeaveAndReturn, "Leave and return", "leave_and_return", G::kGeneral, false, true, true, true},
    {S::kSchedulingGap, "Scheduling gap", "scheduling_gap", G::kGeneral, true, true, true, false},
    {S::kPushNotification, "Push notification", "push_notification", G::kSingleRxTxNotify, false, true, true,
     false},
    {S::kNon3gppNotification, "Notification over non-3GPP access", "non3gpp_notification",
     G::kSingleRxTxNotify, false, true, true, true},
    {S::kSmsNotification, "Notification via SMS", "sms_notification", G::kSingleRxTxNotify, false, true, true,
     true},
    {S::kNasParameterChange, "NAS parameters change", "nas_parameter_change", G::kCollisionAvoidance, false,
     true, true, false},
    {S::kAlternativeUeId, "Alternative UE_ID", "alternative_ue_id", G::kCollisionAvoidance, false, true, true,
     false},
    {S::kPagingOffset, "Paging offset", "paging_offset", G::kCollisionAvoidance, true, true, true, true},
    {S::kConsecutivePos, "Consecutive POs paging", "consecutive_pos", G::kCollisionAvoidance, true, true, true,
     true},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string_view to_string(StrategyGroup g) {
  switch (g) {
    case G::kGeneral: return "GENERAL";
    case G::kSingleRxTxNotify: return "SINGLE_RXTX_NOTIFY";
    case G::kCollisionAvoidance: return "COLLISION_AVOIDANCE";
  }
  return "?";
}

std::string_view to_string(Deployment d) { return d == Deployment::kRan ? "RAN" : "CN"; }

std::optional<Deployment> parse_deployment(std::string_view s) {
  const std::string l = lower(s);
  if (l == "ran") return Deployment::kRan;
  if (l == "cn") return Deployment::kCn;
  return std::nullopt;
}

const std::array<StrategyDescriptor, kNumStrategies>& strategy_table() { return kTable; }

const StrategyDescriptor& descriptor(StrategyId id) { return kTable[static_cast<std::size_t>(id) - 1]; }

std::optional<StrategyId> strategy_from_number(int n) {
  if (n < 1 || n > kNumStrategies) return std::nullopt;
  return static_cast<StrategyId>(n);
}

std::optional<StrategyId> parse_strategy(std::string_view s) {
  int n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec == std::errc() && ptr == s.data() + s.size()) return strategy_from_number(n);
  const std::string l = lower(s);
  for (const auto& d : kTable)
    if (l == d.key || l == lower(d.name)) return d.id;
  return std::nullopt;
}

bool applicability(StrategyId id, const ScenarioProfile& scenario) {
  const auto& d = descriptor(id);
  if (scenario.deployment && !d.supports(*scenario.deployment)) return false;
  return std::any_of(scenario.generations.begin(), scenario.generations.end(),
                     [&](Generation g) { return d.supports(g); });
}

// ------------------------------------------------------------- complexity

StrategyCost strategy_cost(StrategyId id, Deployment d) {
  using M = MsgKind;
  using N = Node;
  const bool ran = d == Deployment::kRan;
  // RAN-deployed variants touch the RAN on top of the UE; the CN is touched
  // whenever the paging it originates changes.
  const std::vector<Node> ue_ran_cn = ran ? std::vector<Node>{N::kUe, N::kRan, N::kCn}
                                          : std::vector<Node>{N::kUe, N::kCn};
  const std::vector<Node> ue_ran = ran ? std::vector<Node>{N::kUe, N::kRan} : std::vector<Node>{N::kUe, N::kCn};
  switch (id) {
    case S::kPagingCause: return {{M::kPageCn}, ue_ran_cn};
    case S::kShortAbsence: return {{M::kAbsenceNotice}, ue_ran};
    case S::kBusyIndication: return {{M::kBusyIndication}, ue_ran_cn};
    case S::kLocalLeaving: return {{M::kLeavingNotice}, ue_ran_cn};
    case S::kGracefulLeaving: return {{M::kLeavingNotice, M::kReturnNotice}, ue_ran_cn};
    case S::kLeaveAndReturn: return {{M::kLeavingNotice, M::kPagingHold}, {N::kUe, N::kCn}};
    case S::kSchedulingGap: return {{M::kSchedulingGapRequest, M::kSchedulingGapGrant}, ue_ran};
    case S::kPushNotification:
      return {{M::kPagingRegistration, M::kPushNotification}, {N::kUe, N::kCn, N::kPagingServer, N::kUpf}};
    case S::kNon3gppNotification: return {{M::kN3iwfRegistration, M::kN3iwfNotification}, {N::kUe, N::kCn, N::kN3iwf}};
    case S::kSmsNotification: return {{M::kPagingRegistration, M::kSmsNotification}, {N::kUe, N::kCn, N::kSmsc}};
    case S::kNasParameterChange: return {{M::kGutiReassignment, M::kOffsetAssignment}, {N::kUe, N::kCn}};
    case S::kAlternativeUeId: return {{M::kAltUeIdRequest, M::kAltUeIdConfirm}, {N::kUe, N::kCn}};
    case S::kPagingOffset: return {{M::kOffsetAssignment}, ue_ran};
    case S::kConsecutivePos: return {{M::kPageCn}, ue_ran};
  }
  return {};
}

int complexity_score(StrategyId id, Deployment d) {
  const StrategyCost c = strategy_cost(id, d);
  return static_cast<int>(c.new_messages.size() + c.impacted_nodes.size());
}

// ------------------------------------------------------------------ stack

bool StrategyStack::has(StrategyId id) const { return position(id) >= 0; }

int StrategyStack::position(StrategyId id) const {
  const auto it = std::find(active.begin(), active.end(), id);
  return it == active.end() ? -1 : static_cast<int>(it - active.begin());
}

Deployment StrategyStack::basing(StrategyId id) const {
  const auto it = deployment.find(id);
  return it != deployment.end() ? it->second : descriptor(id).default_deployment();
}

std::vector<std::string> validate_stack(const StrategyStack& stack, const ScenarioProfile& scenario,
                                        bool n3iwf_registered) {
  std::vector<std::string> out;
  std::set<StrategyId> seen;
  int timing_rewriters = 0;
  for (StrategyId id : stack.active) {
    const auto& d = descriptor(id);
    const std::string label = "strategy " + std::to_string(d.number()) + " (" + std::string(d.name) + ")";
    if (!seen.insert(id).second) out.push_back(label + " listed twice");
    ScenarioProfile gens{scenario.generations, std::nullopt};
    if (!applicability(id, gens)) {
      out.push_back(std::string(d.name) + " requires " + (d.supports_5g ? "5G" : "4G"));
    }
    const Deployment basing = stack.basing(id);
    if (!d.supports(basing))
      out.push_back(label + " cannot be " + std::string(to_string(basing)) + "-based");
    if (id == S::kNasParameterChange || id == S::kAlternativeUeId || id == S::kPagingOffset) ++timing_rewriters;
    if (id == S::kNon3gppNotification && !n3iwf_registered)
      out.push_back(label + " needs a prior non-3GPP (N3IWF) registration");
  }
  for (const auto& [id, dep] : stack.deployment)
    if (!stack.has(id))
      out.push_back("basing given for inactive strategy " + std::to_string(static_cast<int>(id)));
  if (timing_rewriters > 1) out.push_back("at most one of strategies 11, 12 and 13 may be active");
  const auto& p = stack.params;
  if (p.gap_grant_probability < 0.0 || p.gap_grant_probability > 1.0)
    out.push_back("gap_grant_probability must lie in [0, 1]");
  if (p.sms_mean_delay < p.sms_min_delay) out.push_back("sms_mean_delay must be >= sms_min_delay");
  if (p.offset_grid <= Duration::zero()) out.push_back("offset_grid must be positive");
  if (p.absence_duration <= Duration::zero()) out.push_back("absence_duration must be positive");
  if (p.guti_fit_tries < 0) out.push_back("guti_fit_tries must be >= 0");
  return out;
}

// ---------------------------------------------------------- pure helpers

PagingSchedule shifted(const PagingSchedule& s, Duration offset) {
  PagingSchedule out = s;
  out.phase = Duration(floor_mod((s.phase + offset).count(), s.period.count()));
  return out;
}

bool collision_free(const PagingSchedule& s, const std::vector<PagingSchedule>& others, int num_rx) {
  if (num_rx >= 2) return true;
  return std::none_of(others.begin(), others.end(),
                      [&](const PagingSchedule& o) { return detect_collision(s, o, num_rx).colliding > 0; });
}

OffsetAssignment assign_paging_offsets(const std::vector<PagingSchedule>& base, Duration grid, int num_rx) {
  OffsetAssignment out;
  out.offsets.assign(base.size(), Duration::zero());
  std::vector<PagingSchedule> fixed;
  for (std::size_t i = 0; i < base.size(); ++i) {
    bool placed = false;
    for (Duration c{0}; c < base[i].period; c += grid) {
      const PagingSchedule cand = shifted(base[i], c);
      if (collision_free(cand, fixed, num_rx)) {
        out.offsets[i] = c;
        fixed.push_back(cand);
        placed = true;
        break;
      }
    }
    if (!placed) {
      out.feasible = false;
      fixed.push_back(base[i]);
    }
  }
  return out;
}

std::optional<std::uint64_t> choose_alternative_id(std::uint64_t base_id, const PagingConfig& cfg,
                                                   Duration sim_offset, Duration listen_window,
                                                   const std::vector<PagingSchedule>& others, int num_rx) {
  const std::uint64_t cycle = std::uint64_t{cfg.drx_cycle_frames} * cfg.occasions_per_frame;
  for (std::uint64_t k = 1; k <= cycle; ++k) {
    const std::uint64_t id = base_id + k;
    const auto s = PagingSchedule::make(compute_occasion(id, cfg), cfg, sim_offset, listen_window);
    if (collision_free(s, others, num_rx)) return id;
  }
  return std::nullopt;
}

NasChangeResult nas_parameter_change(const PagingSchedule& current, const PagingConfig& cfg,
                                     Duration listen_window,
                                     const std::vector<PagingSchedule>& others, int num_rx, int tries,
                                     Duration grid, RngStream& rng) {
  NasChangeResult r;
  for (int i = 0; i < tries; ++i) {
    ++r.tries;
    const std::uint32_t id = rng.next_u32();
    const auto s = PagingSchedule::make(compute_occasion(id, cfg), cfg, Duration::zero(), listen_window);
    if (collision_free(s, others, num_rx)) {
      r.new_guti = id;
      return r;
    }
  }
  for (Duration c{0}; c < current.period; c += grid) {
    if (collision_free(shifted(current, c), others, num_rx)) {
      r.offset = c;
      break;
    }
  }
  return r;
}

RanState graceful_target_state(Generation g, Duration expected_absence, Duration threshold) {
  return g == Generation::k5G && expected_absence <= threshold ? RanState::kInactive : RanState::kIdle;
}

Duration sms_delay(RngStream& rng, Duration min, Duration mean) {
  return min + rng.exponential(mean - min);
}

std::string_view to_string(LeaveMode m) {
  switch (m) {
    case LeaveMode::kUncoordinated: return "UNCOORDINATED";
    case LeaveMode::kLocal: return "LOCAL";
    case LeaveMode::kGraceful: return "GRACEFUL";
    case LeaveMode::kLeaveAndReturn: return "LEAVE_AND_RETURN";
    case LeaveMode::kShortAbsence: return "SHORT_ABSENCE";
  }
  return "?";
}

Duration leave_latency(LeaveMode mode, Deployment d, const LinkDelays& delays, Duration switch_delay) {
  switch (mode) {
    case LeaveMode::kUncoordinated:
    case LeaveMode::kLocal:
    case LeaveMode::kShortAbsence: return switch_delay;
    case LeaveMode::kGraceful: return (d == Deployment::kRan ? delays.as : delays.nas) + delays.as + switch_delay;
    case LeaveMode::kLeaveAndReturn: return delays.as + delays.nas + delays.as + switch_delay;
  }
  return switch_delay;
}

}  // namespace msim
