#include "msim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <variant>

#include "msim/event_queue.hpp"
#include "msim/mobility.hpp"
#include "msim/radio.hpp"
#include "msim/rng.hpp"

namespace msim {

namespace {

using S = StrategyId;

constexpr SimTime kFar{std::numeric_limits<std::int64_t>::max() / 4};

// How a network currently treats a SIM whose device has tuned away.
enum class NetView : std::uint8_t {
  kNormal,
  kAwayUncoordinated,  // still believes the UE is connected
  kAwayAbsence,        // short absence announced, connection kept
  kAwayGraceful,       // absence announced, MT traffic buffered until return
  kAwayHold,           // paging held for the hold interval
};

struct Service {
  std::uint64_t mt = 0;
  ServiceKind kind = ServiceKind::kData;
  SimTime end{0};
  Duration remaining{0};
  SimTime stalled_at = kNever;
  std::uint32_t token = 0;

  bool stalled() const { return stalled_at != kNever; }
};

struct Mt {
  std::uint64_t id = 0;
  std::uint32_t device = 0;
  int sim = 0;
  ServiceKind kind = ServiceKind::kData;
  SimTime arrival{0};
  Duration duration{0};
  SimTime first_contact = kNever;
  bool resolved = false;
  std::uint8_t flags = 0;
  std::uint8_t strategy = kNoStrategy;
};

struct Paging {
  PagingKind kind;
  PagingProcedure proc;
  std::vector<PagingScope> levels;
  std::vector<std::uint64_t> mts;
  std::uint32_t token = 0;
  std::uint8_t strategy = kNoStrategy;
  bool multisim_miss = false;
  bool declined = false;
  bool escalated_after_decline = false;
};

struct SimRt {
  SimProfile prof;
  int net = 0;
  Generation gen = Generation::k5G;
  Duration offset{0};
  std::optional<std::uint64_t> alt_id;
  SimTime alt_from = kNever;
  PagingSchedule cn_base;
  PagingSchedule cn_alt;
  PagingSchedule ran;
  std::vector<TaId> rna;
  CellId last_cell = 0;
  bool update_pending = false;
  std::vector<Service> services;
  std::uint32_t service_token = 0;
  std::vector<std::uint64_t> held;
  std::optional<Paging> paging;
  std::uint32_t paging_token = 0;
  NetView view = NetView::kNormal;
  std::uint32_t view_token = 0;
  SimTime ready_at{0};
  bool gap_granted = false;
  ReservationId rx_res = 0;
  ReservationId tx_res = 0;
  std::optional<RngStream> traffic;
  std::optional<RngStream> durations;
  std::optional<RngStream> ids;
  std::optional<RngStream> sms;
};

struct Away {
  int from = -1;
  LeaveMode mode = LeaveMode::kUncoordinated;
  bool resume = false;
  std::uint32_t token = 0;
};

struct Device {
  std::uint32_t id = 0;
  UeDevice hw;
  std::vector<SimRt> sims;
  RadioArbiter arb;
  std::uint32_t spot = 0;
  int attached = -1;
  std::optional<Away> away;
  std::uint32_t away_token = 0;
  SimTime last_flush{0};
  std::optional<RngStream> mobility;
  std::optional<RngStream> loss;
  std::optional<RngStream> gaps;
  std::optional<RngStream> guti;

  Device(std::uint32_t i, const UeDevice& h) : id(i), hw(h), arb(h.mode, h.num_rx, h.num_tx) {}
  bool single_rx() const { return hw.mode == DualSimMode::kDsds && hw.num_rx < 2; }
};

struct Decision {
  enum What { kRespond, kLeave, kAbsence, kDecline } what = kRespond;
  std::optional<ServiceKind> incoming;
};

class Engine {
 public:
  Engine(const Scenario& sc, std::uint64_t seed) : sc_(sc), seed_(seed) {}

  RunResult run() {
    init();
    q_.run();
    finish();
    RunResult r;
    r.seed = seed_;
    r.events_executed = q_.executed();
    r.last_event = q_.now();
    log_.sort_by_time();
    r.log = std::move(log_);
    return r;
  }

 private:
  // ------------------------------------------------------------ plumbing

  const NetworkModel& net(const SimRt& s) const { return sc_.networks[static_cast<std::size_t>(s.net)]; }
  Duration lw(const SimRt& s) const { return net(s).paging.default_listen_window(); }
  Duration sw(const Device& d) const { return d.hw.switch_delay; }
  const LinkDelays& delays() const { return sc_.delays; }
  const StrategyParams& params() const { return sc_.strategies.params; }

  bool active(S id, const SimRt& s) const {
    return sc_.strategies.has(id) && descriptor(id).supports(s.gen);
  }
  Deployment basing(S id) const { return sc_.strategies.basing(id); }
  static std::uint8_t tag(S id) { return static_cast<std::uint8_t>(id); }
  Segment seg_of(S id) const { return basing(id) == Deployment::kRan ? Segment::kRan : Segment::kCn; }
  Node node_of(S id) const { return basing(id) == Deployment::kRan ? Node::kRan : Node::kCn; }

  Mt& mt(std::uint64_t id) { return mts_[id - 1]; }

  LogRecord base(const Device& d, int sim, RecordKind kind, SimTime t) const {
    LogRecord r;
    r.time = t;
    r.kind = kind;
    r.device = d.id;
    r.sim = static_cast<std::int8_t>(sim);
    if (sim >= 0) r.network = net(d.sims[static_cast<std::size_t>(sim)]).id;
    return r;
  }

  void msg(const Device& d, int sim, MsgKind kind, Node from, Node to, Segment seg, SimTime t,
           std::uint8_t strategy, std::uint64_t mt_id = 0) {
    LogRecord r = base(d, sim, RecordKind::kMessage, t);
    r.node = from;
    r.strategy = strategy;
    r.size_weight = static_cast<std::uint8_t>(size_weight(seg));
    r.detail = static_cast<std::uint8_t>(kind);
    r.aux = static_cast<std::uint8_t>(seg);
    r.value = (t + delays().of(seg)).count();
    r.value2 = static_cast<std::int64_t>(to);
    r.mt = mt_id;
    log_.append(r);
  }

  void log_messages(const Device& d, int sim, const std::vector<SimMessage>& ms, std::uint8_t strategy) {
    for (const auto& m : ms) msg(d, sim, m.kind, m.origin, m.destination, m.segment, m.timestamp, strategy);
  }

  void interruption(const Device& d, int sim, SimTime t, Duration stall, InterruptCause cause,
                    std::uint8_t strategy) {
    if (stall <= Duration::zero()) return;
    LogRecord r = base(d, sim, RecordKind::kInterruption, t);
    r.detail = static_cast<std::uint8_t>(cause);
    r.value = stall.count();
    r.strategy = strategy;
    log_.append(r);
  }

  void error(const Device& d, int sim, SimTime t, ErrorCode code, std::uint8_t strategy, std::uint8_t aux = 0,
             std::uint64_t mt_id = 0) {
    LogRecord r = base(d, sim, RecordKind::kError, t);
    r.detail = static_cast<std::uint8_t>(code);
    r.strategy = strategy;
    r.aux = aux;
    r.mt = mt_id;
    log_.append(r);
  }

  CellId cell_of(const Device& d, const SimRt& s) const {
    return cell_at(d.spot, sc_.mobility.spots, net(s).topology);
  }

  // ----------------------------------------------------------- schedules

  PagingSchedule make_schedule(const SimRt& s, std::uint64_t id) const {
    const auto& cfg = net(s).paging;
    return PagingSchedule::make(compute_occasion(id, cfg, net(s).id), cfg, s.offset);
  }

  void recompute_schedules(SimRt& s) {
    s.cn_base = make_schedule(s, paging_identity(s.prof, s.gen, PagingKind::kCn));
    s.cn_alt = s.alt_id ? make_schedule(s, *s.alt_id) : s.cn_base;
    s.ran = make_schedule(s, s.alt_id ? *s.alt_id : paging_identity(s.prof, s.gen, PagingKind::kRan));
  }

  // CN paging only moves to the alternative timing once the CN confirmed it.
  const PagingSchedule& cn_schedule(const SimRt& s, SimTime t) const {
    return s.alt_id && t >= s.alt_from ? s.cn_alt : s.cn_base;
  }
  const PagingSchedule& monitor_schedule(const SimRt& s, SimTime t) const {
    return s.prof.inactive() ? s.ran : cn_schedule(s, t);
  }

  bool suppressed(const Device& d, int z) const {
    const SimRt& s = d.sims[static_cast<std::size_t>(z)];
    if (s.prof.role != SimRole::kSecondary) return false;
    if (active(S::kNon3gppNotification, s) && sc_.devices.n3iwf_registered) return true;
    if ((active(S::kPushNotification, s) || active(S::kSmsNotification, s)) && d.attached >= 0 &&
        d.sims[static_cast<std::size_t>(d.attached)].prof.role == SimRole::kPrimary)
      return true;
    return false;
  }

  bool monitoring(const Device& d, int z) const {
    const SimRt& s = d.sims[static_cast<std::size_t>(z)];
    return s.prof.registered() && !s.prof.connected() && !suppressed(d, z);
  }

  // ------------------------------------------------------------- energy

  // Accrues receiver on-time for [last_flush, t). The device state is
  // constant over that span because every state change flushes first.
  void flush(Device& d, SimTime t) {
    const SimTime a = d.last_flush;
    const SimTime b = std::min(t, SimTime(sc_.horizon));
    d.last_flush = std::max(d.last_flush, t);
    if (b <= a) return;
    if (d.attached >= 0) {
      LogRecord r = base(d, d.attached, RecordKind::kRxOn, a);
      r.value = (b - a).count();
      log_.append(r);
    }
    const int n = static_cast<int>(d.sims.size());
    for (int z = 0; z < n; ++z) {
      if (!monitoring(d, z)) continue;
      const SimRt& s = d.sims[static_cast<std::size_t>(z)];
      const PagingSchedule& sched = monitor_schedule(s, a);
      std::int64_t listens = sched.count_in(a, b);
      if (d.attached >= 0 && d.single_rx()) {
        // The receiver is locked to the connected SIM; a granted gap reuses
        // it without extra on-time but stalls the connected service.
        const SimRt& y = d.sims[static_cast<std::size_t>(d.attached)];
        if (y.gap_granted && listens > 0)
          interruption(d, d.attached, a, (lw(s) + 2 * sw(d)) * listens, InterruptCause::kGap, tag(S::kSchedulingGap));
        continue;
      }
      if (d.attached < 0 && d.single_rx()) {
        for (int w = 0; w < z; ++w) {
          if (!monitoring(d, w)) continue;
          const auto rep = detect_collision(sched, monitor_schedule(d.sims[static_cast<std::size_t>(w)], a), 1);
          if (rep.colliding > 0) {
            listens -= std::llround(static_cast<double>(listens) * rep.fraction_colliding);
            break;
          }
        }
      }
      if (listens <= 0) continue;
      LogRecord r = base(d, z, RecordKind::kRxOn, a);
      r.value = (lw(s) * listens).count();
      r.value2 = listens;
      log_.append(r);
    }
  }

  // -------------------------------------------------------------- radio

  void reserve_clearing(Device& d, RadioResource res, int x, SimTime from, SimTime to, RadioUse use,
                        ReservationId* out) {
    for (int guard = 0; guard < 8; ++guard) {
      const auto got = d.arb.reserve(res, x, from, to, use);
      if (const auto* id = std::get_if<ReservationId>(&got)) {
        if (out) *out = *id;
        return;
      }
      const auto c = std::get<RadioConflict>(got);
      d.arb.carve(c.reservation, from, to);
    }
  }

  void radio_connect(Device& d, int x, SimTime t) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    if (s.rx_res || s.tx_res) return;
    reserve_clearing(d, RadioResource::kRx, x, t, kFar, RadioUse::kSession, &s.rx_res);
    reserve_clearing(d, RadioResource::kTx, x, t, kFar, RadioUse::kSession, &s.tx_res);
  }

  void radio_release(Device& d, int x, SimTime t) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    if (s.rx_res) d.arb.truncate(s.rx_res, t);
    if (s.tx_res) d.arb.truncate(s.tx_res, t);
    s.rx_res = s.tx_res = 0;
  }

  // A short transmission on SIM x; any session of another SIM that holds a
  // shared resource is cut for the duration.
  void radio_procedure(Device& d, int x, SimTime t, Duration len) {
    reserve_clearing(d, RadioResource::kRx, x, t, t + len, RadioUse::kProcedure, nullptr);
    reserve_clearing(d, RadioResource::kTx, x, t, t + len, RadioUse::kProcedure, nullptr);
  }

  // --------------------------------------------------------- transitions

  TransitionResult apply_transition(Device& d, int x, RanState target, TransitionTrigger trig, SimTime t,
                                    std::uint8_t strategy) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const RanState from = s.prof.ran_state;
    TransitionResult tr = transition(s.prof, s.gen, target, trig, delays(), t);
    log_messages(d, x, tr.messages, strategy);
    LogRecord r = base(d, x, RecordKind::kStateChange, t);
    r.node = Node::kRan;
    r.detail = static_cast<std::uint8_t>(from);
    r.aux = static_cast<std::uint8_t>(target);
    r.value = tr.units;
    r.strategy = strategy;
    log_.append(r);
    if (!legal_state_pair(s.prof.cn_state, s.prof.ran_state))
      throw Error(ErrorCode::kIllegalTransition, "illegal state pair after transition");
    if (target == RanState::kInactive) s.rna = net(s).topology.rna_around(s.prof.current_ta);
    return tr;
  }

  // ------------------------------------------------------------ services

  void schedule_end(Device& d, int x, const Service& svc) {
    q_.schedule(svc.end, [this, dev = d.id, x, m = svc.mt, tok = svc.token] { on_service_end(dev, x, m, tok); });
  }

  void resolve(std::uint64_t id, MtOutcome o, SimTime t, std::int64_t latency = -1) {
    Mt& m = mt(id);
    if (m.resolved) return;
    m.resolved = true;
    const Device& d = devs_[m.device];
    LogRecord r = base(d, m.sim, RecordKind::kMtOutcome, t);
    r.detail = static_cast<std::uint8_t>(o);
    r.aux = static_cast<std::uint8_t>(m.kind);
    r.value = latency;
    r.value2 = m.flags;
    r.strategy = m.strategy;
    r.mt = id;
    log_.append(r);
  }

  void deliver(Device& d, int x, std::uint64_t id, SimTime start) {
    Mt& m = mt(id);
    if (m.resolved) return;
    const std::int64_t latency = m.first_contact != kNever ? (start - m.first_contact).count() : -1;
    resolve(id, MtOutcome::kDelivered, start, latency);
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    Service svc;
    svc.mt = id;
    svc.kind = m.kind;
    svc.end = start + m.duration;
    svc.token = ++s.service_token;
    s.services.push_back(svc);
    schedule_end(d, x, svc);
  }

  void stall_services(Device& d, int x, SimTime t) {
    for (auto& svc : d.sims[static_cast<std::size_t>(x)].services) {
      if (svc.stalled()) continue;
      svc.remaining = std::max(Duration::zero(), svc.end - t);
      svc.stalled_at = t;
      ++svc.token;
    }
  }

  void resume_services(Device& d, int x, SimTime t, InterruptCause cause, std::uint8_t strategy) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    for (auto& svc : s.services) {
      if (!svc.stalled()) continue;
      interruption(d, x, svc.stalled_at, t - svc.stalled_at, cause, strategy);
      svc.end = t + svc.remaining;
      svc.stalled_at = kNever;
      svc.token = ++s.service_token;
      schedule_end(d, x, svc);
    }
  }

  // Drops every service of x. A stalled service counts as interrupted from
  // the stall until its planned end.
  void terminate_services(Device& d, int x, SimTime t, InterruptCause cause, std::uint8_t strategy) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    for (auto& svc : s.services) {
      const SimTime since = svc.stalled() ? svc.stalled_at : t;
      const Duration remaining = svc.stalled() ? svc.remaining : std::max(Duration::zero(), svc.end - t);
      LogRecord r = base(d, x, RecordKind::kTerminated, t);
      r.value = remaining.count();
      r.mt = svc.mt;
      r.strategy = strategy;
      log_.append(r);
      interruption(d, x, since, (t - since) + remaining, cause, strategy);
    }
    s.services.clear();
  }

  std::optional<ServiceKind> top_activity(const Device& d, int y) const {
    std::optional<ServiceKind> best;
    for (const auto& svc : d.sims[static_cast<std::size_t>(y)].services) {
      if (!best || sc_.classes[svc.kind].priority > sc_.classes[*best].priority) best = svc.kind;
    }
    return best;
  }

  ServiceKind top_kind(const std::vector<std::uint64_t>& ids) {
    ServiceKind best = mt(ids.front()).kind;
    for (auto id : ids)
      if (sc_.classes[mt(id).kind].priority > sc_.classes[best].priority) best = mt(id).kind;
    return best;
  }

  // --------------------------------------------------------- connections

  void connect(Device& d, int x, SimTime t, Duration ttl, const std::vector<std::uint64_t>& ids,
               TransitionTrigger trig, std::uint8_t strategy) {
    flush(d, t);
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const SimTime tc = t + ttl;
    SimTime ready = std::max(tc, s.ready_at);
    if (!s.prof.connected()) {
      const TransitionResult tr = apply_transition(d, x, RanState::kConnected, trig, tc, strategy);
      ready = tc + tr.latency;
    }
    s.ready_at = ready;
    d.attached = x;
    radio_connect(d, x, tc);
    s.last_cell = cell_of(d, s);
    if (s.update_pending) location_update(d, x, tc);
    s.view = NetView::kNormal;
    ++s.view_token;

    if (d.single_rx() && active(S::kSchedulingGap, s)) {
      bool others = false;
      for (int z = 0; z < static_cast<int>(d.sims.size()); ++z)
        if (z != x && d.sims[static_cast<std::size_t>(z)].prof.registered() &&
            !d.sims[static_cast<std::size_t>(z)].prof.connected())
          others = true;
      if (others) {
        const Segment seg = seg_of(S::kSchedulingGap);
        msg(d, x, MsgKind::kSchedulingGapRequest, Node::kUe, node_of(S::kSchedulingGap), seg, ready, tag(S::kSchedulingGap));
        if (!d.gaps) d.gaps.emplace(seed_, d.id, 0, StreamPurpose::kGapGrant);
        if (d.gaps->bernoulli(params().gap_grant_probability)) {
          msg(d, x, MsgKind::kSchedulingGapGrant, node_of(S::kSchedulingGap), Node::kUe, seg,
              ready + delays().of(seg), tag(S::kSchedulingGap));
          s.gap_granted = true;
        }
      }
    }

    resume_services(d, x, ready, InterruptCause::kLeave, strategy);
    for (auto id : ids) deliver(d, x, id, ready);
    std::vector<std::uint64_t> held;
    held.swap(s.held);
    for (auto id : held) deliver(d, x, id, ready);
  }

  void release(Device& d, int x, SimTime t) {
    flush(d, t);
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const bool suspend = s.gen == Generation::k5G && net(s).suspend_on_release;
    s.last_cell = cell_of(d, s);
    apply_transition(d, x, suspend ? RanState::kInactive : RanState::kIdle,
                     suspend ? TransitionTrigger::kSuspend : TransitionTrigger::kRelease, t, kNoStrategy);
    radio_release(d, x, t);
    s.gap_granted = false;
    if (d.attached == x) d.attached = -1;
    after_free(d, t);
  }

  void after_free(Device& d, SimTime t) {
    if (d.away) {
      if (d.away->resume) {
        return_to(d, t);
      } else {
        d.away.reset();
      }
    }
    if (d.attached >= 0) return;
    for (int z = 0; z < static_cast<int>(d.sims.size()); ++z)
      if (d.sims[static_cast<std::size_t>(z)].update_pending) location_update(d, z, t);
  }

  void on_service_end(std::uint32_t dev, int x, std::uint64_t m, std::uint32_t tok) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const SimTime t = q_.now();
    const auto it = std::find_if(s.services.begin(), s.services.end(),
                                 [&](const Service& svc) { return svc.mt == m && svc.token == tok; });
    if (it == s.services.end() || it->stalled()) return;
    s.services.erase(it);
    if (s.services.empty() && s.prof.connected() && d.attached == x) release(d, x, t);
  }

  // ------------------------------------------------------------- leaving

  LeaveMode leave_mode(const Device& d, int y, bool absence, std::uint8_t* strategy) const {
    if (absence) {
      *strategy = tag(S::kShortAbsence);
      return LeaveMode::kShortAbsence;
    }
    const SimRt& s = d.sims[static_cast<std::size_t>(y)];
    for (S id : sc_.strategies.active) {
      if (!active(id, s)) continue;
      if (id == S::kLocalLeaving || id == S::kGracefulLeaving || id == S::kLeaveAndReturn) {
        *strategy = tag(id);
        return id == S::kLocalLeaving ? LeaveMode::kLocal
               : id == S::kGracefulLeaving ? LeaveMode::kGraceful
                                           : LeaveMode::kLeaveAndReturn;
      }
    }
    *strategy = kNoStrategy;
    return LeaveMode::kUncoordinated;
  }

  // The device abandons its connection on SIM y at t. Returns the time until
  // the radio is available for the other SIM.
  Duration leave(Device& d, int y, SimTime t, std::optional<ServiceKind> incoming, bool absence,
                 std::uint8_t* used_strategy) {
    flush(d, t);
    SimRt& s = d.sims[static_cast<std::size_t>(y)];
    std::uint8_t st = kNoStrategy;
    const LeaveMode mode = leave_mode(d, y, absence, &st);
    const S sid = st ? static_cast<S>(st) : S::kLocalLeaving;
    const Deployment dep = st ? basing(sid) : Deployment::kRan;
    const Duration ttl = leave_latency(mode, dep, delays(), sw(d));
    *used_strategy = st;

    LogRecord r = base(d, y, RecordKind::kLeave, t);
    r.detail = static_cast<std::uint8_t>(mode);
    r.value = ttl.count();
    r.value2 = y;
    r.strategy = st;
    log_.append(r);

    stall_services(d, y, t);
    radio_release(d, y, t);
    s.gap_granted = false;
    d.attached = -1;
    ++s.view_token;
    d.away.reset();
    const std::uint32_t atok = ++d.away_token;

    switch (mode) {
      case LeaveMode::kUncoordinated: {
        s.view = NetView::kAwayUncoordinated;
        d.away = Away{y, mode, true, atok};
        q_.schedule(t + sc_.rlf_timeout,
                    [this, dev = d.id, y, vt = s.view_token] { on_radio_link_failure(dev, y, vt); });
        break;
      }
      case LeaveMode::kShortAbsence: {
        msg(d, y, MsgKind::kAbsenceNotice, Node::kUe, Node::kRan, Segment::kRan, t, st);
        s.view = NetView::kAwayAbsence;
        d.away = Away{y, mode, true, atok};
        break;
      }
      case LeaveMode::kLocal: {
        const Segment seg = seg_of(sid);
        msg(d, y, MsgKind::kLeavingNotice, Node::kUe, node_of(sid), seg, t, st);
        const bool suspend = params().local_leave_suspend && s.gen == Generation::k5G;
        apply_transition(d, y, suspend ? RanState::kInactive : RanState::kIdle,
                         suspend ? TransitionTrigger::kSuspend : TransitionTrigger::kRelease,
                         t + delays().of(seg), st);
        terminate_services(d, y, t, InterruptCause::kLeave, st);
        s.view = NetView::kNormal;
        break;
      }
      case LeaveMode::kGraceful: {
        const Segment seg = seg_of(sid);
        const Duration expected =
            sc_.traffic.mean_duration[static_cast<std::size_t>(incoming.value_or(ServiceKind::kVoice))];
        const RanState target = graceful_target_state(s.gen, expected, params().inactive_threshold);
        msg(d, y, MsgKind::kLeavingNotice, Node::kUe, node_of(sid), seg, t, st);
        apply_transition(d, y, target,
                         target == RanState::kInactive ? TransitionTrigger::kSuspend : TransitionTrigger::kRelease,
                         t + delays().of(seg), st);
        s.view = NetView::kAwayGraceful;
        d.away = Away{y, mode, true, atok};
        break;
      }
      case LeaveMode::kLeaveAndReturn: {
        msg(d, y, MsgKind::kLeavingNotice, Node::kUe, Node::kRan, Segment::kRan, t, st);
        msg(d, y, MsgKind::kPagingHold, Node::kRan, Node::kCn, Segment::kCn, t + delays().as, st);
        if (s.prof.connected())
          apply_transition(d, y, RanState::kIdle, TransitionTrigger::kRelease, t + delays().as + delays().nas, st);
        s.view = NetView::kAwayHold;
        d.away = Away{y, mode, true, atok};
        q_.schedule(t + params().hold_interval,
                    [this, dev = d.id, y, vt = s.view_token] { on_hold_expiry(dev, y, vt); });
        break;
      }
    }
    return ttl;
  }

  void return_to(Device& d, SimTime t) {
    const Away a = *d.away;
    d.away.reset();
    SimRt& s = d.sims[static_cast<std::size_t>(a.from)];
    const SimTime back = t + sw(d);
    const std::uint8_t st = a.mode == LeaveMode::kShortAbsence ? tag(S::kShortAbsence)
                            : a.mode == LeaveMode::kGraceful   ? tag(S::kGracefulLeaving)
                            : a.mode == LeaveMode::kLeaveAndReturn ? tag(S::kLeaveAndReturn)
                                                                   : kNoStrategy;
    const InterruptCause cause = a.mode == LeaveMode::kShortAbsence ? InterruptCause::kAbsence : InterruptCause::kLeave;
    const bool has_work = !s.held.empty() ||
                          std::any_of(s.services.begin(), s.services.end(), [](const Service& v) { return v.stalled(); });

    if (s.prof.connected()) {
      // The network still holds the connection: just retune.
      flush(d, t);
      s.view = NetView::kNormal;
      ++s.view_token;
      d.attached = a.from;
      radio_connect(d, a.from, back);
      s.ready_at = std::max(s.ready_at, back);
      resume_services(d, a.from, back, cause, st);
      std::vector<std::uint64_t> held;
      held.swap(s.held);
      for (auto id : held) deliver(d, a.from, id, back);
      if (s.services.empty()) release(d, a.from, back);
      return;
    }
    if (!has_work) {
      s.view = NetView::kNormal;
      ++s.view_token;
      return;
    }
    if (a.mode == LeaveMode::kGraceful) {
      const Segment seg = seg_of(S::kGracefulLeaving);
      msg(d, a.from, MsgKind::kReturnNotice, Node::kUe, node_of(S::kGracefulLeaving), seg, back, st);
    }
    const TransitionTrigger trig = s.prof.inactive() ? TransitionTrigger::kResume : TransitionTrigger::kServiceRequest;
    connect(d, a.from, t, sw(d), {}, trig, st);
  }

  void on_radio_link_failure(std::uint32_t dev, int y, std::uint32_t vt) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(y)];
    if (s.view_token != vt || s.view != NetView::kAwayUncoordinated) return;
    const SimTime t = q_.now();
    flush(d, t);
    const RanState from = s.prof.ran_state;
    s.prof.cn_state = CnState::kIdle;
    s.prof.ran_state = RanState::kIdle;
    LogRecord r = base(d, y, RecordKind::kStateChange, t);
    r.node = Node::kRan;
    r.detail = static_cast<std::uint8_t>(from);
    r.aux = static_cast<std::uint8_t>(RanState::kIdle);
    log_.append(r);
    LogRecord m = base(d, y, RecordKind::kMisleading, t);
    m.node = Node::kRan;
    m.detail = 1;
    log_.append(m);
    terminate_services(d, y, t, InterruptCause::kLeave, kNoStrategy);
    s.view = NetView::kNormal;
    ++s.view_token;
    if (d.away && d.away->from == y) d.away->resume = false;
    if (!s.held.empty()) {
      std::vector<std::uint64_t> held;
      held.swap(s.held);
      start_paging(d, y, PagingKind::kCn, std::move(held), t, false, kNoStrategy);
    }
  }

  void on_hold_expiry(std::uint32_t dev, int y, std::uint32_t vt) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(y)];
    if (s.view_token != vt || s.view != NetView::kAwayHold) return;
    const SimTime t = q_.now();
    s.view = NetView::kNormal;
    ++s.view_token;
    if (s.held.empty()) return;
    std::vector<std::uint64_t> held;
    held.swap(s.held);
    start_paging(d, y, PagingKind::kCn, std::move(held), t, true, tag(S::kLeaveAndReturn));
  }

  // ------------------------------------------------------------- paging

  std::vector<std::uint64_t> level_cells(const SimRt& s, const std::vector<PagingScope>& levels) const {
    std::vector<std::uint64_t> out;
    for (auto l : levels) out.push_back(scope_cells(l, net(s).topology, s.gen, s.prof.ta_list, s.rna));
    return out;
  }

  void start_paging(Device& d, int x, PagingKind kind, std::vector<std::uint64_t> ids, SimTime t, bool single,
                    std::uint8_t strategy) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    std::vector<PagingScope> levels;
    int attempts = net(s).paging.max_attempts;
    if (single) {
      levels = {PagingScope::kTaList};
      attempts = 1;
    } else if (kind == PagingKind::kRan) {
      levels = {PagingScope::kRna};
    } else {
      levels = net(s).paging.escalation_levels;
    }
    const std::uint32_t token = ++s.paging_token;
    s.paging.emplace(Paging{kind, PagingProcedure(kind, levels, level_cells(s, levels), attempts), levels,
                            std::move(ids), token, strategy});
    const PagingSchedule& sched = kind == PagingKind::kRan ? s.ran : cn_schedule(s, t);
    const SimTime tp = sched.first_at_or_after(t);
    q_.schedule(tp, [this, dev = d.id, x, token] { on_attempt(dev, x, token, false); });
  }

  AttemptResult receive(Device& d, int x, SimTime t, const Paging& p) {
    const SimRt& s = d.sims[static_cast<std::size_t>(x)];
    if (suppressed(d, x)) return AttemptResult::kSuppressed;
    if (!scope_contains(p.proc.scope(), net(s).topology, s.gen, s.prof.ta_list, s.rna, s.last_cell, cell_of(d, s)))
      return AttemptResult::kOutOfScope;
    if (d.attached >= 0 && d.attached != x) {
      if (d.single_rx() && !d.sims[static_cast<std::size_t>(d.attached)].gap_granted) return AttemptResult::kRxBusy;
    } else if (d.attached < 0 && d.single_rx()) {
      for (int w = 0; w < x; ++w) {
        if (!monitoring(d, w)) continue;
        if (monitor_schedule(d.sims[static_cast<std::size_t>(w)], t).overlaps(t, lw(s)))
          return AttemptResult::kCollision;
      }
    }
    if (sc_.radio_loss > 0.0) {
      if (!d.loss) d.loss.emplace(seed_, d.id, 0, StreamPurpose::kRadioLoss);
      if (d.loss->bernoulli(sc_.radio_loss)) return AttemptResult::kRadioLoss;
    }
    return AttemptResult::kAnswered;
  }

  Decision decide(const Device& d, int x, ServiceKind kind) const {
    Decision dec;
    const SimRt& s = d.sims[static_cast<std::size_t>(x)];
    if (d.attached < 0 || d.attached == x) return dec;
    const int y = d.attached;
    const auto activity = top_activity(d, y);
    if (!activity) return dec;
    if (active(S::kPagingCause, s)) dec.incoming = kind;
    switch (match_policy(d.hw.user_policy, dec.incoming, activity)) {
      case PolicyAction::kAcceptLeave: dec.what = Decision::kLeave; break;
      case PolicyAction::kNotifyOnly:
        dec.what = active(S::kShortAbsence, d.sims[static_cast<std::size_t>(y)]) &&
                           basing(S::kShortAbsence) == Deployment::kRan
                       ? Decision::kAbsence
                       : Decision::kDecline;
        break;
      case PolicyAction::kRejectBusy:
      case PolicyAction::kIgnore: dec.what = Decision::kDecline; break;
    }
    return dec;
  }

  void log_attempt(const Device& d, int x, SimTime t, const Paging& p, AttemptResult r, std::uint64_t cells,
                   std::uint8_t strategy) {
    LogRecord rec = base(d, x, RecordKind::kPageAttempt, t);
    rec.node = p.kind == PagingKind::kRan ? Node::kRan : Node::kCn;
    rec.detail = static_cast<std::uint8_t>(r);
    rec.aux = static_cast<std::uint8_t>(p.proc.scope());
    rec.value = static_cast<std::int64_t>(cells);
    rec.value2 = p.proc.attempts_used();
    rec.strategy = strategy;
    rec.mt = p.mts.empty() ? 0 : p.mts.front();
    log_.append(rec);
  }

  void mark(const std::vector<std::uint64_t>& ids, std::uint8_t flags, std::uint8_t strategy) {
    for (auto id : ids) {
      Mt& m = mt(id);
      m.flags |= flags;
      if (strategy && !m.strategy) m.strategy = strategy;
    }
  }

  // Leave or step away from the busy SIM (if any) and bring x up for `ids`.
  void take_call(Device& d, int x, SimTime t, const Decision& dec, const std::vector<std::uint64_t>& ids,
                 TransitionTrigger trig, std::uint8_t strategy) {
    Duration ttl{0};
    std::uint8_t st = strategy;
    if (d.attached >= 0 && d.attached != x) {
      const int y = d.attached;
      if (dec.what == Decision::kRespond) {
        // Connected without any service left; nothing to coordinate.
        release(d, y, t);
      } else {
        std::uint8_t used = kNoStrategy;
        ttl = leave(d, y, t, dec.incoming, dec.what == Decision::kAbsence, &used);
        if (dec.incoming) st = tag(S::kPagingCause);
        if (used) st = used;
        if (dec.incoming || used) mark(ids, kMtAttributed, st);
      }
    }
    connect(d, x, t, ttl, ids, trig, st);
  }

  void on_attempt(std::uint32_t dev, int x, std::uint32_t token, bool consecutive) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    if (!s.paging || s.paging->token != token) return;
    const SimTime t = q_.now();
    Paging& p = *s.paging;
    p.proc.set_level_cells(level_cells(s, p.levels));
    for (auto id : p.mts) {
      Mt& m = mt(id);
      if (m.first_contact == kNever) m.first_contact = t;
    }
    const bool with_cause = active(S::kPagingCause, s) && p.kind == PagingKind::kCn;
    const std::uint8_t page_tag = consecutive ? tag(S::kConsecutivePos) : with_cause ? tag(S::kPagingCause) : p.strategy;
    if (p.kind == PagingKind::kRan) {
      msg(d, x, MsgKind::kPageRan, Node::kRan, Node::kUe, Segment::kRan, t, page_tag, p.mts.front());
    } else {
      msg(d, x, MsgKind::kPageCn, Node::kCn, Node::kRan, Segment::kCn, t, page_tag, p.mts.front());
    }
    if (consecutive) mark(p.mts, 0, tag(S::kConsecutivePos));

    const std::uint64_t cells = p.proc.scope_cells();
    AttemptResult r = receive(d, x, t, p);
    if (r == AttemptResult::kAnswered) {
      const Decision dec = decide(d, x, top_kind(p.mts));
      if (dec.what == Decision::kDecline) {
        const bool busy = active(S::kBusyIndication, s) && (p.kind == PagingKind::kCn || params().busy_in_inactive);
        p.declined = true;
        if (busy) {
          log_attempt(d, x, t, p, AttemptResult::kBusyReply, cells, tag(S::kBusyIndication));
          p.proc.record_attempt(true);
          const Segment seg = seg_of(S::kBusyIndication);
          msg(d, x, MsgKind::kBusyIndication, Node::kUe, node_of(S::kBusyIndication), seg, t + sw(d),
              tag(S::kBusyIndication), p.mts.front());
          const Duration away = 2 * sw(d) + delays().of(seg);
          const int y = d.attached;
          radio_procedure(d, x, t, away);
          if (y >= 0) interruption(d, y, t, away, InterruptCause::kTuneAway, tag(S::kBusyIndication));
          mark(p.mts, kMtAttributed, tag(S::kBusyIndication));
          finish_paging(d, x, PageResult::kBusy, t);
          return;
        }
        r = AttemptResult::kSilent;
        p.multisim_miss = true;
      } else {
        log_attempt(d, x, t, p, AttemptResult::kAnswered, cells, page_tag);
        p.proc.record_attempt(true);
        if (consecutive) mark(p.mts, kMtAttributed, tag(S::kConsecutivePos));
        if (d.attached >= 0 && d.attached != x && d.single_rx())
          mark(p.mts, kMtAttributed, tag(S::kSchedulingGap));
        const std::vector<std::uint64_t> ids = finish_paging(d, x, PageResult::kResponded, t);
        const TransitionTrigger trig =
            s.prof.inactive() ? TransitionTrigger::kResume : TransitionTrigger::kPagingResponse;
        take_call(d, x, t, dec, ids, trig, kNoStrategy);
        return;
      }
    }

    log_attempt(d, x, t, p, r, cells, page_tag);
    if (r == AttemptResult::kRxBusy || r == AttemptResult::kCollision || r == AttemptResult::kSuppressed)
      p.multisim_miss = true;
    const auto step = p.proc.record_attempt(false);
    if (step == PagingProcedure::Step::kExhausted) {
      finish_paging(d, x, PageResult::kFailed, t);
      return;
    }
    if (step == PagingProcedure::Step::kEscalated && p.declined) p.escalated_after_decline = true;

    const PagingSchedule& sched = p.kind == PagingKind::kRan ? s.ran : cn_schedule(s, t);
    SimTime next = sched.next_after(t);
    bool retry = false;
    if (r == AttemptResult::kCollision && !consecutive && active(S::kConsecutivePos, s)) {
      const Duration spacing = sched.spacing;
      if (basing(S::kConsecutivePos) == Deployment::kRan) {
        next = t + spacing;
      } else {
        const auto slots = (delays().nas.count() + spacing.count() - 1) / spacing.count();
        next = t + spacing * slots;
      }
      retry = true;
    }
    q_.schedule(next, [this, dev, x, token, retry] { on_attempt(dev, x, token, retry); });
  }

  std::vector<std::uint64_t> finish_paging(Device& d, int x, PageResult res, SimTime t) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    Paging p = std::move(*s.paging);
    s.paging.reset();
    LogRecord r = base(d, x, RecordKind::kPageOutcome, t);
    r.node = p.kind == PagingKind::kRan ? Node::kRan : Node::kCn;
    r.detail = static_cast<std::uint8_t>(res);
    std::uint8_t flags = 0;
    if (p.proc.escalated()) flags |= kPageEscalated;
    if (p.kind == PagingKind::kRan) flags |= kPageRan;
    if (p.multisim_miss) flags |= kPageMultiSimMiss;
    if (p.declined) flags |= kPageDeclined;
    if (p.escalated_after_decline) flags |= kPageDeclineEscalated;
    r.aux = flags;
    r.value = static_cast<std::int64_t>(p.proc.cells_paged());
    r.value2 = p.proc.attempts_used();
    r.strategy = p.strategy;
    r.mt = p.mts.front();
    log_.append(r);

    switch (res) {
      case PageResult::kResponded:
      case PageResult::kCancelled: break;
      case PageResult::kBusy:
        for (auto id : p.mts) resolve(id, MtOutcome::kUserDeclined, t);
        break;
      case PageResult::kFailed: {
        if (p.multisim_miss) {
          LogRecord m = base(d, x, RecordKind::kMisleading, t);
          m.node = r.node;
          m.detail = 0;
          m.aux = p.declined ? 1 : 0;
          m.mt = p.mts.front();
          log_.append(m);
        }
        if (p.kind == PagingKind::kCn) {
          for (auto id : p.mts) resolve(id, MtOutcome::kFailed, t);
          break;
        }
        msg(d, x, MsgKind::kUeUnreachable, Node::kRan, Node::kCn, Segment::kCn, t, kNoStrategy, p.mts.front());
        flush(d, t);
        apply_transition(d, x, RanState::kIdle, TransitionTrigger::kRanPagingFailure, t, kNoStrategy);
        std::vector<std::uint64_t> retry;
        for (auto id : p.mts) {
          if (sc_.ran_failure_fallback && mt(id).kind != ServiceKind::kData) {
            retry.push_back(id);
          } else {
            resolve(id, MtOutcome::kDiscarded, t);
          }
        }
        if (!retry.empty()) start_paging(d, x, PagingKind::kCn, std::move(retry), t, false, kNoStrategy);
        break;
      }
    }
    return p.mts;
  }

  // ------------------------------------------------------------ traffic

  void schedule_arrival(Device& d, int x, SimTime from) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const double per_hour = sc_.traffic.total_rate(s.prof.role);
    if (per_hour <= 0.0) return;
    const double mean_us = 3.6e9 / per_hour;
    const SimTime t = from + Duration(std::max<std::int64_t>(1, std::llround(s.traffic->exponential(mean_us))));
    if (t >= sc_.horizon) return;
    q_.schedule(t, [this, dev = d.id, x] { on_arrival(dev, x); });
  }

  void on_arrival(std::uint32_t dev, int x) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const SimTime t = q_.now();
    const double total = sc_.traffic.total_rate(s.prof.role);
    double u = s.traffic->uniform01() * total;
    ServiceKind kind = ServiceKind::kData;
    for (ServiceKind k : kAllServiceKinds) {
      const double r = sc_.traffic.rate(s.prof.role, k);
      if (r <= 0.0) continue;
      kind = k;
      if (u < r) break;
      u -= r;
    }
    const Duration mean = sc_.traffic.mean_duration[static_cast<std::size_t>(kind)];
    const Duration dur = kind == ServiceKind::kSms ? mean : std::max(Duration(1), s.durations->exponential(mean));

    Mt m;
    m.id = mts_.size() + 1;
    m.device = d.id;
    m.sim = x;
    m.kind = kind;
    m.arrival = t;
    m.duration = dur;
    mts_.push_back(m);
    LogRecord r = base(d, x, RecordKind::kMtArrival, t);
    r.node = Node::kUpf;
    r.detail = static_cast<std::uint8_t>(kind);
    r.aux = static_cast<std::uint8_t>(s.prof.role);
    r.mt = m.id;
    log_.append(r);
    schedule_arrival(d, x, t);
    handle_mt(d, x, m.id, t);
  }

  void hold(SimRt& s, std::uint64_t id, SimTime t, std::uint8_t strategy) {
    Mt& m = mt(id);
    if (m.first_contact == kNever) m.first_contact = t;
    m.flags |= kMtHeld;
    if (strategy) {
      m.flags |= kMtAttributed;
      if (!m.strategy) m.strategy = strategy;
    }
    s.held.push_back(id);
  }

  void handle_mt(Device& d, int x, std::uint64_t id, SimTime t) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    Mt& m = mt(id);
    if (s.paging) {
      s.paging->mts.push_back(id);
      return;
    }
    switch (s.view) {
      case NetView::kAwayAbsence:
        if (m.kind == ServiceKind::kData && params().absence_discards_data) {
          m.flags |= kMtAttributed;
          m.strategy = tag(S::kShortAbsence);
          resolve(id, MtOutcome::kDiscarded, t);
        } else {
          hold(s, id, t, tag(S::kShortAbsence));
        }
        return;
      case NetView::kAwayGraceful: hold(s, id, t, tag(S::kGracefulLeaving)); return;
      case NetView::kAwayHold: hold(s, id, t, tag(S::kLeaveAndReturn)); return;
      case NetView::kAwayUncoordinated: hold(s, id, t, kNoStrategy); return;
      case NetView::kNormal: break;
    }
    if (s.prof.connected()) {
      m.flags |= kMtDirect;
      deliver(d, x, id, std::max(t, s.ready_at));
      return;
    }
    if (s.prof.inactive()) {
      start_paging(d, x, PagingKind::kRan, {id}, t, false, kNoStrategy);
      return;
    }
    const bool with_cause = active(S::kPagingCause, s);
    msg(d, x, MsgKind::kDownlinkDataNotification, Node::kUpf, Node::kCn, Segment::kCn, t,
        with_cause ? tag(S::kPagingCause) : kNoStrategy, id);

    std::optional<S> notify;
    if (s.prof.role == SimRole::kSecondary) {
      for (S sid : sc_.strategies.active) {
        if ((sid == S::kPushNotification || sid == S::kSmsNotification ||
             (sid == S::kNon3gppNotification && sc_.devices.n3iwf_registered)) &&
            active(sid, s)) {
          notify = sid;
          break;
        }
      }
    }
    if (notify == S::kNon3gppNotification) {
      m.first_contact = t;
      msg(d, x, MsgKind::kN3iwfNotification, Node::kN3iwf, Node::kUe, Segment::kInter, t + delays().nas,
          tag(*notify), id);
      const SimTime at = t + delays().nas + delays().inter;
      q_.schedule(at, [this, dev = d.id, x, id] { on_notification(dev, x, id, S::kNon3gppNotification); });
      return;
    }
    start_paging(d, x, PagingKind::kCn, {id}, t, false, kNoStrategy);
    if (notify == S::kPushNotification) {
      msg(d, x, MsgKind::kPushNotification, Node::kPagingServer, Node::kUe, Segment::kInter,
          t + params().push_delay, tag(*notify), id);
      const SimTime at = t + params().push_delay + params().user_plane_delay;
      q_.schedule(at, [this, dev = d.id, x, id] { on_notification(dev, x, id, S::kPushNotification); });
    } else if (notify == S::kSmsNotification) {
      if (!s.sms) s.sms.emplace(seed_, d.id, static_cast<std::uint64_t>(x), StreamPurpose::kSmsDelay);
      const Duration delay = sms_delay(*s.sms, params().sms_min_delay, params().sms_mean_delay);
      msg(d, x, MsgKind::kSmsNotification, Node::kSmsc, Node::kUe, Segment::kInter, t, tag(*notify), id);
      q_.schedule(t + delay, [this, dev = d.id, x, id] { on_notification(dev, x, id, S::kSmsNotification); });
    }
  }

  void push_ignored(const Device& d, int x, SimTime t, S via, std::uint64_t id) {
    LogRecord r = base(d, x, RecordKind::kPushIgnored, t);
    r.strategy = tag(via);
    r.mt = id;
    log_.append(r);
  }

  void on_notification(std::uint32_t dev, int x, std::uint64_t id, S via) {
    Device& d = devs_[dev];
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    const SimTime t = q_.now();
    Mt& m = mt(id);
    if (m.resolved) {
      push_ignored(d, x, t, via, id);
      return;
    }
    if (m.first_contact == kNever) m.first_contact = t;
    if (s.prof.connected() && d.attached == x) {
      deliver(d, x, id, std::max(t, s.ready_at));
      return;
    }
    const bool via_other = d.attached >= 0 && d.attached != x;
    if (via != S::kNon3gppNotification && !via_other) {
      // Only reachable over the other SIM's active connection; the direct
      // page is still running.
      push_ignored(d, x, t, via, id);
      return;
    }
    const Decision dec = decide(d, x, m.kind);
    if (dec.what == Decision::kDecline) {
      if (via == S::kNon3gppNotification) {
        m.flags |= kMtNotified | kMtAttributed;
        m.strategy = tag(via);
        resolve(id, MtOutcome::kUserDeclined, t);
      }
      return;
    }
    std::vector<std::uint64_t> ids;
    if (s.paging && std::find(s.paging->mts.begin(), s.paging->mts.end(), id) != s.paging->mts.end()) {
      ids = finish_paging(d, x, PageResult::kCancelled, t);
    } else {
      ids = {id};
    }
    mark(ids, kMtNotified | kMtAttributed, tag(via));
    const TransitionTrigger trig = s.prof.inactive() ? TransitionTrigger::kResume : TransitionTrigger::kServiceRequest;
    take_call(d, x, t, dec, ids, trig, tag(via));
  }

  // ----------------------------------------------------------- mobility

  void location_update(Device& d, int x, SimTime t) {
    SimRt& s = d.sims[static_cast<std::size_t>(x)];
    s.update_pending = false;
    const CellId cell = cell_of(d, s);
    const TaId ta = net(s).topology.ta_of(cell);
    if (!contains(s.prof.ta_list, ta)) {
      const MsgKind kind = s.gen == Generation::k4G ? MsgKind::kTauRequest : MsgKind::kRauRequest;
      msg(d, x, kind, Node::kUe, Node::kCn, Segment::kCn, t, kNoStrategy);
      msg(d, x, MsgKind::kRegistrationAccept, Node::kCn, Node::kUe, Segment::kCn, t + delays().nas, kNoStrategy);
      complete_location_update(s.prof, net(s), ta);
      s.last_cell = cell;
      if (s.prof.inactive()) s.rna = net(s).topology.rna_around(ta);
      if (!s.prof.connected()) radio_procedure(d, x, t, 2 * delays().nas);
    } else if (s.prof.inactive() && !contains(s.rna, ta)) {
      msg(d, x, MsgKind::kRnaUpdate, Node::kUe, Node::kRan, Segment::kRan, t, kNoStrategy);
      msg(d, x, MsgKind::kRrcSuspend, Node::kRan, Node::kUe, Segment::kRan, t + delays().as, kNoStrategy);
      s.prof.current_ta = ta;
      s.rna = net(s).topology.rna_around(ta);
      s.last_cell = cell;
      radio_procedure(d, x, t, 2 * delays().as);
    }
  }

  void on_move_event(std::uint32_t dev, MobilityStep step) {
    Device& d = devs_[dev];
    const SimTime t = q_.now();
    d.spot = step.spot;
    for (int x = 0; x < static_cast<int>(d.sims.size()); ++x) {
      SimRt& s = d.sims[static_cast<std::size_t>(x)];
      if (!s.prof.registered()) continue;
      const CellId cell = cell_of(d, s);
      if (s.prof.connected()) {
        if (d.attached == x) {
          on_move(s.prof, net(s), cell, s.rna, t);
          s.last_cell = cell;
        }
        continue;
      }
      const MoveResult mr = on_move(s.prof, net(s), cell, s.rna, t);
      if (!mr.update) continue;
      if (d.attached < 0) {
        location_update(d, x, t);
      } else if (d.attached != x && active(S::kShortAbsence, d.sims[static_cast<std::size_t>(d.attached)]) &&
                 basing(S::kShortAbsence) == Deployment::kRan && !d.away) {
        // Step away from the busy SIM just long enough for the update.
        const int y = d.attached;
        std::uint8_t used = kNoStrategy;
        const Duration ttl = leave(d, y, t, std::nullopt, true, &used);
        const SimTime at = t + ttl;
        const std::uint32_t atok = d.away->token;
        q_.schedule(at, [this, dev, x, atok] {
          Device& dd = devs_[dev];
          location_update(dd, x, q_.now());
          const SimTime done = q_.now() + 2 * delays().nas;
          q_.schedule(done, [this, dev, atok] {
            Device& d2 = devs_[dev];
            if (d2.away && d2.away->token == atok && d2.attached < 0) return_to(d2, q_.now());
          });
        });
      } else {
        s.update_pending = true;
      }
    }
    const MobilityStep next = next_step(sc_.mobility, step, *d.mobility);
    if (next.time < sc_.horizon) q_.schedule(next.time, [this, dev, next] { on_move_event(dev, next); });
  }

  // -------------------------------------------------------- registration

  int effective_rx(const Device& d) const { return d.single_rx() ? 1 : 2; }

  void log_collisions(const Device& d, SimTime t, std::uint8_t phase, std::uint8_t strategy) {
    const int n = static_cast<int>(d.sims.size());
    for (int j = 1; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        const auto& a = d.sims[static_cast<std::size_t>(j)];
        const auto& b = d.sims[static_cast<std::size_t>(i)];
        const auto rep = detect_collision(cn_schedule(a, kFar), cn_schedule(b, kFar), effective_rx(d));
        LogRecord r = base(d, j, RecordKind::kCollision, t);
        r.detail = phase;
        r.aux = rep.systematic ? 1 : 0;
        r.value = std::llround(rep.fraction_colliding * 1e6);
        r.value2 = i;
        r.strategy = strategy;
        log_.append(r);
      }
    }
  }

  std::vector<PagingSchedule> schedules_before(const Device& d, int j) const {
    std::vector<PagingSchedule> out;
    for (int i = 0; i < j; ++i) out.push_back(cn_schedule(d.sims[static_cast<std::size_t>(i)], kFar));
    return out;
  }

  void avoid_collisions(Device& d, SimTime t) {
    std::optional<S> which;
    for (S id : sc_.strategies.active)
      if (id == S::kNasParameterChange || id == S::kAlternativeUeId || id == S::kPagingOffset) which = id;
    log_collisions(d, t, 0, kNoStrategy);
    const int n = static_cast<int>(d.sims.size());
    const int rx = effective_rx(d);
    const std::uint8_t st = which ? tag(*which) : kNoStrategy;

    if (which == S::kPagingOffset) {
      std::vector<PagingSchedule> base_scheds;
      for (auto& s : d.sims) {
        s.offset = Duration::zero();
        recompute_schedules(s);
        base_scheds.push_back(cn_schedule(s, kFar));
      }
      const OffsetAssignment a = assign_paging_offsets(base_scheds, params().offset_grid, rx);
      if (!a.feasible) {
        error(d, kNoSim, t, ErrorCode::kNoFeasibleOffset, st);
      } else {
        for (int j = 0; j < n; ++j) {
          SimRt& s = d.sims[static_cast<std::size_t>(j)];
          if (a.offsets[static_cast<std::size_t>(j)] == Duration::zero()) continue;
          s.offset = a.offsets[static_cast<std::size_t>(j)];
          recompute_schedules(s);
          msg(d, j, MsgKind::kOffsetAssignment, node_of(S::kPagingOffset), Node::kUe, seg_of(S::kPagingOffset), t, st);
        }
      }
    } else if (which == S::kNasParameterChange || which == S::kAlternativeUeId) {
      for (int j = 1; j < n; ++j) {
        SimRt& s = d.sims[static_cast<std::size_t>(j)];
        if (!active(*which, s)) continue;
        const auto others = schedules_before(d, j);
        if (collision_free(cn_schedule(s, kFar), others, rx)) continue;
        const auto& cfg = net(s).paging;
        if (which == S::kNasParameterChange) {
          msg(d, j, MsgKind::kRegistrationRequest, Node::kUe, Node::kCn, Segment::kCn, t, st);
          if (!d.guti) d.guti.emplace(seed_, d.id, static_cast<std::uint64_t>(j), StreamPurpose::kGutiFit);
          const NasChangeResult res = nas_parameter_change(s.cn_base, cfg, lw(s), others, rx,
                                                           params().guti_fit_tries, params().offset_grid, *d.guti);
          if (res.new_guti) {
            s.prof.identity.temporal_cn_id = *res.new_guti;
            recompute_schedules(s);
            msg(d, j, MsgKind::kGutiReassignment, Node::kCn, Node::kUe, Segment::kCn, t + delays().nas, st);
          } else if (res.offset) {
            s.offset = *res.offset;
            recompute_schedules(s);
            msg(d, j, MsgKind::kOffsetAssignment, Node::kCn, Node::kUe, Segment::kCn, t + delays().nas, st);
          } else {
            error(d, j, t, ErrorCode::kNoFeasibleOffset, st);
          }
        } else {
          const auto alt = choose_alternative_id(paging_identity(s.prof, s.gen, PagingKind::kCn), cfg, s.offset,
                                                 lw(s), others, rx);
          if (!alt) {
            error(d, j, t, ErrorCode::kNoFeasibleOffset, st);
            continue;
          }
          msg(d, j, MsgKind::kAltUeIdRequest, Node::kUe, Node::kCn, Segment::kCn, t, st);
          msg(d, j, MsgKind::kAltUeIdConfirm, Node::kCn, Node::kUe, Segment::kCn, t + delays().nas, st);
          s.alt_id = *alt;
          s.alt_from = t + 2 * delays().nas;
          recompute_schedules(s);
        }
      }
    }
    log_collisions(d, t, 1, st);
  }

  void on_refresh(std::uint32_t dev) {
    Device& d = devs_[dev];
    const SimTime t = q_.now();
    flush(d, t);
    for (int x = 0; x < static_cast<int>(d.sims.size()); ++x) {
      SimRt& s = d.sims[static_cast<std::size_t>(x)];
      s.prof.identity = regenerate_temporal_ids(s.prof.identity, *s.ids);
      s.alt_id.reset();
      s.alt_from = kNever;
      s.offset = Duration::zero();
      recompute_schedules(s);
      msg(d, x, MsgKind::kGutiReassignment, Node::kCn, Node::kUe, Segment::kCn, t, kNoStrategy);
    }
    avoid_collisions(d, t);
    const SimTime next = t + sc_.devices.refresh_period;
    if (next < sc_.horizon) q_.schedule(next, [this, dev] { on_refresh(dev); });
  }

  void init() {
    const std::uint32_t n = sc_.devices.count;
    devs_.reserve(n);
    UeDevice hw;
    hw.num_rx = sc_.devices.num_rx;
    hw.num_tx = sc_.devices.num_tx;
    hw.mode = sc_.devices.mode;
    hw.switch_delay = sc_.devices.switch_delay;
    hw.user_policy = sc_.devices.policy;
    const int nsims = sc_.num_sims();
    const SimTime zero{0};

    for (std::uint32_t i = 0; i < n; ++i) {
      devs_.emplace_back(i, hw);
      Device& d = devs_.back();
      d.mobility.emplace(seed_, i, 0, StreamPurpose::kMobility);
      d.spot = static_cast<std::uint32_t>(d.mobility->uniform_int(0, std::max<std::uint32_t>(1, sc_.mobility.spots) - 1));
      for (int x = 0; x < nsims; ++x) {
        SimRt s;
        s.net = sc_.devices.sim_networks[static_cast<std::size_t>(x)];
        s.gen = net(s).generation;
        s.prof.sim_index = static_cast<std::uint8_t>(x);
        s.prof.role = x == 0 ? SimRole::kPrimary : SimRole::kSecondary;
        RngStream identity(seed_, i, static_cast<std::uint64_t>(x), StreamPurpose::kIdentity);
        s.prof.identity.imsi = 100000000000000ULL + identity.uniform_int(0, 899999999999999ULL);
        s.prof.identity.refresh_period = sc_.devices.refresh_period;
        s.traffic.emplace(seed_, i, static_cast<std::uint64_t>(x), StreamPurpose::kTraffic);
        s.durations.emplace(seed_, i, static_cast<std::uint64_t>(x), StreamPurpose::kServiceDuration);
        s.ids.emplace(seed_, i, static_cast<std::uint64_t>(x), StreamPurpose::kTemporalId);
        d.sims.push_back(std::move(s));
      }
      d.hw.sims.clear();
      for (int x = 0; x < nsims; ++x) {
        SimRt& s = d.sims[static_cast<std::size_t>(x)];
        const CellId cell = cell_of(d, s);
        log_messages(d, x, register_sim(s.prof, net(s), cell, *s.ids, zero), kNoStrategy);
        s.last_cell = cell;
        recompute_schedules(s);
      }
      const bool secondary_5g = std::any_of(d.sims.begin() + 1, d.sims.end(),
                                            [](const SimRt& s) { return s.gen == Generation::k5G; });
      if (sc_.strategies.has(S::kPushNotification) && secondary_5g)
        msg(d, 0, MsgKind::kPagingRegistration, Node::kUe, Node::kPagingServer, Segment::kInter, zero,
            tag(S::kPushNotification));
      if (sc_.strategies.has(S::kNon3gppNotification) && sc_.devices.n3iwf_registered)
        msg(d, 1, MsgKind::kN3iwfRegistration, Node::kUe, Node::kN3iwf, Segment::kInter, zero,
            tag(S::kNon3gppNotification));
      avoid_collisions(d, zero);

      for (int x = 0; x < nsims; ++x) schedule_arrival(d, x, zero);
      const MobilityStep first = next_step(sc_.mobility, {zero, d.spot}, *d.mobility);
      if (first.time < sc_.horizon) q_.schedule(first.time, [this, i, first] { on_move_event(i, first); });
      if (sc_.devices.refresh_period != kNever && sc_.devices.refresh_period < sc_.horizon)
        q_.schedule(SimTime(sc_.devices.refresh_period), [this, i] { on_refresh(i); });
    }
  }

  void finish() {
    const SimTime end = sc_.horizon;
    for (auto& d : devs_) {
      flush(d, std::max(end, d.last_flush));
      for (const auto& res : d.arb.reservations()) {
        if (res.end <= res.start) continue;
        LogRecord r = base(d, res.sim, RecordKind::kRadioGrant, res.start);
        r.detail = static_cast<std::uint8_t>(res.resource);
        r.aux = static_cast<std::uint8_t>(res.use);
        r.value = res.start.count();
        r.value2 = std::min(res.end, std::max(q_.now(), end)).count();
        log_.append(r);
      }
    }
    for (auto& m : mts_) {
      if (m.resolved) continue;
      error(devs_[m.device], m.sim, q_.now(), ErrorCode::kPagingFailed, kNoStrategy, 1, m.id);
      resolve(m.id, MtOutcome::kFailed, q_.now());
    }
  }

  const Scenario& sc_;
  std::uint64_t seed_;
  EventQueue q_;
  EventLog log_;
  std::vector<Device> devs_;
  std::deque<Mt> mts_;
};

}  // namespace

RunResult run(const Scenario& scenario, std::uint64_t seed) {
  require_valid(scenario);
  Engine engine(scenario, seed);
  return engine.run();
}

}  // namespace msim
