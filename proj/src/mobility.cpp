#include "msim/mobility.hpp"

#include <sstream>

namespace msim {

namespace {

SimMessage msg(MsgKind kind, Node from, Node to, Segment seg, const SimProfile& sim, SimTime t) {
  SimMessage m;
  m.kind = kind;
  m.origin = from;
  m.destination = to;
  m.segment = seg;
  m.sim_index = sim.sim_index;
  m.timestamp = t;
  return m;
}

[[noreturn]] void illegal(const SimProfile& sim, Generation g, RanState target) {
  std::ostringstream os;
  os << "SIM " << int(sim.sim_index) << " on " << to_string(g) << ": (" << to_string(sim.cn_state)
     << ", " << to_string(sim.ran_state) << ") -> " << to_string(target);
  throw Error(ErrorCode::kIllegalTransition, os.str());
}

}  // namespace

std::vector<SimMessage> register_sim(SimProfile& sim, const NetworkModel& net, CellId cell,
                                     RngStream& ids, SimTime now) {
  if (sim.cn_state != CnState::kDeregistered)
    throw Error(ErrorCode::kIllegalTransition, "register needs a DEREGISTERED SIM");
  sim.plmn = net.id;
  sim.identity = regenerate_temporal_ids(sim.identity, ids);
  sim.cn_state = CnState::kIdle;
  sim.ran_state = RanState::kIdle;
  sim.current_ta = net.topology.ta_of(cell);
  sim.ta_list = net.topology.ta_list_around(sim.current_ta);
  return {msg(MsgKind::kRegistrationRequest, Node::kUe, Node::kCn, Segment::kCn, sim, now),
          msg(MsgKind::kRegistrationAccept, Node::kCn, Node::kUe, Segment::kCn, sim, now)};
}

MoveResult on_move(SimProfile& sim, const NetworkModel& net, CellId new_cell,
                   const std::vector<TaId>& rna, SimTime now) {
  MoveResult out;
  out.new_ta = net.topology.ta_of(new_cell);
  if (!sim.registered()) return out;

  if (sim.connected()) {
    sim.current_ta = out.new_ta;
    if (!contains(sim.ta_list, out.new_ta)) sim.ta_list = net.topology.ta_list_around(out.new_ta);
    return out;
  }
  if (!contains(sim.ta_list, out.new_ta)) {
    const MsgKind kind = net.generation == Generation::k4G ? MsgKind::kTauRequest : MsgKind::kRauRequest;
    out.update = msg(kind, Node::kUe, Node::kCn, Segment::kCn, sim, now);
    return out;
  }
  sim.current_ta = out.new_ta;
  if (sim.inactive() && !contains(rna, out.new_ta))
    out.update = msg(MsgKind::kRnaUpdate, Node::kUe, Node::kRan, Segment::kRan, sim, now);
  return out;
}

void complete_location_update(SimProfile& sim, const NetworkModel& net, TaId new_ta) {
  sim.current_ta = new_ta;
  sim.ta_list = net.topology.ta_list_around(new_ta);
}

int transition_units(RanState from, RanState to) {
  if (to == RanState::kConnected) {
    if (from == RanState::kIdle) return 6;
    if (from == RanState::kInactive) return 3;
  }
  if (from == RanState::kConnected) return 1;
  return 0;
}

TransitionResult transition(SimProfile& sim, Generation g, RanState target, TransitionTrigger trigger,
                            const LinkDelays& d, SimTime now) {
  (void)trigger;
  TransitionResult r;
  if (!sim.registered()) illegal(sim, g, target);
  const RanState from = sim.ran_state;

  if (target == RanState::kConnected && from == RanState::kIdle) {
    r.messages = {msg(MsgKind::kRandomAccess, Node::kUe, Node::kRan, Segment::kRan, sim, now),
                  msg(MsgKind::kServiceRequest, Node::kUe, Node::kCn, Segment::kCn, sim, now + d.as),
                  msg(MsgKind::kContextSetup, Node::kCn, Node::kRan, Segment::kCn, sim, now + d.as + d.nas),
                  msg(MsgKind::kRrcSetup, Node::kRan, Node::kUe, Segment::kRan, sim, now + d.as + 2 * d.nas)};
    r.latency = 2 * d.as + 2 * d.nas;
    sim.cn_state = CnState::kConnected;
    sim.ran_state = RanState::kConnected;
  } else if (target == RanState::kConnected && from == RanState::kInactive) {
    if (g != Generation::k5G) illegal(sim, g, target);
    r.messages = {msg(MsgKind::kRandomAccess, Node::kUe, Node::kRan, Segment::kRan, sim, now),
                  msg(MsgKind::kRrcResumeRequest, Node::kUe, Node::kRan, Segment::kRan, sim, now + d.as),
                  msg(MsgKind::kRrcResume, Node::kRan, Node::kUe, Segment::kRan, sim, now + 2 * d.as)};
    r.latency = 3 * d.as;
    sim.ran_state = RanState::kConnected;
  } else if (target == RanState::kIdle && from == RanState::kConnected) {
    r.messages = {msg(MsgKind::kRrcRelease, Node::kRan, Node::kUe, Segment::kRan, sim, now)};
    r.latency = d.as;
    sim.cn_state = CnState::kIdle;
    sim.ran_state = RanState::kIdle;
  } else if (target == RanState::kInactive && from == RanState::kConnected) {
    if (g != Generation::k5G) illegal(sim, g, target);
    r.messages = {msg(MsgKind::kRrcSuspend, Node::kRan, Node::kUe, Segment::kRan, sim, now)};
    r.latency = d.as;
    sim.ran_state = RanState::kInactive;
  } else if (target == RanState::kIdle && from == RanState::kInactive) {
    if (g != Generation::k5G) illegal(sim, g, target);
    sim.cn_state = CnState::kIdle;
    sim.ran_state = RanState::kIdle;
  } else {
    illegal(sim, g, target);
  }
  for (const auto& m : r.messages) r.units += m.weight();
  return r;
}

CellId cell_at(std::uint32_t spot, std::uint32_t spots, const TopologyModel& topo) {
  if (spots == 0) return 0;
  return static_cast<CellId>((static_cast<std::uint64_t>(spot % spots) * topo.num_cells) / spots);
}

MobilityStep next_step(const MobilityModel& model, const MobilityStep& from, RngStream& rng) {
  if (model.mean_dwell == kNever || model.spots < 2) return {kNever, from.spot};
  const Duration dwell = std::max(Duration(1), rng.exponential(model.mean_dwell));
  const bool right = rng.bernoulli(0.5);
  const std::uint32_t spot = right ? (from.spot + 1) % model.spots : (from.spot + model.spots - 1) % model.spots;
  return {from.time + dwell, spot};
}

std::vector<MobilityStep> mobility_trace(const MobilityModel& model, std::uint32_t start_spot,
                                         Duration horizon, RngStream& rng) {
  std::vector<MobilityStep> trace{{SimTime(0), start_spot % std::max<std::uint32_t>(1, model.spots)}};
  for (;;) {
    const MobilityStep s = next_step(model, trace.back(), rng);
    if (s.time >= horizon) break;
    trace.push_back(s);
  }
  return trace;
}

}  // namespace msim
