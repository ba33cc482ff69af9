#include "msim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace msim {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); }

// Rejects keys outside `allowed` so a misspelt field is an error rather than
// a silent default.
void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) bad(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      bad(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key + ": wrong type");
  }
}

// Durations are written as milliseconds (or seconds for `_s` keys); null
// means "never".
void read_ms(const json& j, const char* key, Duration& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_null()) {
    out = kNever;
    return;
  }
  if (!v.is_number()) bad(where + "." + key + ": expected a number of milliseconds");
  out = from_ms(v.get<double>());
}

void read_s(const json& j, const char* key, Duration& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_null()) {
    out = kNever;
    return;
  }
  if (!v.is_number()) bad(where + "." + key + ": expected a number of seconds");
  out = from_ms(v.get<double>() * 1000.0);
}

json ms(Duration d) { return d == kNever ? json(nullptr) : json(to_ms(d)); }
json secs(Duration d) { return d == kNever ? json(nullptr) : json(to_ms(d) / 1000.0); }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Generation parse_generation(const json& v, const std::string& where) {
  const std::string s = v.is_string() ? lower(v.get<std::string>()) : "";
  if (s == "5g") return Generation::k5G;
  if (s == "4g") return Generation::k4G;
  bad(where + ": generation must be \"4G\" or \"5G\"");
}

PagingScope parse_scope(const std::string& s, const std::string& where) {
  for (auto p : {PagingScope::kLastCell, PagingScope::kTaList, PagingScope::kRna, PagingScope::kFullRegistrationArea})
    if (to_string(p) == s) return p;
  bad(where + ": unknown paging scope '" + s + "'");
}

NetworkModel network_from_json(const json& j, std::size_t index) {
  const std::string where = "networks[" + std::to_string(index) + "]";
  check_keys(j, where, {"id", "name", "mno", "generation", "suspend_on_release", "topology", "paging"});
  NetworkModel n;
  n.id = static_cast<NetworkId>(index);
  read(j, "id", n.id, where);
  read(j, "name", n.name, where);
  read(j, "mno", n.mno, where);
  if (j.contains("generation")) n.generation = parse_generation(j.at("generation"), where + ".generation");
  read(j, "suspend_on_release", n.suspend_on_release, where);
  if (j.contains("topology")) {
    const json& t = j.at("topology");
    const std::string w = where + ".topology";
    check_keys(t, w, {"num_cells", "cells_per_ta", "tas_per_raa", "ta_list_radius", "rna_ta_radius"});
    read(t, "num_cells", n.topology.num_cells, w);
    read(t, "cells_per_ta", n.topology.cells_per_ta, w);
    read(t, "tas_per_raa", n.topology.tas_per_raa, w);
    read(t, "ta_list_radius", n.topology.ta_list_radius, w);
    read(t, "rna_ta_radius", n.topology.rna_ta_radius, w);
  }
  if (j.contains("paging")) {
    const json& p = j.at("paging");
    const std::string w = where + ".paging";
    check_keys(p, w, {"drx_cycle_frames", "occasions_per_frame", "frame_ms", "frame_offset_ms", "max_attempts",
                      "escalation"});
    read(p, "drx_cycle_frames", n.paging.drx_cycle_frames, w);
    read(p, "occasions_per_frame", n.paging.occasions_per_frame, w);
    read_ms(p, "frame_ms", n.paging.frame_duration, w);
    read_ms(p, "frame_offset_ms", n.paging.frame_offset, w);
    read(p, "max_attempts", n.paging.max_attempts, w);
    if (p.contains("escalation")) {
      std::vector<std::string> names;
      read(p, "escalation", names, w);
      n.paging.escalation_levels.clear();
      for (const auto& s : names) n.paging.escalation_levels.push_back(parse_scope(s, w + ".escalation"));
    }
  }
  return n;
}

json network_to_json(const NetworkModel& n) {
  json esc = json::array();
  for (auto l : n.paging.escalation_levels) esc.push_back(std::string(to_string(l)));
  return json{{"id", n.id},
              {"name", n.name},
              {"mno", n.mno},
              {"generation", std::string(to_string(n.generation))},
              {"suspend_on_release", n.suspend_on_release},
              {"topology",
               {{"num_cells", n.topology.num_cells},
                {"cells_per_ta", n.topology.cells_per_ta},
                {"tas_per_raa", n.topology.tas_per_raa},
                {"ta_list_radius", n.topology.ta_list_radius},
                {"rna_ta_radius", n.topology.rna_ta_radius}}},
              {"paging",
               {{"drx_cycle_frames", n.paging.drx_cycle_frames},
                {"occasions_per_frame", n.paging.occasions_per_frame},
                {"frame_ms", to_ms(n.paging.frame_duration)},
                {"frame_offset_ms", to_ms(n.paging.frame_offset)},
                {"max_attempts", n.paging.max_attempts},
                {"escalation", esc}}}};
}

PolicyTable policy_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected a list of rules");
  PolicyTable t;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& r = j[i];
    check_keys(r, w, {"incoming", "activity", "action"});
    PolicyRule rule;
    if (r.contains("incoming") && !r.at("incoming").is_null()) {
      const std::string s = r.at("incoming").is_string() ? r.at("incoming").get<std::string>() : "";
      if (s != "ANY") {
        rule.incoming = parse_service_kind(s);
        if (!rule.incoming) bad(w + ".incoming: unknown service '" + s + "'");
      }
    }
    if (r.contains("activity")) {
      const std::string s = r.at("activity").is_string() ? r.at("activity").get<std::string>() : "";
      const auto a = parse_activity_match(s);
      if (!a) bad(w + ".activity: unknown activity '" + s + "'");
      rule.activity = *a;
    }
    if (!r.contains("action")) bad(w + ": missing action");
    const std::string s = r.at("action").is_string() ? r.at("action").get<std::string>() : "";
    const auto a = parse_policy_action(s);
    if (!a) bad(w + ".action: unknown action '" + s + "'");
    rule.action = *a;
    t.rules.push_back(rule);
  }
  return t;
}

json policy_to_json(const PolicyTable& t) {
  json out = json::array();
  for (const auto& r : t.rules) {
    out.push_back({{"incoming", r.incoming ? std::string(to_string(*r.incoming)) : std::string("ANY")},
                   {"activity", std::string(to_string(r.activity))},
                   {"action", std::string(to_string(r.action))}});
  }
  return out;
}

constexpr std::array<const char*, 4> kKindKeys = {"voice", "sms", "data", "emergency"};

void read_per_kind(const json& j, const std::string& where, std::array<double, 4>& out) {
  check_keys(j, where, {"voice", "sms", "data", "emergency"});
  for (std::size_t k = 0; k < 4; ++k) read(j, kKindKeys[k], out[k], where);
}

StrategyId strategy_from_json(const json& v, const std::string& where) {
  std::optional<StrategyId> id;
  if (v.is_number_integer()) {
    id = strategy_from_number(v.get<int>());
    if (!id) bad(where + ": unknown strategy id " + std::to_string(v.get<int>()));
  } else if (v.is_string()) {
    id = parse_strategy(v.get<std::string>());
    if (!id) bad(where + ": unknown strategy '" + v.get<std::string>() + "'");
  } else {
    bad(where + ": strategy must be a number or a name");
  }
  return *id;
}

StrategyStack stack_from_json(const json& j) {
  const std::string where = "strategies";
  check_keys(j, where, {"active", "deployment", "params"});
  StrategyStack s;
  if (j.contains("active")) {
    const json& a = j.at("active");
    if (!a.is_array()) bad(where + ".active: expected a list");
    for (std::size_t i = 0; i < a.size(); ++i)
      s.active.push_back(strategy_from_json(a[i], where + ".active[" + std::to_string(i) + "]"));
  }
  if (j.contains("deployment")) {
    const json& d = j.at("deployment");
    if (!d.is_object()) bad(where + ".deployment: expected an object");
    for (const auto& [key, value] : d.items()) {
      const auto id = parse_strategy(key);
      if (!id) bad(where + ".deployment: unknown strategy '" + key + "'");
      const auto dep = value.is_string() ? parse_deployment(value.get<std::string>()) : std::nullopt;
      if (!dep) bad(where + ".deployment." + key + ": expected \"RAN\" or \"CN\"");
      s.deployment[*id] = *dep;
    }
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    const std::string w = where + ".params";
    check_keys(p, w,
               {"absence_ms", "absence_discards_data", "busy_in_inactive", "local_leave_suspend",
                "inactive_threshold_ms", "hold_interval_ms", "gap_grant_probability", "push_delay_ms",
                "user_plane_delay_ms", "sms_min_delay_ms", "sms_mean_delay_ms", "guti_fit_tries",
                "offset_grid_ms"});
    auto& q = s.params;
    read_ms(p, "absence_ms", q.absence_duration, w);
    read(p, "absence_discards_data", q.absence_discards_data, w);
    read(p, "busy_in_inactive", q.busy_in_inactive, w);
    read(p, "local_leave_suspend", q.local_leave_suspend, w);
    read_ms(p, "inactive_threshold_ms", q.inactive_threshold, w);
    read_ms(p, "hold_interval_ms", q.hold_interval, w);
    read(p, "gap_grant_probability", q.gap_grant_probability, w);
    read_ms(p, "push_delay_ms", q.push_delay, w);
    read_ms(p, "user_plane_delay_ms", q.user_plane_delay, w);
    read_ms(p, "sms_min_delay_ms", q.sms_min_delay, w);
    read_ms(p, "sms_mean_delay_ms", q.sms_mean_delay, w);
    read(p, "guti_fit_tries", q.guti_fit_tries, w);
    read_ms(p, "offset_grid_ms", q.offset_grid, w);
  }
  return s;
}

json stack_to_json(const StrategyStack& s) {
  json active = json::array();
  for (auto id : s.active) active.push_back(static_cast<int>(id));
  json dep = json::object();
  for (const auto& [id, d] : s.deployment) dep[std::to_string(static_cast<int>(id))] = std::string(to_string(d));
  const auto& q = s.params;
  return json{{"active", active},
              {"deployment", dep},
              {"params",
               {{"absence_ms", ms(q.absence_duration)},
                {"absence_discards_data", q.absence_discards_data},
                {"busy_in_inactive", q.busy_in_inactive},
                {"local_leave_suspend", q.local_leave_suspend},
                {"inactive_threshold_ms", ms(q.inactive_threshold)},
                {"hold_interval_ms", ms(q.hold_interval)},
                {"gap_grant_probability", q.gap_grant_probability},
                {"push_delay_ms", ms(q.push_delay)},
                {"user_plane_delay_ms", ms(q.user_plane_delay)},
                {"sms_min_delay_ms", ms(q.sms_min_delay)},
                {"sms_mean_delay_ms", ms(q.sms_mean_delay)},
                {"guti_fit_tries", q.guti_fit_tries},
                {"offset_grid_ms", ms(q.offset_grid)}}}};
}

template <typename F>
void collect(std::vector<std::string>& out, const std::string& prefix, F&& check) {
  try {
    check();
  } catch (const std::exception& e) {
    out.push_back(prefix + e.what());
  }
}

}  // namespace

double TrafficModel::total_rate(SimRole role) const {
  double sum = 0.0;
  for (double r : rate_per_hour[static_cast<std::size_t>(role)]) sum += r;
  return sum;
}

ScenarioProfile Scenario::profile() const {
  ScenarioProfile p;
  for (int x = 0; x < num_sims(); ++x) {
    const auto idx = devices.sim_networks[static_cast<std::size_t>(x)];
    if (idx >= 0 && static_cast<std::size_t>(idx) < networks.size()) p.generations.insert(network_of_sim(x).generation);
  }
  return p;
}

ScenarioClass classify(const Scenario& s) {
  ScenarioClass c;
  std::set<std::string> mnos;
  std::set<int> plmns;
  for (int x = 0; x < s.num_sims(); ++x) {
    const NetworkModel& n = s.network_of_sim(x);
    if (x) c.generations += "+";
    c.generations += to_string(n.generation);
    mnos.insert(n.mno.empty() ? n.name : n.mno);
    plmns.insert(n.id);
  }
  c.receivers = s.devices.num_rx >= 2 ? "dual Rx" : "single Rx";
  c.operators = mnos.size() == 1 ? "same MNO" : "different MNO";
  c.camping = plmns.size() == 1 ? "same PLMN" : "different PLMN";
  for (ServiceKind k : kAllServiceKinds) {
    if (s.traffic.rate(SimRole::kPrimary, k) <= 0.0 && s.traffic.rate(SimRole::kSecondary, k) <= 0.0) continue;
    if (!c.services.empty()) c.services += ", ";
    std::string name = lower(std::string(to_string(k)));
    if (k == ServiceKind::kSms) name = "SMS";
    c.services += name;
  }
  if (c.services.empty()) c.services = "none";
  return c;
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  if (s.networks.empty()) out.push_back("at least one network is required");
  std::set<NetworkId> ids;
  for (std::size_t i = 0; i < s.networks.size(); ++i) {
    const auto& n = s.networks[i];
    const std::string w = "networks[" + std::to_string(i) + "]: ";
    if (!ids.insert(n.id).second) out.push_back(w + "duplicate network id " + std::to_string(n.id));
    collect(out, w, [&] { n.topology.validate(); });
    collect(out, w, [&] { n.paging.validate(); });
  }
  if (s.num_sims() < 2) out.push_back("devices.sim_networks: a multi-SIM device needs at least two SIMs");
  for (int x = 0; x < s.num_sims(); ++x) {
    const int idx = s.devices.sim_networks[static_cast<std::size_t>(x)];
    if (idx < 0 || static_cast<std::size_t>(idx) >= s.networks.size())
      out.push_back("devices.sim_networks[" + std::to_string(x) + "]: no network with index " + std::to_string(idx));
  }
  if (s.devices.count == 0) out.push_back("devices.count must be at least 1");
  UeDevice hw;
  hw.num_rx = s.devices.num_rx;
  hw.num_tx = s.devices.num_tx;
  hw.mode = s.devices.mode;
  hw.sims.resize(static_cast<std::size_t>(std::max(0, s.num_sims())));
  collect(out, "devices: ", [&] { validate_device(hw); });
  if (s.devices.switch_delay < Duration::zero()) out.push_back("devices.switch_delay_ms must be non-negative");
  if (!s.devices.policy.has_catch_all()) out.push_back("devices.policy: the last rule must match everything");
  if (s.devices.refresh_period <= Duration::zero()) out.push_back("devices.refresh_period_s must be positive");
  if (!s.classes.strictly_ordered())
    out.push_back("service_priorities: EMERGENCY > VOICE > SMS > DATA must hold");
  for (std::size_t role = 0; role < 2; ++role)
    for (std::size_t k = 0; k < 4; ++k)
      if (s.traffic.rate_per_hour[role][k] < 0.0) out.push_back("traffic: rates must be non-negative");
  for (auto d : s.traffic.mean_duration)
    if (d <= Duration::zero() || d == kNever) out.push_back("traffic.mean_duration_s must be positive and finite");
  if (s.mobility.spots == 0) out.push_back("mobility.spots must be at least 1");
  if (s.mobility.mean_dwell <= Duration::zero()) out.push_back("mobility.mean_dwell_s must be positive");
  if (s.horizon <= Duration::zero() || s.horizon == kNever) out.push_back("horizon_s must be positive and finite");
  if (s.replications < 1) out.push_back("replications must be at least 1");
  if (s.radio_loss < 0.0 || s.radio_loss > 1.0) out.push_back("radio_loss must be in [0, 1]");
  if (s.rlf_timeout <= Duration::zero() || s.rlf_timeout == kNever) out.push_back("rlf_timeout_ms must be positive");
  if (s.delays.as < Duration::zero() || s.delays.nas < Duration::zero() || s.delays.inter < Duration::zero())
    out.push_back("delays_ms must be non-negative");
  if (out.empty() || s.num_sims() >= 2) {
    for (auto& v : validate_stack(s.strategies, s.profile(), s.devices.n3iwf_registered)) out.push_back(v);
  }
  return out;
}

void require_valid(const Scenario& s) {
  const auto v = validate(s);
  if (v.empty()) return;
  std::string msg;
  for (const auto& line : v) msg += (msg.empty() ? "" : "; ") + line;
  throw Error(ErrorCode::kConfigInvalid, msg);
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, "scenario",
             {"id", "description", "networks", "devices", "traffic", "mobility", "strategies", "delays_ms",
              "service_priorities", "horizon_s", "seed", "replications", "radio_loss", "rlf_timeout_ms",
              "ran_failure_fallback"});
  Scenario s;
  read(j, "id", s.id, "scenario");
  read(j, "description", s.description, "scenario");
  if (j.contains("networks")) {
    const json& n = j.at("networks");
    if (!n.is_array()) bad("networks: expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) s.networks.push_back(network_from_json(n[i], i));
  }
  if (j.contains("devices")) {
    const json& d = j.at("devices");
    const std::string w = "devices";
    check_keys(d, w,
               {"count", "num_rx", "num_tx", "mode", "switch_delay_ms", "sim_networks", "n3iwf_registered",
                "refresh_period_s", "policy"});
    auto& dc = s.devices;
    read(d, "count", dc.count, w);
    read(d, "num_rx", dc.num_rx, w);
    read(d, "num_tx", dc.num_tx, w);
    if (d.contains("mode")) {
      const std::string m = d.at("mode").is_string() ? lower(d.at("mode").get<std::string>()) : "";
      if (m == "dsds") {
        dc.mode = DualSimMode::kDsds;
      } else if (m == "dsda") {
        dc.mode = DualSimMode::kDsda;
      } else {
        bad("devices.mode: expected \"DSDS\" or \"DSDA\"");
      }
    }
    read_ms(d, "switch_delay_ms", dc.switch_delay, w);
    read(d, "sim_networks", dc.sim_networks, w);
    read(d, "n3iwf_registered", dc.n3iwf_registered, w);
    read_s(d, "refresh_period_s", dc.refresh_period, w);
    if (d.contains("policy")) dc.policy = policy_from_json(d.at("policy"), "devices.policy");
  }
  if (j.contains("traffic")) {
    const json& t = j.at("traffic");
    check_keys(t, "traffic", {"primary_per_hour", "secondary_per_hour", "mean_duration_s"});
    if (t.contains("primary_per_hour"))
      read_per_kind(t.at("primary_per_hour"), "traffic.primary_per_hour", s.traffic.rate_per_hour[0]);
    if (t.contains("secondary_per_hour"))
      read_per_kind(t.at("secondary_per_hour"), "traffic.secondary_per_hour", s.traffic.rate_per_hour[1]);
    if (t.contains("mean_duration_s")) {
      const json& m = t.at("mean_duration_s");
      check_keys(m, "traffic.mean_duration_s", {"voice", "sms", "data", "emergency"});
      for (std::size_t k = 0; k < 4; ++k) read_s(m, kKindKeys[k], s.traffic.mean_duration[k], "traffic.mean_duration_s");
    }
  }
  if (j.contains("mobility")) {
    const json& m = j.at("mobility");
    check_keys(m, "mobility", {"mean_dwell_s", "spots"});
    read_s(m, "mean_dwell_s", s.mobility.mean_dwell, "mobility");
    read(m, "spots", s.mobility.spots, "mobility");
  }
  if (j.contains("strategies")) s.strategies = stack_from_json(j.at("strategies"));
  if (j.contains("delays_ms")) {
    const json& d = j.at("delays_ms");
    check_keys(d, "delays_ms", {"as", "nas", "inter"});
    read_ms(d, "as", s.delays.as, "delays_ms");
    read_ms(d, "nas", s.delays.nas, "delays_ms");
    read_ms(d, "inter", s.delays.inter, "delays_ms");
  }
  if (j.contains("service_priorities")) {
    const json& p = j.at("service_priorities");
    check_keys(p, "service_priorities", {"voice", "sms", "data", "emergency"});
    int e = s.classes[ServiceKind::kEmergency].priority, v = s.classes[ServiceKind::kVoice].priority,
        m = s.classes[ServiceKind::kSms].priority, d = s.classes[ServiceKind::kData].priority;
    read(p, "emergency", e, "service_priorities");
    read(p, "voice", v, "service_priorities");
    read(p, "sms", m, "service_priorities");
    read(p, "data", d, "service_priorities");
    s.classes = ServiceClasses(e, v, m, d);
  }
  read_s(j, "horizon_s", s.horizon, "scenario");
  read(j, "seed", s.seed, "scenario");
  read(j, "replications", s.replications, "scenario");
  read(j, "radio_loss", s.radio_loss, "scenario");
  read_ms(j, "rlf_timeout_ms", s.rlf_timeout, "scenario");
  read(j, "ran_failure_fallback", s.ran_failure_fallback, "scenario");
  return s;
}

json scenario_to_json(const Scenario& s) {
  json nets = json::array();
  for (const auto& n : s.networks) nets.push_back(network_to_json(n));
  auto per_kind = [](const std::array<double, 4>& a) {
    json o;
    for (std::size_t k = 0; k < 4; ++k) o[kKindKeys[k]] = a[k];
    return o;
  };
  json durations;
  for (std::size_t k = 0; k < 4; ++k) durations[kKindKeys[k]] = secs(s.traffic.mean_duration[k]);
  const auto& dc = s.devices;
  return json{
      {"id", s.id},
      {"description", s.description},
      {"networks", nets},
      {"devices",
       {{"count", dc.count},
        {"num_rx", dc.num_rx},
        {"num_tx", dc.num_tx},
        {"mode", dc.mode == DualSimMode::kDsds ? "DSDS" : "DSDA"},
        {"switch_delay_ms", ms(dc.switch_delay)},
        {"sim_networks", dc.sim_networks},
        {"n3iwf_registered", dc.n3iwf_registered},
        {"refresh_period_s", secs(dc.refresh_period)},
        {"policy", policy_to_json(dc.policy)}}},
      {"traffic",
       {{"primary_per_hour", per_kind(s.traffic.rate_per_hour[0])},
        {"secondary_per_hour", per_kind(s.traffic.rate_per_hour[1])},
        {"mean_duration_s", durations}}},
      {"mobility", {{"mean_dwell_s", secs(s.mobility.mean_dwell)}, {"spots", s.mobility.spots}}},
      {"strategies", stack_to_json(s.strategies)},
      {"delays_ms", {{"as", to_ms(s.delays.as)}, {"nas", to_ms(s.delays.nas)}, {"inter", to_ms(s.delays.inter)}}},
      {"service_priorities",
       {{"emergency", s.classes[ServiceKind::kEmergency].priority},
        {"voice", s.classes[ServiceKind::kVoice].priority},
        {"sms", s.classes[ServiceKind::kSms].priority},
        {"data", s.classes[ServiceKind::kData].priority}}},
      {"horizon_s", secs(s.horizon)},
      {"seed", s.seed},
      {"replications", s.replications},
      {"radio_loss", s.radio_loss},
      {"rlf_timeout_ms", ms(s.rlf_timeout)},
      {"ran_failure_fallback", s.ran_failure_fallback},
  };
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) bad("override '" + assignment + "' must look like key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(p);
      } catch (const std::exception&) {
        bad("override '" + path + "': '" + p + "' is not a list index");
      }
      if (idx >= node->size()) bad("override '" + path + "': index " + p + " out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) bad("override '" + path + "': '" + p + "' has no fields");
      node = &(*node)[p];
    }
    if (last) *node = value;
  }
}

json load_scenario_json(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) bad("cannot open scenario file '" + path + "'");
  json j = json::parse(in, nullptr, false, true);
  if (j.is_discarded()) bad("'" + path + "' is not valid JSON");
  for (const auto& o : overrides) apply_override(j, o);
  return j;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  Scenario s = scenario_from_json(load_scenario_json(path, overrides));
  require_valid(s);
  return s;
}

std::string stack_label(const StrategyStack& stack) {
  if (stack.active.empty()) return "baseline";
  std::string out;
  for (auto id : stack.active) {
    if (!out.empty()) out += "+";
    out += std::to_string(static_cast<int>(id));
    const auto& d = descriptor(id);
    if (d.ran_based && d.cn_based) out += stack.basing(id) == Deployment::kRan ? "R" : "C";
  }
  return out;
}

}  // namespace msim
