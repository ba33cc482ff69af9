#include "msim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "msim/runner.hpp"

namespace msim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void append(std::vector<std::int64_t>& to, const std::vector<std::int64_t>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

template <std::size_t N>
void add_all(std::array<std::int64_t, N>& a, const std::array<std::int64_t, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double ratio(std::int64_t a, std::int64_t b) { return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

}  // namespace

void MetricsLedger::add(const LogRecord& r) {
  switch (r.kind) {
    case RecordKind::kMessage:
      signaling_units[std::min<std::size_t>(r.aux, 2)] += r.size_weight;
      ++signaling_messages;
      strategy_units[std::min<std::size_t>(r.strategy, kNumStrategies)] += r.size_weight;
      break;
    case RecordKind::kMtArrival: ++mt_arrivals; break;
    case RecordKind::kMtOutcome: {
      ++mt_outcomes[std::min<std::size_t>(r.detail, 3)];
      if (r.value2 & kMtDirect) ++mt_direct;
      if (r.value2 & kMtNotified) ++mt_notified;
      if (static_cast<MtOutcome>(r.detail) == MtOutcome::kDelivered && r.value >= 0) {
        latency_us.push_back(r.value);
        if ((r.value2 & kMtAttributed) && !(r.value2 & kMtHeld)) attributed_latency_us.push_back(r.value);
      }
      break;
    }
    case RecordKind::kPageAttempt: {
      ++page_attempts;
      const auto res = static_cast<AttemptResult>(r.detail);
      if (res == AttemptResult::kBusyReply) ++busy_replies;
      if (res != AttemptResult::kAnswered && res != AttemptResult::kBusyReply) wasted_paging_units += r.value;
      if (res == AttemptResult::kSilent) wasted_declined_units += r.value;
      if (res == AttemptResult::kCollision) ++collided_attempts;
      break;
    }
    case RecordKind::kPageOutcome:
      ++page_procedures;
      if (r.aux & kPageEscalated) ++escalations;
      if (r.aux & kPageDeclined) ++declined_pages;
      if (r.aux & kPageDeclineEscalated) ++declined_escalations;
      break;
    case RecordKind::kStateChange: {
      const auto from = static_cast<RanState>(r.detail);
      const auto to = static_cast<RanState>(r.aux);
      if (to == RanState::kConnected && from == RanState::kIdle) {
        ++setups;
        setup_units += r.value;
      } else if (to == RanState::kConnected && from == RanState::kInactive) {
        ++resumes;
        resume_units += r.value;
      } else if (to == RanState::kInactive) {
        ++inactive_entries;
      }
      break;
    }
    case RecordKind::kRadioGrant: break;
    case RecordKind::kRxOn: rx_on_us += r.value; break;
    case RecordKind::kInterruption:
      interruption_us += r.value;
      if (r.sim == 0) interruption_primary_us += r.value;
      break;
    case RecordKind::kLeave:
      ++leaves[std::min<std::size_t>(r.detail, 4)];
      leave_us[std::min<std::size_t>(r.detail, 4)] += r.value;
      break;
    case RecordKind::kCollision:
      if (r.detail == 0) {
        ++collision_pairs;
        if (r.value > 0) ++colliding_pairs_before;
        collision_ppm_before += r.value;
      } else {
        if (r.value > 0) ++colliding_pairs_after;
        collision_ppm_after += r.value;
      }
      break;
    case RecordKind::kMisleading:
      ++misleading_events;
      if (r.aux) ++misleading_declined;
      break;
    case RecordKind::kTerminated: ++terminated; break;
    case RecordKind::kPushIgnored: break;
    case RecordKind::kError:
      ++errors;
      if (r.aux == 1) ++unresolved;
      break;
  }
}

void MetricsLedger::merge(const MetricsLedger& o) {
  interruption_us += o.interruption_us;
  interruption_primary_us += o.interruption_primary_us;
  wasted_paging_units += o.wasted_paging_units;
  wasted_declined_units += o.wasted_declined_units;
  misleading_events += o.misleading_events;
  misleading_declined += o.misleading_declined;
  collision_pairs += o.collision_pairs;
  colliding_pairs_before += o.colliding_pairs_before;
  colliding_pairs_after += o.colliding_pairs_after;
  collision_ppm_before += o.collision_ppm_before;
  collision_ppm_after += o.collision_ppm_after;
  collided_attempts += o.collided_attempts;
  add_all(signaling_units, o.signaling_units);
  signaling_messages += o.signaling_messages;
  add_all(strategy_units, o.strategy_units);
  mt_arrivals += o.mt_arrivals;
  add_all(mt_outcomes, o.mt_outcomes);
  mt_direct += o.mt_direct;
  mt_notified += o.mt_notified;
  append(latency_us, o.latency_us);
  append(attributed_latency_us, o.attributed_latency_us);
  rx_on_us += o.rx_on_us;
  page_procedures += o.page_procedures;
  page_attempts += o.page_attempts;
  escalations += o.escalations;
  declined_pages += o.declined_pages;
  declined_escalations += o.declined_escalations;
  busy_replies += o.busy_replies;
  setups += o.setups;
  setup_units += o.setup_units;
  resumes += o.resumes;
  resume_units += o.resume_units;
  inactive_entries += o.inactive_entries;
  add_all(leaves, o.leaves);
  add_all(leave_us, o.leave_us);
  terminated += o.terminated;
  errors += o.errors;
  unresolved += o.unresolved;
}

MetricsLedger compute_ledger(std::span<const LogRecord> records) {
  MetricsLedger l;
  for (const auto& r : records) l.add(r);
  return l;
}

double median_ms(std::vector<std::int64_t> s) {
  if (s.empty()) return kNaN;
  const std::size_t mid = s.size() / 2;
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid), s.end());
  double m = static_cast<double>(s[mid]);
  if (s.size() % 2 == 0) {
    const auto lo = *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid));
    m = (m + static_cast<double>(lo)) / 2.0;
  }
  return m / 1000.0;
}

double mean_ms(const std::vector<std::int64_t>& s) {
  if (s.empty()) return kNaN;
  const double sum = std::accumulate(s.begin(), s.end(), 0.0, [](double a, std::int64_t b) { return a + static_cast<double>(b); });
  return sum / static_cast<double>(s.size()) / 1000.0;
}

int stack_complexity(const StrategyStack& stack) {
  int total = 0;
  for (auto id : stack.active) total += complexity_score(id, stack.basing(id));
  return total;
}

AxisScores axis_scores(const MetricsLedger& l, const Scenario& sc, int runs) {
  AxisScores a;
  a.complexity = stack_complexity(sc.strategies);
  a.overhead = ratio(l.total_signaling_units(), l.mt_arrivals);
  a.scalability = kNaN;
  a.latency_ms = !l.attributed_latency_us.empty() ? median_ms(l.attributed_latency_us) : median_ms(l.latency_us);
  const double device_hours = static_cast<double>(sc.devices.count) * std::max(1, runs) *
                              (static_cast<double>(sc.horizon.count()) / 3.6e9);
  a.energy = device_hours > 0 ? static_cast<double>(l.rx_on_us) / 1000.0 / device_hours : 0.0;
  return a;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return kNaN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : kNaN;
}

// ------------------------------------------------------------------- CSV

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"scenario",
                                  "seed",
                                  "stack",
                                  "sweep_param",
                                  "sweep_value",
                                  "log_digest",
                                  "mt_arrivals",
                                  "mt_delivered",
                                  "mt_user_declined",
                                  "mt_discarded",
                                  "mt_failed",
                                  "mt_direct",
                                  "mt_notified",
                                  "latency_samples",
                                  "latency_median_ms",
                                  "latency_mean_ms",
                                  "attributed_samples",
                                  "attributed_median_ms",
                                  "interruption_ms",
                                  "interruption_primary_ms",
                                  "wasted_paging_units",
                                  "wasted_declined_units",
                                  "misleading_events",
                                  "misleading_declined",
                                  "collision_pairs",
                                  "colliding_pairs_before",
                                  "colliding_pairs_after",
                                  "collision_fraction_before",
                                  "collision_fraction_after",
                                  "collided_attempts",
                                  "signaling_units",
                                  "signaling_units_ran",
                                  "signaling_units_cn",
                                  "signaling_units_inter",
                                  "signaling_messages"};
    for (int i = 0; i <= kNumStrategies; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, i ? "units_s%02d" : "units_untagged", i);
      c.emplace_back(buf);
    }
    for (const char* s :
         {"rx_on_ms", "page_procedures", "page_attempts", "escalations", "declined_pages", "declined_escalations",
          "busy_replies", "setups", "setup_units", "resumes", "resume_units", "inactive_entries"})
      c.emplace_back(s);
    for (int m = 0; m < 5; ++m) {
      const std::string name = [&] {
        std::string s(to_string(static_cast<LeaveMode>(m)));
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
      }();
      c.push_back("leaves_" + name);
      c.push_back("leave_ms_" + name);
    }
    for (const char* s : {"terminated", "errors", "unresolved", "axis_complexity", "axis_overhead",
                          "axis_scalability", "axis_latency_ms", "axis_energy"})
      c.emplace_back(s);
    return c;
  }();
  return cols;
}

void write_csv_header(std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const CsvRow& row) {
  const MetricsLedger& l = row.ledger;
  std::vector<std::string> v = {row.scenario,
                                std::to_string(row.seed),
                                row.stack,
                                row.sweep_param,
                                row.sweep_value,
                                hex(row.log_digest),
                                std::to_string(l.mt_arrivals)};
  for (auto n : l.mt_outcomes) v.push_back(std::to_string(n));
  v.push_back(std::to_string(l.mt_direct));
  v.push_back(std::to_string(l.mt_notified));
  v.push_back(std::to_string(l.latency_us.size()));
  v.push_back(num(median_ms(l.latency_us)));
  v.push_back(num(mean_ms(l.latency_us)));
  v.push_back(std::to_string(l.attributed_latency_us.size()));
  v.push_back(num(median_ms(l.attributed_latency_us)));
  v.push_back(num(static_cast<double>(l.interruption_us) / 1000.0));
  v.push_back(num(static_cast<double>(l.interruption_primary_us) / 1000.0));
  for (auto n : {l.wasted_paging_units, l.wasted_declined_units, l.misleading_events, l.misleading_declined,
                 l.collision_pairs, l.colliding_pairs_before, l.colliding_pairs_after})
    v.push_back(std::to_string(n));
  v.push_back(num(ratio(l.collision_ppm_before, l.collision_pairs) / 1e6));
  v.push_back(num(ratio(l.collision_ppm_after, l.collision_pairs) / 1e6));
  v.push_back(std::to_string(l.collided_attempts));
  v.push_back(std::to_string(l.total_signaling_units()));
  for (auto n : l.signaling_units) v.push_back(std::to_string(n));
  v.push_back(std::to_string(l.signaling_messages));
  for (auto n : l.strategy_units) v.push_back(std::to_string(n));
  v.push_back(num(static_cast<double>(l.rx_on_us) / 1000.0));
  for (auto n : {l.page_procedures, l.page_attempts, l.escalations, l.declined_pages, l.declined_escalations,
                 l.busy_replies, l.setups, l.setup_units, l.resumes, l.resume_units, l.inactive_entries})
    v.push_back(std::to_string(n));
  for (std::size_t m = 0; m < 5; ++m) {
    v.push_back(std::to_string(l.leaves[m]));
    v.push_back(num(static_cast<double>(l.leave_us[m]) / 1000.0));
  }
  v.push_back(std::to_string(l.terminated));
  v.push_back(std::to_string(l.errors));
  v.push_back(std::to_string(l.unresolved));
  v.push_back(num(row.axes.complexity));
  v.push_back(num(row.axes.overhead));
  v.push_back(num(row.axes.scalability));
  v.push_back(num(row.axes.latency_ms));
  v.push_back(num(row.axes.energy));
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '\n';
}

// --------------------------------------------------------------- compare

bool Comparison::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const DirectionCheck& c) { return c.passed; });
}

const GroupResult* Comparison::group(const std::string& name) const {
  for (const auto& g : groups)
    if (g.name == name) return &g;
  return nullptr;
}

std::vector<GroupSpec> default_groups() {
  using S = StrategyId;
  return {
      {"baseline", {}, Deployment::kRan},
      {"ran-based",
       {S::kPagingCause, S::kBusyIndication, S::kGracefulLeaving, S::kSchedulingGap, S::kPagingOffset,
        S::kConsecutivePos},
       Deployment::kRan},
      {"cn-based",
       {S::kPagingCause, S::kBusyIndication, S::kGracefulLeaving, S::kPushNotification, S::kPagingOffset,
        S::kConsecutivePos},
       Deployment::kCn},
      {"notify-push", {S::kPushNotification}, Deployment::kCn},
      {"notify-non3gpp", {S::kNon3gppNotification}, Deployment::kCn},
      {"notify-sms", {S::kSmsNotification}, Deployment::kCn},
  };
}

StrategyStack group_stack(const GroupSpec& spec, const Scenario& sc, std::vector<std::string>* dropped) {
  StrategyStack stack;
  stack.params = sc.strategies.params;
  const ScenarioProfile profile = sc.profile();
  for (auto id : spec.strategies) {
    StrategyStack trial = stack;
    trial.active.push_back(id);
    trial.deployment[id] = spec.basing;
    if (validate_stack(trial, profile, sc.devices.n3iwf_registered).empty()) {
      stack = std::move(trial);
    } else if (dropped) {
      dropped->emplace_back(descriptor(id).name);
    }
  }
  return stack;
}

Comparison compare(const Scenario& sc, const std::vector<GroupSpec>& specs, std::uint64_t first_seed, int reps,
                   int threads) {
  Comparison cmp;
  cmp.scenario = sc.id;
  cmp.classes = classify(sc);
  for (const auto& spec : specs) {
    GroupResult g;
    g.name = spec.name;
    g.stack = group_stack(spec, sc, &g.dropped);
    if (!spec.strategies.empty() && g.stack.active.empty()) {
      cmp.groups.push_back(std::move(g));
      continue;
    }
    Scenario variant = sc;
    variant.strategies = g.stack;
    const auto results = run_replications(variant, first_seed, reps, threads);
    g.ledger = merged_ledger(results);
    g.runs = reps;
    g.axes = axis_scores(g.ledger, variant, reps);
    cmp.groups.push_back(std::move(g));
  }

  auto find = [&](const std::string& n) -> const GroupResult* {
    const GroupResult* g = cmp.group(n);
    return g && g->runs > 0 ? g : nullptr;
  };
  auto fmt = [](double v) { return std::isnan(v) ? std::string("n/a") : num(v); };

  const GroupResult* ran = find("ran-based");
  const GroupResult* cn = find("cn-based");
  if (ran && cn) {
    cmp.checks.push_back({"latency: RAN-based < CN-based", ran->axes.latency_ms < cn->axes.latency_ms,
                          fmt(ran->axes.latency_ms) + " ms vs " + fmt(cn->axes.latency_ms) + " ms"});
    cmp.checks.push_back({"complexity: CN-based < RAN-based", cn->axes.complexity < ran->axes.complexity,
                          fmt(cn->axes.complexity) + " vs " + fmt(ran->axes.complexity)});
  }
  if (const GroupResult* base = find("baseline")) {
    for (const auto& g : cmp.groups) {
      if (g.name.rfind("notify-", 0) != 0 || g.runs == 0) continue;
      cmp.checks.push_back({"energy: " + g.name + " < baseline", g.axes.energy < base->axes.energy,
                            fmt(g.axes.energy) + " vs " + fmt(base->axes.energy) + " ms per device-hour"});
    }
  }
  return cmp;
}

// ---------------------------------------------------------------- report

namespace {

void summary_table(std::ostream& os, const std::vector<StackSummary>& rows, bool sweep) {
  os << "| stack |" << (sweep ? " value |" : "")
     << " runs | MT events | delivered | declined | discarded | failed | latency p50 (ms) | interruption (ms) |"
        " wasted units | misleading | collision before | collision after | signaling RAN/CN/inter |"
        " complexity | overhead | latency (ms) | energy (ms/dev-h) |\n";
  os << "|---|" << (sweep ? "---|" : "") << "---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    const auto& l = r.ledger;
    char line[640];
    std::snprintf(line, sizeof line,
                  " %d | %lld | %lld | %lld | %lld | %lld | %s | %.1f | %lld | %lld | %.4f | %.4f | %lld/%lld/%lld |"
                  " %.0f | %.2f | %s | %.1f |",
                  r.runs, static_cast<long long>(l.mt_arrivals), static_cast<long long>(l.mt_outcomes[0]),
                  static_cast<long long>(l.mt_outcomes[1]), static_cast<long long>(l.mt_outcomes[2]),
                  static_cast<long long>(l.mt_outcomes[3]),
                  std::isnan(median_ms(l.latency_us)) ? "n/a" : num(median_ms(l.latency_us)).c_str(),
                  static_cast<double>(l.interruption_us) / 1000.0, static_cast<long long>(l.wasted_paging_units),
                  static_cast<long long>(l.misleading_events), ratio(l.collision_ppm_before, l.collision_pairs) / 1e6,
                  ratio(l.collision_ppm_after, l.collision_pairs) / 1e6,
                  static_cast<long long>(l.signaling_units[0]), static_cast<long long>(l.signaling_units[1]),
                  static_cast<long long>(l.signaling_units[2]), r.axes.complexity, r.axes.overhead,
                  std::isnan(r.axes.latency_ms) ? "n/a" : num(r.axes.latency_ms).c_str(), r.axes.energy);
    os << "| " << r.label << " |" << (sweep ? " " + r.sweep_value + " |" : "") << line << '\n';
  }
}

}  // namespace

void write_report(std::ostream& os, const Scenario& sc, const std::vector<StackSummary>& rows,
                  const Comparison* cmp) {
  const ScenarioClass c = classify(sc);
  os << "# " << sc.id << "\n\n";
  if (!sc.description.empty()) os << sc.description << "\n\n";
  os << "| generations | receivers | operators | camping | services |\n|---|---|---|---|---|\n";
  os << "| " << c.generations << " | " << c.receivers << " | " << c.operators << " | " << c.camping << " | "
     << c.services << " |\n\n";
  os << sc.devices.count << " devices, " << to_ms(sc.horizon) / 1000.0 << " s simulated per run.\n\n";

  if (!rows.empty()) {
    const bool sweep = std::any_of(rows.begin(), rows.end(), [](const StackSummary& r) { return !r.sweep_value.empty(); });
    os << "## Runs\n\n";
    summary_table(os, rows, sweep);
    os << '\n';
  }

  if (cmp) {
    os << "## RAN-based vs CN-based\n\n";
    os << "| group | stack | runs | complexity | overhead (units/MT) | latency p50 (ms) | energy (ms/dev-h) | dropped |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& g : cmp->groups) {
      std::string dropped;
      for (const auto& d : g.dropped) dropped += (dropped.empty() ? "" : ", ") + d;
      if (g.runs == 0) {
        os << "| " << g.name << " | - | 0 | | | | | " << dropped << " |\n";
        continue;
      }
      os << "| " << g.name << " | " << stack_label(g.stack) << " | " << g.runs << " | " << num(g.axes.complexity)
         << " | " << num(g.axes.overhead) << " | " << (std::isnan(g.axes.latency_ms) ? "n/a" : num(g.axes.latency_ms))
         << " | " << num(g.axes.energy) << " | " << dropped << " |\n";
    }
    os << "\n### Direction checks\n\n";
    for (const auto& chk : cmp->checks)
      os << "- " << (chk.passed ? "PASS" : "FAIL") << " " << chk.name << " (" << chk.detail << ")\n";
    os << '\n';
  }

  os << "## Notes\n\n";
  os << "- Every axis reads lower-is-better: complexity counts new message kinds plus impacted node types, "
        "overhead is weighted signaling units per MT event (AS 1, NAS 2, inter-node 3), latency is the median "
        "time from the first page (or notification) to service start, energy is receiver on-time.\n";
  os << "- Latency uses deliveries a strategy shaped when there are any, otherwise all paged deliveries. MT events "
        "the network buffered while the UE was away are left out: their wait is set by the user, not by signaling.\n";
  os << "- A short absence sends no return signal; the network learns of the comeback from the next uplink.\n";
  os << "- Failed RAN paging moves the UE to IDLE and " << (sc.ran_failure_fallback ? "hands non-data MT events to CN paging" : "drops the MT events")
     << "; buffered data is discarded.\n";
}

}  // namespace msim
