#pragma once

// Folds event logs into issue counters and comparison axes, and renders
// them as CSV rows and a markdown report.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msim/event_log.hpp"
#include "msim/scenario.hpp"
#include "msim/strategies.hpp"

namespace msim {

struct MetricsLedger {
  // Ongoing service interruption, microseconds of stalled service.
  std::int64_t interruption_us = 0;
  std::int64_t interruption_primary_us = 0;
  // Cells paged by attempts nobody answered.
  std::int64_t wasted_paging_units = 0;
  // The subset spent on pages the user heard and silently declined.
  std::int64_t wasted_declined_units = 0;
  std::int64_t misleading_events = 0;
  std::int64_t misleading_declined = 0;  // the failed procedure had a declined page

  // Occasion collisions between SIM pairs, before and after avoidance.
  std::int64_t collision_pairs = 0;
  std::int64_t colliding_pairs_before = 0;
  std::int64_t colliding_pairs_after = 0;
  std::int64_t collision_ppm_before = 0;  // sum of per-pair fractions
  std::int64_t collision_ppm_after = 0;
  std::int64_t collided_attempts = 0;

  std::array<std::int64_t, 3> signaling_units{};  // by Segment
  std::int64_t signaling_messages = 0;
  std::array<std::int64_t, kNumStrategies + 1> strategy_units{};  // [0] untagged

  std::int64_t mt_arrivals = 0;
  std::array<std::int64_t, 4> mt_outcomes{};  // by MtOutcome
  std::int64_t mt_direct = 0;
  std::int64_t mt_notified = 0;
  std::vector<std::int64_t> latency_us;             // page-send to service start
  std::vector<std::int64_t> attributed_latency_us;  // deliveries a strategy shaped, minus buffered ones

  std::int64_t rx_on_us = 0;
  std::int64_t page_procedures = 0;
  std::int64_t page_attempts = 0;
  std::int64_t escalations = 0;
  std::int64_t declined_pages = 0;
  std::int64_t declined_escalations = 0;
  std::int64_t busy_replies = 0;

  std::int64_t setups = 0;  // IDLE -> CONNECTED
  std::int64_t setup_units = 0;
  std::int64_t resumes = 0;  // INACTIVE -> CONNECTED
  std::int64_t resume_units = 0;
  std::int64_t inactive_entries = 0;

  std::array<std::int64_t, 5> leaves{};  // by LeaveMode
  std::array<std::int64_t, 5> leave_us{};
  std::int64_t terminated = 0;
  std::int64_t errors = 0;
  std::int64_t unresolved = 0;

  std::int64_t total_signaling_units() const { return signaling_units[0] + signaling_units[1] + signaling_units[2]; }
  std::int64_t mt_resolved() const { return mt_outcomes[0] + mt_outcomes[1] + mt_outcomes[2] + mt_outcomes[3]; }

  void add(const LogRecord& r);
  // Concatenation: merging the ledgers of consecutive log slices equals the
  // ledger of the whole log.
  void merge(const MetricsLedger& other);

  friend bool operator==(const MetricsLedger&, const MetricsLedger&) = default;
};

MetricsLedger compute_ledger(std::span<const LogRecord> records);
inline MetricsLedger compute_ledger(const EventLog& log) { return compute_ledger(log.records()); }

// Median in milliseconds; NaN for an empty sample.
double median_ms(std::vector<std::int64_t> samples_us);
double mean_ms(const std::vector<std::int64_t>& samples_us);

struct AxisScores {
  double complexity = 0;   // new message kinds + impacted node types
  double overhead = 0;     // signaling units per MT event
  double scalability = 0;  // slope of overhead against the swept value; NaN outside sweeps
  double latency_ms = 0;   // median MT setup latency
  double energy = 0;       // receiver on-time, ms per device-hour
};

int stack_complexity(const StrategyStack& stack);

// `runs` replications of `scenario` were folded into `ledger`.
AxisScores axis_scores(const MetricsLedger& ledger, const Scenario& scenario, int runs);

// Ordinary least-squares slope of y on x; NaN with fewer than two distinct x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// ----------------------------------------------------------------- CSV

struct CsvRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string stack;
  std::string sweep_param;
  std::string sweep_value;
  std::uint64_t log_digest = 0;
  MetricsLedger ledger;
  AxisScores axes;
};

const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const CsvRow& row);

// ------------------------------------------------------------- compare

struct GroupResult {
  std::string name;
  StrategyStack stack;
  std::vector<std::string> dropped;  // strategies not applicable here
  MetricsLedger ledger;
  AxisScores axes;
  int runs = 0;
};

struct DirectionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Comparison {
  std::string scenario;
  ScenarioClass classes;
  std::vector<GroupResult> groups;
  std::vector<DirectionCheck> checks;

  bool all_passed() const;
  const GroupResult* group(const std::string& name) const;
};

struct GroupSpec {
  std::string name;
  std::vector<StrategyId> strategies;
  Deployment basing = Deployment::kRan;
};

// Baseline, RAN-based, CN-based and the three notification groups.
std::vector<GroupSpec> default_groups();

// Strategy stack for `spec` in `scenario`, minus anything not applicable;
// dropped strategies are reported in `dropped`.
StrategyStack group_stack(const GroupSpec& spec, const Scenario& scenario, std::vector<std::string>* dropped);

// Runs every group on the same seeds and evaluates the direction checks.
Comparison compare(const Scenario& scenario, const std::vector<GroupSpec>& groups, std::uint64_t first_seed,
                   int reps, int threads = 0);

// ------------------------------------------------------------- report

struct StackSummary {
  std::string label;
  std::string sweep_value;
  MetricsLedger ledger;
  AxisScores axes;
  int runs = 0;
};

void write_report(std::ostream& os, const Scenario& scenario, const std::vector<StackSummary>& runs,
                  const Comparison* comparison);

}  // namespace msim
