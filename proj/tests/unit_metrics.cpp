#include <doctest.h>

#include <cmath>
#include <sstream>

#include "msim/engine.hpp"
#include "msim/metrics.hpp"
#include "msim/runner.hpp"
#include "support.hpp"

using namespace msim;

namespace {

LogRecord rec(RecordKind k, std::uint8_t detail = 0, std::uint8_t aux = 0, std::int64_t value = 0,
              std::int64_t value2 = 0) {
  LogRecord r;
  r.kind = k;
  r.detail = detail;
  r.aux = aux;
  r.value = value;
  r.value2 = value2;
  r.sim = 0;
  return r;
}

LogRecord msg(Segment seg, std::uint8_t strategy) {
  LogRecord r = rec(RecordKind::kMessage, static_cast<std::uint8_t>(MsgKind::kPageCn), static_cast<std::uint8_t>(seg));
  r.size_weight = static_cast<std::uint8_t>(size_weight(seg));
  r.strategy = strategy;
  return r;
}

std::uint8_t u8(auto e) { return static_cast<std::uint8_t>(e); }

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("empty log folds to an empty ledger") {
    const MetricsLedger l = compute_ledger(std::span<const LogRecord>{});
    CHECK(l == MetricsLedger{});
    CHECK(std::isnan(median_ms(l.latency_us)));
  }

  TEST_CASE("hand-built log") {
    std::vector<LogRecord> log = {
        msg(Segment::kRan, 0),
        msg(Segment::kCn, 1),
        msg(Segment::kInter, 8),
        msg(Segment::kCn, 0),
        rec(RecordKind::kMtArrival),
        rec(RecordKind::kMtArrival),
        rec(RecordKind::kPageAttempt, u8(AttemptResult::kCollision), 0, 1),
        rec(RecordKind::kPageAttempt, u8(AttemptResult::kSilent), 1, 12),
        rec(RecordKind::kPageAttempt, u8(AttemptResult::kAnswered), 1, 12),
        rec(RecordKind::kPageAttempt, u8(AttemptResult::kBusyReply), 0, 1),
        rec(RecordKind::kPageOutcome, u8(PageResult::kResponded), kPageEscalated | kPageDeclined | kPageDeclineEscalated, 25),
        rec(RecordKind::kStateChange, u8(RanState::kIdle), u8(RanState::kConnected), 6),
        rec(RecordKind::kStateChange, u8(RanState::kConnected), u8(RanState::kInactive), 1),
        rec(RecordKind::kStateChange, u8(RanState::kInactive), u8(RanState::kConnected), 3),
        rec(RecordKind::kMtOutcome, u8(MtOutcome::kDelivered), 0, 40000, kMtAttributed),
        rec(RecordKind::kMtOutcome, u8(MtOutcome::kDelivered), 0, 1000000, kMtAttributed | kMtHeld),
        rec(RecordKind::kRxOn, 0, 0, 5000),
        rec(RecordKind::kInterruption, u8(InterruptCause::kLeave), 0, 700),
        rec(RecordKind::kLeave, u8(LeaveMode::kGraceful), 0, 9000),
        rec(RecordKind::kMisleading, 0, 1),
    };
    REQUIRE(log.size() == 20);
    const MetricsLedger l = compute_ledger(log);
    CHECK(l.signaling_units == std::array<std::int64_t, 3>{1, 4, 3});
    CHECK(l.total_signaling_units() == 8);
    CHECK(l.strategy_units[0] == 3);
    CHECK(l.strategy_units[1] == 2);
    CHECK(l.strategy_units[8] == 3);
    CHECK(l.mt_arrivals == 2);
    CHECK(l.mt_outcomes[0] == 2);
    CHECK(l.page_attempts == 4);
    CHECK(l.wasted_paging_units == 13);
    CHECK(l.wasted_declined_units == 12);
    CHECK(l.collided_attempts == 1);
    CHECK(l.busy_replies == 1);
    CHECK(l.page_procedures == 1);
    CHECK(l.escalations == 1);
    CHECK(l.declined_escalations == 1);
    CHECK(l.setups == 1);
    CHECK(l.setup_units == 6);
    CHECK(l.resumes == 1);
    CHECK(l.resume_units == 3);
    CHECK(l.inactive_entries == 1);
    CHECK(l.latency_us == std::vector<std::int64_t>{40000, 1000000});
    CHECK(l.attributed_latency_us == std::vector<std::int64_t>{40000});
    CHECK(l.rx_on_us == 5000);
    CHECK(l.interruption_us == 700);
    CHECK(l.interruption_primary_us == 700);
    CHECK(l.leaves[u8(LeaveMode::kGraceful)] == 1);
    CHECK(l.leave_us[u8(LeaveMode::kGraceful)] == 9000);
    CHECK(l.misleading_events == 1);
    CHECK(l.misleading_declined == 1);
    CHECK(median_ms(l.latency_us) == doctest::Approx(520.0));
    CHECK(mean_ms(l.latency_us) == doctest::Approx(520.0));
  }

  TEST_CASE("folding halves equals folding the whole log") {
    Scenario s = testing::preset("5g-4g-dual-rx-different-mno", {"strategies.active=[1,5,8,13]"});
    s.devices.count = 40;
    const auto res = run(s, 6);
    const auto& recs = res.log.records();
    const MetricsLedger whole = compute_ledger(recs);
    for (std::size_t cut : {std::size_t{0}, recs.size() / 3, recs.size() / 2, recs.size()}) {
      MetricsLedger a = compute_ledger(std::span(recs).first(cut));
      a.merge(compute_ledger(std::span(recs).subspan(cut)));
      CHECK(a == whole);
    }
  }

  TEST_CASE("least-squares slope") {
    const std::vector<double> x = {100, 300, 1000};
    // y = 2x + 5 exactly
    CHECK(least_squares_slope(x, {205, 605, 2005}) == doctest::Approx(2.0));
    // Hand-computed: mean x 466.67, mean y 6, Sxy 2300, Sxx 446666.67.
    CHECK(least_squares_slope(x, {5, 4, 9}) == doctest::Approx(2300.0 / 446666.6666667));
    CHECK(std::isnan(least_squares_slope({5, 5}, {1, 2})));
    CHECK(std::isnan(least_squares_slope({5}, {1})));
  }

  TEST_CASE("axis scores") {
    Scenario s;
    s.devices.count = 10;
    s.horizon = std::chrono::minutes(30);
    MetricsLedger l;
    l.signaling_units = {10, 20, 30};
    l.mt_arrivals = 12;
    l.rx_on_us = 5'000'000;  // 5000 ms over 10 devices x 0.5 h x 2 runs
    l.latency_us = {1000, 3000, 9000};
    const AxisScores a = axis_scores(l, s, 2);
    CHECK(a.overhead == doctest::Approx(5.0));
    CHECK(a.energy == doctest::Approx(500.0));
    CHECK(a.latency_ms == doctest::Approx(3.0));
    CHECK(a.complexity == 0);
    l.attributed_latency_us = {7000};
    CHECK(axis_scores(l, s, 2).latency_ms == doctest::Approx(7.0));
  }

  TEST_CASE("CSV header is stable and rows are reproducible") {
    const auto& cols = csv_columns();
    REQUIRE(cols.size() > 10);
    CHECK(cols[0] == "scenario");
    CHECK(cols[1] == "seed");
    CHECK(cols[2] == "stack");
    CHECK(cols[5] == "log_digest");
    std::ostringstream h;
    write_csv_header(h);
    CHECK(h.str().substr(0, 16) == "scenario,seed,st");

    Scenario s = testing::preset("5g-5g-single-rx-different-mno");
    s.devices.count = 30;
    auto row_text = [&](int threads) {
      std::ostringstream os;
      for (const auto& rep : run_replications(s, 11, 3, threads)) {
        CsvRow row{s.id, rep.seed, stack_label(s.strategies), "", "", rep.digest, rep.ledger,
                   axis_scores(rep.ledger, s, 1)};
        write_csv_row(os, row);
      }
      return os.str();
    };
    const std::string a = row_text(1), b = row_text(3);
    CHECK(a == b);
    std::istringstream lines(a);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
      ++n;
      CHECK(std::count(line.begin(), line.end(), ',') + 1 == static_cast<long>(cols.size()));
    }
    CHECK(n == 3);
  }

  TEST_CASE("group stacks drop what a scenario cannot run") {
    const Scenario s = testing::preset("4g-4g-dual-rx-different-mno");
    std::vector<std::string> dropped;
    const auto groups = default_groups();
    const auto st = group_stack(groups[1], s, &dropped);
    CHECK_FALSE(st.has(StrategyId::kBusyIndication));
    CHECK_FALSE(st.has(StrategyId::kSchedulingGap));
    CHECK(st.has(StrategyId::kPagingCause));
    CHECK(dropped.size() == 2);
    CHECK(validate(Scenario(s)).empty());
  }
}
