#include <doctest.h>

#include <algorithm>
#include <random>

#include "msim/metrics.hpp"
#include "msim/strategies.hpp"
#include "oracles.hpp"

using namespace msim;

namespace {

ScenarioProfile gens(std::set<Generation> g, std::optional<Deployment> d = std::nullopt) { return {std::move(g), d}; }

bool brute_free(const PagingSchedule& s, const std::vector<PagingSchedule>& others) {
  for (const auto& o : others) {
    const auto e = oracle::enumerate_collisions(s.phase.count() % s.period.count(), s.period.count(),
                                                s.listen_window.count(), o.phase.count() % o.period.count(),
                                                o.period.count(), o.listen_window.count());
    if (e.colliding > 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("strategies") {
  TEST_CASE("applicability matrix") {
    for (int n = 1; n <= kNumStrategies; ++n) {
      const auto& row = oracle::kTable2[static_cast<std::size_t>(n - 1)];
      const StrategyId id = *strategy_from_number(n);
      CAPTURE(n);
      CHECK(applicability(id, gens({Generation::k5G, Generation::k4G}, Deployment::kRan)) == row[0]);
      CHECK(applicability(id, gens({Generation::k5G, Generation::k4G}, Deployment::kCn)) == row[1]);
      CHECK(applicability(id, gens({Generation::k5G})) == row[2]);
      CHECK(applicability(id, gens({Generation::k4G})) == row[3]);
    }
  }

  TEST_CASE("strategy names parse") {
    CHECK(parse_strategy("3") == StrategyId::kBusyIndication);
    CHECK(parse_strategy("busy_indication") == StrategyId::kBusyIndication);
    CHECK(parse_strategy(descriptor(StrategyId::kPagingOffset).name) == StrategyId::kPagingOffset);
    CHECK_FALSE(parse_strategy("15"));
    CHECK_FALSE(strategy_from_number(0));
  }

  TEST_CASE("stack validation") {
    StrategyStack busy{{StrategyId::kBusyIndication}, {}, {}};
    const auto v = validate_stack(busy, gens({Generation::k4G}), false);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("Busy requires 5G") != std::string::npos);
    CHECK(validate_stack(busy, gens({Generation::k4G, Generation::k5G}), false).empty());

    StrategyStack offset{{StrategyId::kPagingOffset}, {}, {}};
    CHECK(validate_stack(offset, gens({Generation::k4G}), false).empty());
    CHECK(validate_stack(offset, gens({Generation::k5G}), false).empty());
    CHECK(validate_stack(StrategyStack{}, gens({Generation::k4G}), false).empty());

    StrategyStack n3{{StrategyId::kNon3gppNotification}, {}, {}};
    CHECK_FALSE(validate_stack(n3, gens({Generation::k5G}), false).empty());
    CHECK(validate_stack(n3, gens({Generation::k5G}), true).empty());

    StrategyStack bad_basing{{StrategyId::kLeaveAndReturn}, {{StrategyId::kLeaveAndReturn, Deployment::kRan}}, {}};
    CHECK_FALSE(validate_stack(bad_basing, gens({Generation::k5G}), false).empty());

    StrategyStack twice{{StrategyId::kPagingCause, StrategyId::kPagingCause}, {}, {}};
    CHECK_FALSE(validate_stack(twice, gens({Generation::k5G}), false).empty());

    StrategyStack two_timing{{StrategyId::kAlternativeUeId, StrategyId::kPagingOffset}, {}, {}};
    CHECK_FALSE(validate_stack(two_timing, gens({Generation::k5G}), false).empty());
  }

  TEST_CASE("CN-based stacks touch fewer messages and nodes than RAN-based ones") {
    const auto groups = default_groups();
    const auto ran = std::find_if(groups.begin(), groups.end(), [](auto& g) { return g.name == "ran-based"; });
    const auto cn = std::find_if(groups.begin(), groups.end(), [](auto& g) { return g.name == "cn-based"; });
    REQUIRE(ran != groups.end());
    REQUIRE(cn != groups.end());
    auto score = [](const GroupSpec& g) {
      StrategyStack s;
      s.active = g.strategies;
      for (auto id : g.strategies)
        if (descriptor(id).supports(g.basing)) s.deployment[id] = g.basing;
      return stack_complexity(s);
    };
    CHECK(score(*cn) < score(*ran));
    CHECK(stack_complexity(StrategyStack{}) == 0);
    for (const auto& d : strategy_table()) CHECK(complexity_score(d.id, d.default_deployment()) > 0);
  }

  TEST_CASE("leave latency ordering") {
    const LinkDelays d;
    const Duration sw = std::chrono::milliseconds(5);
    for (Deployment dep : {Deployment::kRan, Deployment::kCn}) {
      const auto local = leave_latency(LeaveMode::kLocal, dep, d, sw);
      const auto graceful = leave_latency(LeaveMode::kGraceful, dep, d, sw);
      const auto lar = leave_latency(LeaveMode::kLeaveAndReturn, Deployment::kCn, d, sw);
      CHECK(local < graceful);
      CHECK(graceful < lar);
    }
    CHECK(leave_latency(LeaveMode::kShortAbsence, Deployment::kRan, d, sw) == sw);
  }

  TEST_CASE("first-fit paging offsets equal a brute-force search") {
    std::mt19937_64 gen(17);
    for (int c = 0; c < 60; ++c) {
      PagingConfig cfg;
      cfg.drx_cycle_frames = 32u << (gen() % 2);
      const int n = 2 + static_cast<int>(gen() % 2);
      std::vector<PagingSchedule> base;
      for (int i = 0; i < n; ++i) base.push_back(PagingSchedule::make(compute_occasion(gen() % 4096, cfg), cfg));
      const Duration grid(500);
      const auto a = assign_paging_offsets(base, grid, 1);
      REQUIRE(a.feasible);
      std::vector<PagingSchedule> placed;
      for (int i = 0; i < n; ++i) {
        Duration want{-1};
        for (Duration off{0}; off < base[static_cast<std::size_t>(i)].period; off += grid) {
          if (brute_free(shifted(base[static_cast<std::size_t>(i)], off), placed)) {
            want = off;
            break;
          }
        }
        CHECK(a.offsets[static_cast<std::size_t>(i)] == want);
        placed.push_back(shifted(base[static_cast<std::size_t>(i)], want));
      }
      CHECK(a.offsets[0] == Duration::zero());
    }
  }

  TEST_CASE("alternative id is the smallest collision-free successor") {
    std::mt19937_64 gen(23);
    PagingConfig cfg;
    for (int c = 0; c < 100; ++c) {
      const std::uint64_t other = gen() % 100000, base = gen() % 100000;
      const std::vector<PagingSchedule> others = {PagingSchedule::make(compute_occasion(other, cfg), cfg)};
      const auto got = choose_alternative_id(base, cfg, Duration::zero(), Duration::zero(), others, 1);
      std::optional<std::uint64_t> want;
      for (std::uint64_t id = base + 1; id <= base + 128; ++id) {
        if (brute_free(PagingSchedule::make(compute_occasion(id, cfg), cfg), others)) {
          want = id;
          break;
        }
      }
      CHECK(got == want);
    }
  }

  TEST_CASE("NAS parameter change returns a collision-free id") {
    PagingConfig cfg;
    const auto cur = PagingSchedule::make(compute_occasion(7, cfg), cfg);
    const std::vector<PagingSchedule> others = {cur};
    RngStream rng(2);
    const auto r = nas_parameter_change(cur, cfg, Duration::zero(), others, 1, 8, Duration(500), rng);
    REQUIRE(r.new_guti);
    CHECK(brute_free(PagingSchedule::make(compute_occasion(*r.new_guti, cfg), cfg), others));
  }

  TEST_CASE("graceful target state and SMS delay floor") {
    using std::chrono::milliseconds;
    CHECK(graceful_target_state(Generation::k5G, milliseconds(500), milliseconds(1000)) == RanState::kInactive);
    CHECK(graceful_target_state(Generation::k5G, milliseconds(5000), milliseconds(1000)) == RanState::kIdle);
    CHECK(graceful_target_state(Generation::k4G, milliseconds(500), milliseconds(1000)) == RanState::kIdle);
    RngStream rng(8);
    for (int i = 0; i < 1000; ++i) CHECK(sms_delay(rng, milliseconds(500), milliseconds(2000)) >= milliseconds(500));
  }
}
