#include <doctest.h>

#include <random>

#include "msim/paging.hpp"
#include "oracles.hpp"

using namespace msim;
using std::chrono::milliseconds;

namespace {

PagingConfig config(std::uint32_t T, std::uint32_t Ns, Duration offset = Duration::zero()) {
  PagingConfig c;
  c.drx_cycle_frames = T;
  c.occasions_per_frame = Ns;
  c.frame_offset = offset;
  return c;
}

}  // namespace

TEST_SUITE("paging") {
  TEST_CASE("occasion formula") {
    const PagingConfig c = config(32, 4);
    const auto o = compute_occasion(100, c);
    CHECK(o.pf == 4);   // 100 mod 32
    CHECK(o.po == 3);   // floor(100 / 32) mod 4
    CHECK(c.cycle_length() == milliseconds(320));
    CHECK(c.occasion_spacing() == std::chrono::microseconds(2500));
  }

  TEST_CASE("wall times step by one DRX cycle") {
    const PagingConfig c = config(32, 4, std::chrono::microseconds(1250));
    const auto times = occasion_wall_times(compute_occasion(100, c), c, milliseconds(1000));
    REQUIRE(times.size() == 3);
    CHECK(times[0].count() == 1250 + 40000 + 7500);
    CHECK(times[1] - times[0] == milliseconds(320));
  }

  TEST_CASE("detect_collision equals exhaustive enumeration") {
    std::mt19937_64 gen(2024);
    const std::uint32_t Ts[] = {32, 64, 128, 256};
    const std::uint32_t Ns[] = {1, 2, 4};
    for (int i = 0; i < 2000; ++i) {
      oracle::Timing ta{Ts[gen() % 4], Ns[gen() % 3], 10000, static_cast<std::int64_t>(gen() % 10000),
                        static_cast<std::int64_t>(gen() % 20000)};
      oracle::Timing tb{Ts[gen() % 4], Ns[gen() % 3], 10000, static_cast<std::int64_t>(gen() % 10000), 0};
      const std::uint64_t ida = gen() % 100000, idb = gen() % 100000;
      PagingConfig ca = config(ta.T, ta.Ns, Duration(ta.frame_offset_us));
      PagingConfig cb = config(tb.T, tb.Ns, Duration(tb.frame_offset_us));
      const auto sa = PagingSchedule::make(compute_occasion(ida, ca), ca, Duration(ta.extra_offset_us));
      const auto sb = PagingSchedule::make(compute_occasion(idb, cb), cb);
      const auto rep = detect_collision(sa, sb, 1);
      const auto e = oracle::enumerate_collisions(oracle::first_start(ida, ta), 10000LL * ta.T, 10000 / ta.Ns,
                                                  oracle::first_start(idb, tb), 10000LL * tb.T, 10000 / tb.Ns);
      REQUIRE(rep.occurrences == e.windows);
      REQUIRE(rep.colliding == e.colliding);
    }
  }

  TEST_CASE("equal ids on one network collide systematically; two receivers never collide") {
    const PagingConfig c = config(32, 4);
    const auto s = PagingSchedule::make(compute_occasion(77, c), c);
    const auto rep = detect_collision(s, s, 1);
    CHECK(rep.systematic);
    CHECK(rep.fraction_colliding == 1.0);
    CHECK(detect_collision(s, s, 2).fraction_colliding == 0.0);
  }

  TEST_CASE("adjacent occasions touch but do not overlap") {
    const PagingConfig c = config(32, 4);
    const auto a = PagingSchedule::make(compute_occasion(0, c), c);   // pf 0 po 0
    const auto b = PagingSchedule::make(compute_occasion(32, c), c);  // pf 0 po 1
    CHECK(detect_collision(a, b, 1).colliding == 0);
  }

  TEST_CASE("count_in and overlaps agree with the listed window starts") {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 300; ++i) {
      const PagingConfig c = config(32, 4, Duration(static_cast<std::int64_t>(gen() % 10000)));
      const auto occ = compute_occasion(gen() % 5000, c);
      const auto s = PagingSchedule::make(occ, c);
      const auto starts = occasion_wall_times(occ, c, milliseconds(5000));
      const SimTime from(static_cast<std::int64_t>(gen() % 2000000));
      const SimTime to = from + Duration(static_cast<std::int64_t>(gen() % 2000000));
      std::int64_t n = 0;
      for (auto t : starts) n += t >= from && t < to;
      CHECK(s.count_in(from, to) == n);
      const Duration len(static_cast<std::int64_t>(1 + gen() % 5000));
      bool hit = false;
      for (auto t : starts) hit |= t < from + len && from < t + s.listen_window;
      CHECK(s.overlaps(from, len) == hit);
    }
  }

  TEST_CASE("three attempts per level, then escalate, then give up") {
    PagingProcedure p(PagingKind::kCn, {PagingScope::kLastCell, PagingScope::kTaList, PagingScope::kFullRegistrationArea},
                      {1, 12, 64}, 3);
    using St = PagingProcedure::Step;
    CHECK(p.record_attempt(false) == St::kRetry);
    CHECK(p.record_attempt(false) == St::kRetry);
    CHECK(p.record_attempt(false) == St::kEscalated);
    CHECK(p.scope() == PagingScope::kTaList);
    for (int i = 0; i < 2; ++i) CHECK(p.record_attempt(false) == St::kRetry);
    CHECK(p.record_attempt(false) == St::kEscalated);
    CHECK(p.record_attempt(false) == St::kRetry);
    CHECK(p.record_attempt(false) == St::kRetry);
    CHECK(p.record_attempt(false) == St::kExhausted);
    CHECK(p.attempts_used() == 9);
    CHECK(p.cells_paged() == 3 * (1 + 12 + 64));
    CHECK(p.outcome().escalated);
    CHECK_FALSE(p.outcome().responded);
  }

  TEST_CASE("first-attempt answer pages one cell") {
    PagingProcedure p(PagingKind::kCn, {PagingScope::kLastCell}, {1}, 3);
    CHECK(p.record_attempt(true) == PagingProcedure::Step::kAnswered);
    CHECK(p.outcome().responded);
    CHECK(p.cells_paged() == 1);
    CHECK_FALSE(p.escalated());
  }

  TEST_CASE("scope sizes") {
    TopologyModel t;  // 64 cells, 4 per TA, 4 TAs per RAA
    const std::vector<TaId> list = t.ta_list_around(5);
    CHECK(list == std::vector<TaId>{4, 5, 6});
    CHECK(scope_cells(PagingScope::kLastCell, t, Generation::k5G, list, {}) == 1);
    CHECK(scope_cells(PagingScope::kTaList, t, Generation::k5G, list, {}) == 12);
    CHECK(scope_cells(PagingScope::kFullRegistrationArea, t, Generation::k4G, list, {}) == 64);
    CHECK(scope_cells(PagingScope::kFullRegistrationArea, t, Generation::k5G, list, {}) == 16);
    CHECK(scope_cells(PagingScope::kRna, t, Generation::k5G, list, {5}) == 4);
  }

  TEST_CASE("synchronous CN paging: a UE that answers on the second attempt") {
    NetworkModel net;
    SimProfile sim;
    sim.cn_state = CnState::kIdle;
    sim.ta_list = {0, 1, 15};
    int calls = 0;
    const auto out = run_cn_paging(net, sim, std::nullopt, SimTime(0), [&](const PageAttempt&) {
      return ++calls == 2 ? PageReply::kAnswered : PageReply::kNoListener;
    });
    CHECK(out.responded);
    CHECK(out.attempts_used == 2);
    CHECK_FALSE(out.escalated);
  }

  TEST_CASE("synchronous RAN paging failure discards the buffer") {
    NetworkModel net;
    SimProfile sim;
    sim.cn_state = CnState::kConnected;
    sim.ran_state = RanState::kInactive;
    const auto out = run_ran_paging(net, sim, {0}, SimTime(0), [](const PageAttempt&) { return PageReply::kNoListener; });
    CHECK_FALSE(out.responded);
    CHECK(out.buffer_discarded);
    REQUIRE(out.error);
    CHECK(*out.error == ErrorCode::kRanPagingFailed);
  }

  TEST_CASE("busy reply stops paging without escalation") {
    NetworkModel net;
    SimProfile sim;
    sim.cn_state = CnState::kIdle;
    sim.ta_list = {0, 1, 15};
    const auto out = run_cn_paging(net, sim, std::nullopt, SimTime(0), [](const PageAttempt&) { return PageReply::kBusy; });
    CHECK(out.busy);
    CHECK(out.attempts_used == 1);
    CHECK_FALSE(out.escalated);
  }
}
