#include <doctest.h>

#include <random>

#include "msim/domain.hpp"
#include "msim/rng.hpp"
#include "oracles.hpp"

using namespace msim;

TEST_SUITE("domain") {
  TEST_CASE("mt19937_64 stream matches the reference sequence") {
    // The C++ standard fixes the 10000th output of a default-seeded engine.
    RngStream s(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = s.next_u64();
    CHECK(v == 9981545732273789042ULL);
  }

  TEST_CASE("splitmix64 matches the published test vector") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
  }

  TEST_CASE("streams are independent per purpose, device and sim") {
    RngStream a(7, 1, 0, StreamPurpose::kTraffic);
    RngStream b(7, 1, 0, StreamPurpose::kMobility);
    RngStream c(7, 2, 0, StreamPurpose::kTraffic);
    RngStream d(7, 1, 1, StreamPurpose::kTraffic);
    RngStream a2(7, 1, 0, StreamPurpose::kTraffic);
    const auto va = a.next_u64();
    CHECK(va != b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
    CHECK(va == a2.next_u64());
  }

  TEST_CASE("uniform_int stays in range and hits both ends") {
    RngStream s(3);
    bool lo = false, hi = false;
    for (int i = 0; i < 2000; ++i) {
      const auto v = s.uniform_int(5, 9);
      REQUIRE(v >= 5);
      REQUIRE(v <= 9);
      lo |= v == 5;
      hi |= v == 9;
    }
    CHECK(lo);
    CHECK(hi);
  }

  TEST_CASE("exponential draws have the requested mean") {
    RngStream s(11);
    const int n = 200000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += s.exponential(4.0);
    // Standard error of the mean is 4 / sqrt(n) ~ 0.009.
    CHECK(sum / n == doctest::Approx(4.0).epsilon(0.01));
  }

  TEST_CASE("policy lookup equals a linear scan") {
    std::mt19937 gen(99);
    auto pick = [&](int n) { return static_cast<int>(gen() % static_cast<unsigned>(n)); };
    for (int table = 0; table < 200; ++table) {
      PolicyTable t;
      const int rules = 1 + pick(6);
      for (int i = 0; i < rules; ++i) {
        PolicyRule r;
        if (pick(3)) r.incoming = static_cast<ServiceKind>(pick(4));
        r.activity = static_cast<ActivityMatch>(pick(7));
        r.action = static_cast<PolicyAction>(pick(4));
        t.rules.push_back(r);
      }
      t.rules.push_back({std::nullopt, ActivityMatch::kAny, static_cast<PolicyAction>(pick(4))});
      REQUIRE(t.has_catch_all());
      for (int q = 0; q < 50; ++q) {
        std::optional<ServiceKind> in, act;
        if (pick(4)) in = static_cast<ServiceKind>(pick(4));
        if (pick(3)) act = static_cast<ServiceKind>(pick(4));
        CHECK(match_policy(t, in, act) == *oracle::scan_policy(t, in, act));
      }
    }
  }

  TEST_CASE("default policy: emergency always wins, a busy voice call rejects voice") {
    const PolicyTable p = PolicyTable::defaults();
    CHECK(match_policy(p, ServiceKind::kEmergency, ServiceKind::kVoice) == PolicyAction::kAcceptLeave);
    CHECK(match_policy(p, ServiceKind::kVoice, ServiceKind::kVoice) == PolicyAction::kRejectBusy);
    CHECK(match_policy(p, ServiceKind::kVoice, std::nullopt) == PolicyAction::kAcceptLeave);
    CHECK(match_policy(p, std::nullopt, ServiceKind::kData) == PolicyAction::kIgnore);
  }

  TEST_CASE("a policy without catch-all fails loudly") {
    PolicyTable p{{{ServiceKind::kVoice, ActivityMatch::kAny, PolicyAction::kAcceptLeave}}};
    CHECK_FALSE(p.has_catch_all());
    CHECK_THROWS_AS(match_policy(p, ServiceKind::kData, std::nullopt), Error);
  }

  TEST_CASE("legal state pairs") {
    CHECK(legal_state_pair(CnState::kDeregistered, RanState::kIdle));
    CHECK(legal_state_pair(CnState::kIdle, RanState::kIdle));
    CHECK(legal_state_pair(CnState::kConnected, RanState::kInactive));
    CHECK(legal_state_pair(CnState::kConnected, RanState::kConnected));
    CHECK_FALSE(legal_state_pair(CnState::kIdle, RanState::kConnected));
    CHECK_FALSE(legal_state_pair(CnState::kIdle, RanState::kInactive));
    CHECK_FALSE(legal_state_pair(CnState::kDeregistered, RanState::kConnected));
  }

  TEST_CASE("service priorities must be strictly ordered") {
    CHECK(ServiceClasses().strictly_ordered());
    CHECK_FALSE(ServiceClasses(10, 20, 5, 1).strictly_ordered());
    CHECK(ServiceClasses()[ServiceKind::kSms].plane == Plane::kControl);
  }

  TEST_CASE("device hardware invariants") {
    UeDevice d;
    d.sims.resize(2);
    CHECK_NOTHROW(validate_device(d));
    d.num_tx = 2;
    CHECK_THROWS_AS(validate_device(d), Error);
    d.num_tx = 1;
    d.mode = DualSimMode::kDsda;
    CHECK_THROWS_AS(validate_device(d), Error);
    d.num_rx = 2;
    CHECK_NOTHROW(validate_device(d));
    d.sims.resize(1);
    CHECK_THROWS_AS(validate_device(d), Error);
  }

  TEST_CASE("only pages and data notifications carry a cause") {
    CHECK(may_carry_paging_cause(MsgKind::kPageCn));
    CHECK(may_carry_paging_cause(MsgKind::kPageRan));
    CHECK(may_carry_paging_cause(MsgKind::kDownlinkDataNotification));
    CHECK_FALSE(may_carry_paging_cause(MsgKind::kServiceRequest));
  }

  TEST_CASE("temporal id refresh keeps the IMSI") {
    UeIdentity id{123456789012345ULL, 1, 2, kNever};
    RngStream s(5);
    const UeIdentity next = regenerate_temporal_ids(id, s);
    CHECK(next.imsi == id.imsi);
    CHECK((next.temporal_cn_id != id.temporal_cn_id || next.temporal_ran_id != id.temporal_ran_id));
  }
}
