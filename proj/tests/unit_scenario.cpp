#include <doctest.h>

#include "msim/scenario.hpp"
#include "support.hpp"

using namespace msim;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kConfigInvalid;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("every preset loads and validates") {
    for (const auto& name : testing::preset_names()) {
      CAPTURE(name);
      const Scenario s = testing::preset(name);
      CHECK(s.id == name);
      CHECK(validate(s).empty());
      CHECK(s.devices.count == 1000);
      CHECK(s.replications == 30);
    }
  }

  TEST_CASE("preset labels") {
    const auto c = classify(testing::preset("5g-4g-dual-rx-different-mno"));
    CHECK(c.generations == "4G+5G");
    CHECK(c.receivers == "dual Rx");
    CHECK(c.operators == "different MNO");
    const auto d = classify(testing::preset("4g-4g-single-rx-same-mno"));
    CHECK(d.receivers == "single Rx");
    CHECK(d.operators == "same MNO");
    CHECK(d.camping == "same PLMN");
  }

  TEST_CASE("busy indication is refused on a 4G-only scenario") {
    const Scenario s = scenario_from_json(
        load_scenario_json(testing::preset_path("4g-4g-dual-rx-different-mno"), {"strategies.active=[3]"}));
    const auto v = validate(s);
    REQUIRE_FALSE(v.empty());
    bool found = false;
    for (const auto& m : v) found |= m.find("Busy requires 5G") != std::string::npos;
    CHECK(found);
    CHECK(code_of([&] { require_valid(s); }) == ErrorCode::kConfigInvalid);
    CHECK(code_of([] { testing::preset("4g-4g-dual-rx-different-mno", {"strategies.active=[3]"}); }) ==
          ErrorCode::kConfigInvalid);
  }

  TEST_CASE("paging offset and the empty stack are valid everywhere") {
    for (const auto& name : testing::preset_names()) {
      CHECK(validate(testing::preset(name, {"strategies.active=[13]"})).empty());
      CHECK(validate(testing::preset(name, {"strategies.active=[]"})).empty());
    }
  }

  TEST_CASE("unknown strategy ids and keys are rejected") {
    CHECK(code_of([] { testing::preset("5g-5g-dual-rx-same-mno", {"strategies.active=[15]"}); }) ==
          ErrorCode::kConfigInvalid);
    CHECK(code_of([] { testing::preset("5g-5g-dual-rx-same-mno", {"devices.colour=\"red\""}); }) ==
          ErrorCode::kConfigInvalid);
    CHECK(code_of([] { testing::preset("5g-5g-dual-rx-same-mno", {"no_equals_sign"}); }) ==
          ErrorCode::kConfigInvalid);
  }

  TEST_CASE("strategies may be named") {
    const Scenario s =
        testing::preset("5g-5g-dual-rx-same-mno", {"strategies.active=[\"paging_cause\",\"graceful_leaving\"]"});
    CHECK(s.strategies.active == std::vector<StrategyId>{StrategyId::kPagingCause, StrategyId::kGracefulLeaving});
  }

  TEST_CASE("overrides reach nested keys and array elements") {
    json j = {{"a", {{"b", 1}}}, {"list", {{{"x", 1}}, {{"x", 2}}}}};
    apply_override(j, "a.b=7");
    apply_override(j, "a.c=hello");
    apply_override(j, "list.1.x=[1,2]");
    CHECK(j["a"]["b"] == 7);
    CHECK(j["a"]["c"] == "hello");
    CHECK(j["list"][1]["x"] == json::array({1, 2}));

    const Scenario s = testing::preset("5g-5g-dual-rx-same-mno",
                                       {"devices.count=12", "networks.0.paging.drx_cycle_frames=64",
                                        "mobility.mean_dwell_s=null", "strategies.deployment={\"1\":\"CN\"}",
                                        "strategies.active=[1]"});
    CHECK(s.devices.count == 12);
    CHECK(s.networks[0].paging.drx_cycle_frames == 64);
    CHECK(s.mobility.mean_dwell == kNever);
    CHECK(s.strategies.basing(StrategyId::kPagingCause) == Deployment::kCn);
  }

  TEST_CASE("JSON round trip") {
    for (const auto& name : testing::preset_names()) {
      const Scenario s = testing::preset(name, {"strategies.active=[1,13]", "strategies.params.absence_ms=250"});
      const json a = scenario_to_json(s);
      const Scenario back = scenario_from_json(a);
      CHECK(scenario_to_json(back) == a);
      CHECK(back.strategies.params.absence_duration == std::chrono::milliseconds(250));
    }
  }

  TEST_CASE("structural rules") {
    Scenario s = testing::preset("5g-5g-dual-rx-same-mno");
    s.devices.mode = DualSimMode::kDsda;
    s.devices.num_rx = 1;
    CHECK_FALSE(validate(s).empty());
    s = testing::preset("5g-5g-dual-rx-same-mno");
    s.devices.sim_networks = {0, 3};
    CHECK_FALSE(validate(s).empty());
    s = testing::preset("5g-5g-dual-rx-same-mno");
    s.networks[0].paging.occasions_per_frame = 3;
    CHECK_FALSE(validate(s).empty());
    s = testing::preset("5g-5g-dual-rx-same-mno");
    s.devices.policy.rules.pop_back();
    CHECK_FALSE(validate(s).empty());
  }

  TEST_CASE("stack labels") {
    CHECK(stack_label(StrategyStack{}) == "baseline");
    StrategyStack s;
    s.active = {StrategyId::kPagingCause, StrategyId::kPushNotification};
    s.deployment[StrategyId::kPagingCause] = Deployment::kCn;
    CHECK(stack_label(s) == "1C+8");
  }
}
