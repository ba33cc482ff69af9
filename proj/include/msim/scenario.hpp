#pragma once

// One experiment: networks, the device population, traffic, mobility, the
// strategy stack and run controls. Loaded from JSON; `--set key=value`
// overrides are applied to the JSON document before it is parsed.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "msim/domain.hpp"
#include "msim/mobility.hpp"
#include "msim/paging.hpp"
#include "msim/strategies.hpp"

namespace msim {

struct DeviceConfig {
  std::uint32_t count = 100;
  int num_rx = 1;
  int num_tx = 1;
  DualSimMode mode = DualSimMode::kDsds;
  Duration switch_delay = std::chrono::milliseconds(5);
  PolicyTable policy = PolicyTable::defaults();
  std::vector<int> sim_networks = {0, 1};  // network index per SIM; SIM 0 is the primary
  bool n3iwf_registered = false;
  Duration refresh_period = kNever;
};

struct TrafficModel {
  // MT arrivals per hour, indexed [role][ServiceKind].
  std::array<std::array<double, 4>, 2> rate_per_hour{{{3, 6, 6, 0}, {3, 6, 3, 0}}};
  // Mean holding time per ServiceKind. SMS holds for a fixed time, the
  // others are exponential.
  std::array<Duration, 4> mean_duration{std::chrono::seconds(90), std::chrono::milliseconds(40),
                                        std::chrono::seconds(20), std::chrono::seconds(120)};

  double rate(SimRole role, ServiceKind k) const {
    return rate_per_hour[static_cast<std::size_t>(role)][static_cast<std::size_t>(k)];
  }
  double total_rate(SimRole role) const;
};

struct Scenario {
  std::string id = "scenario";
  std::string description;
  std::vector<NetworkModel> networks;
  DeviceConfig devices;
  TrafficModel traffic;
  MobilityModel mobility;
  StrategyStack strategies;
  LinkDelays delays;
  ServiceClasses classes;
  Duration horizon = std::chrono::minutes(10);
  std::uint64_t seed = 1;
  int replications = 1;
  double radio_loss = 0.0;
  Duration rlf_timeout = std::chrono::seconds(1);
  bool ran_failure_fallback = true;

  const NetworkModel& network_of_sim(int sim) const {
    return networks[static_cast<std::size_t>(devices.sim_networks[static_cast<std::size_t>(sim)])];
  }
  int num_sims() const { return static_cast<int>(devices.sim_networks.size()); }
  ScenarioProfile profile() const;
};

// Descriptive labels of a scenario: generations, receivers, operators, camping, services.
struct ScenarioClass {
  std::string generations;  // e.g. "5G+4G"
  std::string receivers;    // "single Rx" / "dual Rx"
  std::string operators;    // "same MNO" / "different MNO"
  std::string camping;      // "same PLMN" / "different PLMN"
  std::string services;     // e.g. "voice, SMS, data"
};
ScenarioClass classify(const Scenario& s);

// Every violated rule, in a stable order. Empty means valid.
std::vector<std::string> validate(const Scenario& s);
// Throws Error(kConfigInvalid) listing every violation.
void require_valid(const Scenario& s);

// JSON <-> Scenario. Unknown keys are rejected so typos do not silently fall
// back to defaults.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
// Reads a scenario file and applies the overrides without interpreting it.
nlohmann::json load_scenario_json(const std::string& path, const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

// Applies "a.b.c=value" to a JSON document; value is parsed as JSON when it
// can be, otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

std::string stack_label(const StrategyStack& stack);

}  // namespace msim
