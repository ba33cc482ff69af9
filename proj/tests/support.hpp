#pragma once

#include <string>
#include <vector>

#include "msim/scenario.hpp"

#ifndef MSIM_PRESET_DIR
#error "MSIM_PRESET_DIR must point at the presets directory"
#endif

namespace testing {

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "5g-5g-single-rx-different-mno", "5g-4g-dual-rx-different-mno", "4g-4g-single-rx-same-mno",
      "5g-5g-dual-rx-same-mno",        "4g-4g-dual-rx-different-mno",
  };
  return names;
}

inline std::string preset_path(const std::string& name) { return std::string(MSIM_PRESET_DIR) + "/" + name + ".json"; }

inline msim::Scenario preset(const std::string& name, const std::vector<std::string>& overrides = {}) {
  return msim::load_scenario(preset_path(name), overrides);
}

}  // namespace testing
