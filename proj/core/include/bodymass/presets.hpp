#pragma once

#include <string_view>
#include <vector>

#include "bodymass/scenario.hpp"

namespace bodymass {

/// Names of the built-in studies.
[[nodiscard]] const std::vector<std::string_view>& preset_names();

/// Built-in scenario by name. Throws ConfigError for an unknown name.
[[nodiscard]] ScenarioConfig make_preset(std::string_view name);

/// Same scenario with every disturbance and noise channel off.
[[nodiscard]] ScenarioConfig nominal(ScenarioConfig cfg);

} // namespace bodymass
