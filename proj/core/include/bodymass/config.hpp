#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bodymass/scenario.hpp"

namespace bodymass {

/// Malformed configuration text, unknown key or bad value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every settable key, dotted by section (`reference.y0`, `alloc.rho1`, ...).
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Resolve a key. Exact names win; a name without a section resolves when it is
/// the last component of exactly one key (`rho1` -> `alloc.rho1`).
[[nodiscard]] std::string resolve_key(std::string_view key);

/// Set one field from its text form. Throws ConfigError.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Text form of one field, round-trip precision for numbers.
[[nodiscard]] std::string get_setting(const ScenarioConfig& cfg, std::string_view key);

/// Parse `key = value` lines on top of `base`. `#` starts a comment. A `preset`
/// key, if present, must be the first setting and replaces `base`.
[[nodiscard]] ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base = {},
                                          std::string_view origin = "<config>");

[[nodiscard]] ScenarioConfig load_config_file(const std::filesystem::path& path,
                                              const ScenarioConfig& base = {});

/// All keys in `config_keys()` order; parse_config(dump_config(c)) == c.
[[nodiscard]] std::string dump_config(const ScenarioConfig& cfg);

/// `key=value` split on the first '='.
[[nodiscard]] std::pair<std::string, std::string> split_override(std::string_view kv);

} // namespace bodymass
