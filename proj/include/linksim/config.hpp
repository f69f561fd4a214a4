#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "linksim/sim_harness.hpp"

namespace linksim {

/// Keys accepted in config files and `--set` overrides.
const std::vector<std::string>& valid_config_keys();

/// Applies one key=value setting, appending "key: reason" to `problems` on
/// failure. List values are comma separated; `boosted_rbs` accepts inclusive
/// ranges "a:b"; `snr_points_db` accepts "start:step:stop".
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value,
                   std::vector<std::string>& problems);

/// Parses flat `key = value` text ('#' starts a comment) on top of `base`.
/// Throws ConfigError listing every bad line and every invalid field.
ScenarioConfig parse_config(std::istream& in, std::string_view source,
                            ScenarioConfig base = {});

ScenarioConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" overrides then validates. Throws ConfigError.
void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides);

/// $LINKSIM_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path data_directory();

/// Absolute paths and paths that exist relative to the working directory
/// are used as given; anything else is looked up in data_directory().
std::filesystem::path resolve_data_path(const std::string& file);

inline constexpr std::uint64_t kPaperReproSeed = 20170801;

/// The three interference scenarios of the REG-bundle study over a 48-RB,
/// single-symbol CORESET with TDL-A fading at 300 ns delay spread: flat,
/// RBs 1-12 boosted by 3 dB (ALs 1,2,4,8) and RBs 1-24 boosted (ALs 1,2).
std::vector<ScenarioConfig> paper_repro_scenarios();

}  // namespace linksim
