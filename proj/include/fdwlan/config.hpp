#pragma once

#include <map>
#include <optional>
#include <string>

#include "fdwlan/simulator.hpp"

namespace fdwlan {

/// Parsed INI-style text: [section] headers, key = value lines, '#'/';' comments.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

IniData parse_ini(const std::string& text);
IniData load_ini(const std::string& path);

/// Applies a [phy_mac] section onto Table-defaults; unknown keys are errors.
void apply_phy_mac(const IniData& ini, PhyMacParams& params);

/// Applies [backoff] (w0, m, r); missing keys fall back to the phy ladder.
BackoffParams make_backoff(const IniData& ini, const PhyMacParams& params);

/// Applies [scenario] (n, duplex, aggregation, rho, horizon_events, seed, runs).
void apply_scenario(const IniData& ini, Scenario& scenario);

/// Scenario built from a config file (or defaults when path is empty).
Scenario scenario_from_config(const std::string& path);

/// Resolves the config path: explicit flag, else $IBFD_DCF_CONFIG, else none.
std::optional<std::string> default_config_path(const std::string& flag_value);

}  // namespace fdwlan
