#pragma once

// Named experiment definitions and their translation into a simulation setup.

#include <string>
#include <string_view>
#include <vector>

#include "neuropend/config.hpp"
#include "neuropend/simulator.hpp"

namespace neuropend {

struct Scenario {
    std::string name;
    std::string description;
    SimulationSetup setup;
    double horizon = 100.0;
    double transient_fraction = 0.3;
    ConfigMap source;  // the resolved key/value set the scenario was built from

    [[nodiscard]] double transient() const { return transient_fraction * horizon; }
    [[nodiscard]] long long total_steps() const;
    void validate() const;
};

/// Builds a scenario from configuration keys; unknown keys are rejected.
[[nodiscard]] Scenario scenario_from_config(const ConfigMap& config);

/// Baseline keys every scenario starts from.
[[nodiscard]] ConfigMap default_config();

[[nodiscard]] std::vector<std::string> builtin_scenario_names();
/// Configuration text of a built-in scenario; throws ConfigError if unknown.
[[nodiscard]] ConfigMap builtin_scenario_config(std::string_view name);
[[nodiscard]] Scenario builtin_scenario(std::string_view name);

/// Resolves a built-in name or a config file path.
[[nodiscard]] ConfigMap resolve_scenario_config(const std::string& name_or_path);

}  // namespace neuropend
