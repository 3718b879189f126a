#include "neuropend/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

namespace neuropend {

namespace {

// Defaults shared by every scenario. Timescales put the free HCO period at 2π
// for g_s⁻ = g_us⁺ = 1.5 (see `neuropend calibrate`).
constexpr std::string_view kDefaults = R"(
scenario.horizon = 100
scenario.transient = 0.3
scenario.decimation = 10
stepper.dt = 0.001
stepper.crossing_tol = 1e-10
stepper.max_bisections = 60
neuron.tau_f = 0.073
neuron.tau_s = 0.73
neuron.tau_us = 3.65
neuron.g_f_minus = 2
neuron.g_s_plus = 2
neuron.g_s_minus = 1.5
neuron.g_us_plus = 1.5
neuron.i_nominal = -1
network.configuration = anti_phase
network.g_hco = 0.5
network.g_cross = 0.3
network.isolated_hco = false
plant.alpha = 1.4
plant.i_mag = 1.1
plant.v_th = 0
init.q = 0
init.q_dot = 0
init.neuron = -1, -1, -1
kick.enabled = true
kick.neuron = A1
kick.amplitude = 2
kick.duration = 0.3
kick.start = 0
phase.enabled = false
phase.q_p = -1
phase.P = 2
phase.w = 0.2
phase.direction = rising
adaptive.enabled = false
adaptive.omega_ref = 1
adaptive.a_ref = 0.5
adaptive.k_omega = 0.05
adaptive.k_a = 0.05
adaptive.p_a = 0.02
adaptive.g_us_min = 1.2
adaptive.g_us_max = 3.5
adaptive.g_s_min = 1.2
adaptive.g_s_max = 3.0
adaptive.start = 0
)";

struct Builtin {
    std::string_view name;
    std::string_view text;
};

// Underdamped initial conditions: (q, q̇) = (0, 0) converges to small
// oscillations, (1.5, 2) to the 2:1 rotation.
constexpr Builtin kBuiltins[] = {
    {"hco-free", R"(
scenario.description = isolated HCO; g_s_minus stepped up midway enlarges the bursts
scenario.horizon = 120
network.isolated_hco = true
change.1.time = 60
change.1.neuron.g_s_minus = 1.9
)"},
    {"config-switch", R"(
scenario.description = two HCOs in anti-phase, switched to in-phase coupling
scenario.horizon = 200
network.configuration = anti_phase
network.g_cross = 0.4
neuron.g_s_minus = 1.25
neuron.g_us_plus = 1.4245
change.1.time = 80
change.1.network.configuration = in_phase
)"},
    {"overdamped-entrain-small", R"(
scenario.description = anti-phase entrainment at alpha 1.4, small bursts
scenario.horizon = 150
neuron.g_s_minus = 1.25
neuron.g_us_plus = 1.4245
)"},
    {"overdamped-entrain-medium", R"(
scenario.description = anti-phase entrainment at alpha 1.4, medium bursts
scenario.horizon = 150
neuron.g_s_minus = 1.75
neuron.g_us_plus = 1.9876
)"},
    {"overdamped-entrain-large", R"(
scenario.description = anti-phase entrainment at alpha 1.4, large bursts
scenario.horizon = 150
neuron.g_s_minus = 2.25
neuron.g_us_plus = 2.5214
)"},
    {"gain-sweep", R"(
scenario.description = template for the entrainment map over (g_s_minus, g_us_plus)
scenario.horizon = 150
scenario.transient = 0.5
)"},
    {"bistability-high", R"(
scenario.description = in-phase entrainment at alpha 0.14 converging to the 2:1 rotation
scenario.horizon = 400
scenario.transient = 0.6
network.configuration = in_phase
plant.alpha = 0.14
plant.i_mag = 0.9
init.q = 1.5
init.q_dot = 2
)"},
    {"bistability-low", R"(
scenario.description = in-phase entrainment at alpha 0.14 converging to small oscillations
scenario.horizon = 400
scenario.transient = 0.6
network.configuration = in_phase
plant.alpha = 0.14
plant.i_mag = 0.9
init.q = 0
init.q_dot = 0
)"},
    {"prc", R"(
scenario.description = isolated HCO used for the phase response curve
scenario.horizon = 100
network.isolated_hco = true
plant.i_mag = 0
)"},
    {"phase-control", R"(
scenario.description = bistability-low initial condition with proportional phase control
scenario.horizon = 400
scenario.transient = 0.6
network.configuration = in_phase
plant.alpha = 0.14
plant.i_mag = 0.9
init.q = 0
init.q_dot = 0
phase.enabled = true
phase.q_p = -1
)"},
    {"adaptive-a040", R"(
scenario.description = adaptive regulation to A_ref 0.4 rad at omega_ref 1
scenario.horizon = 600
scenario.transient = 0.7
neuron.g_s_minus = 1.5
neuron.g_us_plus = 1.7
adaptive.enabled = true
adaptive.a_ref = 0.4
adaptive.start = 20
)"},
    {"adaptive-a050", R"(
scenario.description = adaptive regulation to A_ref 0.5 rad at omega_ref 1
scenario.horizon = 600
scenario.transient = 0.7
neuron.g_s_minus = 1.5
neuron.g_us_plus = 1.7
adaptive.enabled = true
adaptive.a_ref = 0.5
adaptive.start = 20
)"},
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k;
        const ConfigMap defaults = ConfigMap::parse(kDefaults);
        for (const auto& [key, value] : defaults.values()) k.insert(key);
        for (const char* extra : {"scenario.name", "scenario.description", "init.A1", "init.B1", "init.A2", "init.B2"}) {
            k.insert(extra);
        }
        return k;
    }();
    return keys;
}

NeuronState parse_triple(const ConfigMap& c, const std::string& key, NeuronState fallback) {
    const auto values = c.get_doubles(key);
    if (values.empty()) return fallback;
    if (values.size() != 3) throw ConfigError(key, "expected three values: v, v_s, v_us");
    return {values[0], values[1], values[2]};
}

Direction parse_direction(const std::string& key, const std::string& text) {
    if (text == "rising") return Direction::Rising;
    if (text == "falling") return Direction::Falling;
    if (text == "both") return Direction::Both;
    throw ConfigError(key, "expected rising, falling or both");
}

template <typename F>
auto guarded(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

}  // namespace

long long Scenario::total_steps() const {
    return static_cast<long long>(std::floor(horizon / setup.stepper.dt + 1e-9));
}

void Scenario::validate() const {
    if (!(horizon > 0.0)) throw ConfigError("scenario.horizon", "must be > 0");
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
        throw ConfigError("scenario.transient", "must lie in [0, 1)");
    }
    guarded("scenario", [&] {
        setup.validate();
        return 0;
    });
}

ConfigMap default_config() { return ConfigMap::parse(kDefaults, "<defaults>"); }

Scenario scenario_from_config(const ConfigMap& overrides) {
    ConfigMap c = default_config();
    c.merge(overrides);

    for (const auto& [key, value] : c.values()) {
        if (key.starts_with("change.")) continue;
        if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
    }

    Scenario s;
    s.source = c;
    s.name = c.get_string("scenario.name", "custom");
    s.description = c.get_string("scenario.description", "");
    s.horizon = c.get_double("scenario.horizon", 100.0);
    s.transient_fraction = c.get_double("scenario.transient", 0.3);

    auto& setup = s.setup;
    setup.decimation = c.get_int("scenario.decimation", 10);
    setup.stepper.dt = c.get_double("stepper.dt", 1e-3);
    setup.stepper.crossing_tol = c.get_double("stepper.crossing_tol", 1e-10);
    setup.stepper.max_bisections = c.get_int("stepper.max_bisections", 60);

    NeuronParams p;
    p.tau_f = c.get_double("neuron.tau_f", p.tau_f);
    p.tau_s = c.get_double("neuron.tau_s", p.tau_s);
    p.tau_us = c.get_double("neuron.tau_us", p.tau_us);
    p.g_f_minus = c.get_double("neuron.g_f_minus", p.g_f_minus);
    p.g_s_plus = c.get_double("neuron.g_s_plus", p.g_s_plus);
    p.g_s_minus = c.get_double("neuron.g_s_minus", p.g_s_minus);
    p.g_us_plus = c.get_double("neuron.g_us_plus", p.g_us_plus);
    p.i_nominal = c.get_double("neuron.i_nominal", p.i_nominal);
    guarded("neuron", [&] {
        p.validate();
        return 0;
    });

    const auto configuration = guarded("network.configuration", [&] {
        return parse_configuration(c.get_string("network.configuration", "anti_phase"));
    });
    const double g_hco = c.get_double("network.g_hco", 0.5);
    const double g_cross = c.get_double("network.g_cross", 0.3);
    setup.network = guarded("network", [&] { return build_network(configuration, p, g_hco, g_cross); });
    if (c.get_bool("network.isolated_hco", false)) {
        std::erase_if(setup.network.synapses, [](const SynapseSpec& syn) {
            return index_of(syn.pre) >= 2 || index_of(syn.post) >= 2;
        });
    }

    setup.plant.alpha = c.get_double("plant.alpha", 1.4);
    setup.plant.i_mag = c.get_double("plant.i_mag", 1.1);
    setup.plant.v_th = c.get_double("plant.v_th", 0.0);
    setup.plant.motor_signs = motor_signs_for(configuration);

    setup.pendulum0 = {c.get_double("init.q", 0.0), c.get_double("init.q_dot", 0.0)};
    const NeuronState common = parse_triple(c, "init.neuron", {-1.0, -1.0, -1.0});
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        const std::string key = "init." + std::string(neuron_name(static_cast<NeuronId>(k)));
        setup.neurons0[k] = parse_triple(c, key, common);
    }

    if (c.get_bool("kick.enabled", true)) {
        Kick kick;
        kick.neuron = guarded("kick.neuron", [&] { return parse_neuron(c.get_string("kick.neuron", "A1")); });
        kick.amplitude = c.get_double("kick.amplitude", kick.amplitude);
        kick.duration = c.get_double("kick.duration", kick.duration);
        kick.start = c.get_double("kick.start", kick.start);
        if (!(kick.duration > 0.0)) throw ConfigError("kick.duration", "must be > 0");
        setup.kick = kick;
    } else {
        setup.kick.reset();
    }

    setup.phase.enabled = c.get_bool("phase.enabled", false);
    setup.phase.q_p = c.get_double("phase.q_p", -1.0);
    setup.phase.P = c.get_double("phase.P", 2.0);
    setup.phase.w = c.get_double("phase.w", 0.2);
    setup.phase_direction = parse_direction("phase.direction", c.get_string("phase.direction", "rising"));

    auto& a = setup.adaptive;
    a.enabled = c.get_bool("adaptive.enabled", false);
    a.omega_ref = c.get_double("adaptive.omega_ref", a.omega_ref);
    a.a_ref = c.get_double("adaptive.a_ref", a.a_ref);
    a.k_omega = c.get_double("adaptive.k_omega", a.k_omega);
    a.k_a = c.get_double("adaptive.k_a", a.k_a);
    a.p_a_fixed = c.get_double("adaptive.p_a", a.p_a_fixed);
    a.g_us_range = {c.get_double("adaptive.g_us_min", a.g_us_range.lo), c.get_double("adaptive.g_us_max", a.g_us_range.hi)};
    a.g_s_range = {c.get_double("adaptive.g_s_min", a.g_s_range.lo), c.get_double("adaptive.g_s_max", a.g_s_range.hi)};
    a.start_time = c.get_double("adaptive.start", 0.0);

    // change.<n>.<key>
    std::map<std::string, ParameterChange> changes;
    for (const auto& key : c.keys_with_prefix("change.")) {
        const auto rest = key.substr(7);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) throw ConfigError(key, "expected change.<n>.<key>");
        const std::string id = rest.substr(0, dot);
        const std::string field = rest.substr(dot + 1);
        auto& ch = changes.try_emplace(id, ParameterChange{-1.0, {}, {}, {}}).first->second;
        if (field == "time") {
            ch.time = c.get_double(key, 0.0);
        } else if (field == "neuron.g_s_minus") {
            ch.g_s_minus = c.get_double(key, 0.0);
        } else if (field == "neuron.g_us_plus") {
            ch.g_us_plus = c.get_double(key, 0.0);
        } else if (field == "network.configuration") {
            ch.configuration = guarded(key, [&] { return parse_configuration(*c.get(key)); });
        } else {
            throw ConfigError(key, "unsupported change field");
        }
    }
    for (const auto& [id, ch] : changes) {
        if (ch.time < 0.0) throw ConfigError("change." + id + ".time", "missing or negative");
        setup.changes.push_back(ch);
    }

    s.validate();
    return s;
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.emplace_back(b.name);
    return out;
}

ConfigMap builtin_scenario_config(std::string_view name) {
    for (const auto& b : kBuiltins) {
        if (b.name == name) {
            ConfigMap c = ConfigMap::parse(b.text, name);
            c.set("scenario.name", std::string(name));
            return c;
        }
    }
    throw ConfigError("scenario", "unknown scenario '" + std::string(name) + "'");
}

Scenario builtin_scenario(std::string_view name) { return scenario_from_config(builtin_scenario_config(name)); }

ConfigMap resolve_scenario_config(const std::string& name_or_path) {
    for (const auto& b : kBuiltins) {
        if (b.name == name_or_path) return builtin_scenario_config(name_or_path);
    }
    if (std::filesystem::exists(name_or_path)) {
        const ConfigMap file = ConfigMap::load(name_or_path);
        // A file may start from a built-in via `scenario.base`.
        const auto base = file.get("scenario.base");
        if (!base) return file;
        ConfigMap c = builtin_scenario_config(*base);
        for (const auto& [key, value] : file.values()) {
            if (key != "scenario.base") c.set(key, value);
        }
        if (!file.contains("scenario.name")) c.set("scenario.name", std::filesystem::path(name_or_path).stem().string());
        return c;
    }
    throw ConfigError("scenario", "no built-in scenario or file named '" + name_or_path + "'");
}

}  // namespace neuropend
