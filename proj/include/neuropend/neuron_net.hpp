#pragma once

// Four-neuron controller: two half-centre oscillators (A1/B1, A2/B2) with
// in-phase or anti-phase coupling between them.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace neuropend {

enum class NeuronId : std::size_t { A1 = 0, B1 = 1, A2 = 2, B2 = 3 };

inline constexpr std::size_t kNeuronCount = 4;

[[nodiscard]] constexpr std::size_t index_of(NeuronId id) { return static_cast<std::size_t>(id); }
[[nodiscard]] std::string_view neuron_name(NeuronId id);
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] NeuronId parse_neuron(std::string_view name);

enum class Configuration { InPhase, AntiPhase };

[[nodiscard]] std::string_view configuration_name(Configuration c);
[[nodiscard]] Configuration parse_configuration(std::string_view name);

struct NeuronParams {
    double tau_f = 0.073;
    double tau_s = 0.73;
    double tau_us = 3.65;
    double g_f_minus = 2.0;
    double g_s_plus = 2.0;
    double g_s_minus = 1.5;
    double g_us_plus = 1.5;
    double i_nominal = -1.0;

    void validate() const;
};

struct NeuronState {
    double v = 0.0;
    double v_s = 0.0;
    double v_us = 0.0;
};

struct NeuronDerivative {
    double dv = 0.0;
    double dv_s = 0.0;
    double dv_us = 0.0;
};

struct SynapseSpec {
    NeuronId pre;
    NeuronId post;
    double g_syn;  // > 0 excitatory, < 0 inhibitory
};

struct NetworkSpec {
    NeuronParams params;
    std::vector<SynapseSpec> synapses;
    Configuration configuration = Configuration::AntiPhase;
    double g_hco = 0.5;
    double g_cross = 0.3;

    /// Checks the synapse graph against the configuration.
    void validate() const;
};

using NetworkState = std::array<NeuronState, kNeuronCount>;
using NetworkDerivative = std::array<NeuronDerivative, kNeuronCount>;
using CurrentVector = std::array<double, kNeuronCount>;

[[nodiscard]] double synapse_current(double g_syn, double v_s_pre);

[[nodiscard]] NeuronDerivative neuron_rhs(const NeuronState& s, const NeuronParams& p, double i_syn,
                                          double i_app);

/// Total synaptic input per neuron.
[[nodiscard]] CurrentVector synaptic_input(const NetworkState& states, std::span<const SynapseSpec> synapses);

[[nodiscard]] NetworkDerivative network_rhs(const NetworkState& states, const NetworkSpec& spec,
                                            const CurrentVector& i_app);

[[nodiscard]] NetworkSpec build_network(Configuration configuration, const NeuronParams& params,
                                        double g_hco, double g_cross);

/// Rewrites the inter-HCO synapse signs for a new configuration in place.
void switch_configuration(NetworkSpec& spec, Configuration configuration);

/// Piecewise-constant applied currents: nominal everywhere plus rectangular
/// pulses on individual neurons.
class AppliedCurrentSchedule {
public:
    struct Pulse {
        NeuronId target;
        double start;
        double duration;
        double amplitude;
    };

    explicit AppliedCurrentSchedule(double i_nominal = -1.0) : i_nominal_(i_nominal) {}

    void add_pulse(const Pulse& pulse);
    /// Active pulses cover [start, start + duration).
    [[nodiscard]] CurrentVector at(double t) const;
    [[nodiscard]] double nominal() const noexcept { return i_nominal_; }
    [[nodiscard]] const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
    /// Drops pulses that ended before t.
    void prune(double t);

private:
    double i_nominal_;
    std::vector<Pulse> pulses_;
};

/// Adds the rhythm-starting pulse to the schedule.
[[nodiscard]] AppliedCurrentSchedule kick_start(AppliedCurrentSchedule schedule, NeuronId neuron,
                                                double pulse_amplitude, double pulse_duration,
                                                double t_start = 0.0);

struct Burst {
    double onset;
    double offset;

    [[nodiscard]] double size() const { return offset - onset; }
};

/// Maximal intervals with v > v_th in a sampled voltage trace. Crossing times
/// are linearly interpolated between samples; a burst still open at the end
/// of the trace is dropped. The simulator localizes crossings more precisely
/// while stepping; this is the offline variant.
[[nodiscard]] std::vector<Burst> detect_bursts(std::span<const double> t, std::span<const double> v,
                                               double v_th);

/// Bursts assembled from onset/offset event times (already localized).
[[nodiscard]] std::vector<Burst> pair_bursts(std::span<const double> onsets, std::span<const double> offsets);

struct BurstStats {
    std::size_t count = 0;
    double mean_size = 0.0;
    double mean_period = 0.0;
};

[[nodiscard]] BurstStats burst_stats(std::span<const Burst> bursts);

}  // namespace neuropend
