#pragma once

// Closed-loop stepping of the neuron network and the pendulum.
//
// Inputs (torque, applied currents, gains) are held constant over each RK4
// step and re-evaluated at step boundaries, so an event inside a step acts
// from the following step onwards.

#include <optional>
#include <string>
#include <vector>

#include "neuropend/control.hpp"
#include "neuropend/neuron_net.hpp"
#include "neuropend/numerics.hpp"
#include "neuropend/plant.hpp"
#include "neuropend/sensing.hpp"

namespace neuropend {

namespace layout {
inline constexpr std::size_t kV = 0;
inline constexpr std::size_t kVs = 4;
inline constexpr std::size_t kVus = 8;
inline constexpr std::size_t kQ = 12;
inline constexpr std::size_t kQDot = 13;
inline constexpr std::size_t kDissipated = 14;  // ∫ α q̇² dt
inline constexpr std::size_t kSize = 15;
}  // namespace layout

using FullState = StateVector<layout::kSize>;

struct Kick {
    NeuronId neuron = NeuronId::A1;
    double amplitude = 2.0;
    double duration = 0.3;
    double start = 0.0;
};

/// A parameter change applied at the first step boundary at or after `time`.
struct ParameterChange {
    double time;
    std::optional<double> g_s_minus;
    std::optional<double> g_us_plus;
    std::optional<Configuration> configuration;
};

struct SimulationSetup {
    NetworkSpec network = build_network(Configuration::AntiPhase, NeuronParams{}, 0.5, 0.3);
    PlantParams plant;
    StepperConfig stepper;
    NetworkState neurons0{};
    PendulumState pendulum0;
    std::optional<Kick> kick = Kick{};
    PhaseControlConfig phase;
    Direction phase_direction = Direction::Rising;
    AdaptiveConfig adaptive;
    bool sensors = true;
    std::vector<ParameterChange> changes;
    int decimation = 10;
    bool record_trace = true;

    void validate() const;
};

/// Uniformly decimated samples. `torque` is the value held during the step
/// that starts at each sample.
struct TraceSamples {
    std::vector<double> t, q, q_dot, torque;
    std::array<std::vector<double>, kNeuronCount> v, v_s;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

/// Energy accounting snapshot taken at the step boundary following an onset
/// of the reference neuron A1.
struct EnergyCheckpoint {
    double onset_time;
    double work;         // ∫ q̇ I dt so far
    double dissipated;   // ∫ α q̇² dt so far
    double mechanical;   // ½q̇² + 1 − cos q
};

class Simulator {
public:
    explicit Simulator(SimulationSetup setup);

    /// Advances one step of size dt.
    void step();
    /// Steps until the clock reaches `t` (never past it by more than dt).
    void run_until(double t);
    /// Steps until `count` more onsets of `neuron` were seen or `t_max` is hit.
    /// Returns the number seen.
    std::size_t run_onsets(NeuronId neuron, std::size_t count, double t_max);

    /// Adds a pulse to the applied current of one neuron (used by the PRC tool).
    void add_current_pulse(const AppliedCurrentSchedule::Pulse& pulse);

    [[nodiscard]] double time() const noexcept;
    [[nodiscard]] long long steps() const noexcept { return steps_; }
    [[nodiscard]] const FullState& state() const noexcept { return y_; }
    [[nodiscard]] PendulumState pendulum() const noexcept;
    [[nodiscard]] NeuronState neuron(NeuronId id) const noexcept;
    [[nodiscard]] const SimulationSetup& setup() const noexcept { return setup_; }
    [[nodiscard]] const EventLog& events() const noexcept { return log_; }
    [[nodiscard]] const TraceSamples& trace() const noexcept { return trace_; }
    [[nodiscard]] const std::vector<GainUpdate>& gain_updates() const noexcept { return gain_updates_; }
    [[nodiscard]] const std::vector<EnergyCheckpoint>& checkpoints() const noexcept { return checkpoints_; }
    [[nodiscard]] const std::array<std::vector<double>, kNeuronCount>& onsets() const noexcept { return onsets_; }
    [[nodiscard]] const std::array<std::vector<double>, kNeuronCount>& offsets() const noexcept { return offsets_; }
    [[nodiscard]] double work() const noexcept { return work_; }
    [[nodiscard]] double current_torque() const;
    [[nodiscard]] const NetworkSpec& network() const noexcept { return setup_.network; }

    /// Appends the final sample so the trace covers the whole run.
    void finish_trace();

private:
    void record_sample(double torque);
    void apply_changes(double t);
    void handle_sensor_event(const Event& e);

    SimulationSetup setup_;
    FullState y_{};
    long long steps_ = 0;
    double work_ = 0.0;
    AppliedCurrentSchedule schedule_;
    PulseScheduler pulses_;
    std::optional<AdaptiveController> adaptive_;
    SensorBank sensors_;
    std::vector<CrossingSpec> thresholds_;
    EventLog log_;
    TraceSamples trace_;
    std::vector<GainUpdate> gain_updates_;
    std::vector<EnergyCheckpoint> checkpoints_;
    std::array<std::vector<double>, kNeuronCount> onsets_, offsets_;
    std::size_t next_change_ = 0;
    bool trace_finished_ = false;
};

/// Full-state right-hand side with inputs held.
struct ClosedLoopRhs {
    const NetworkSpec* network;
    CurrentVector i_app;
    double torque;
    double alpha;

    void operator()(const FullState& y, FullState& dy) const;
};

}  // namespace neuropend
