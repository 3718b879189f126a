#pragma once

// Damped pendulum driven by two threshold-gated motors.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "neuropend/neuron_net.hpp"

namespace neuropend {

struct PlantParams {
    double alpha = 1.4;
    double i_mag = 1.1;
    double v_th = 0.0;
    std::array<int, 2> motor_signs{+1, -1};

    void validate() const;
};

/// Motor signs implied by a controller configuration.
[[nodiscard]] std::array<int, 2> motor_signs_for(Configuration c);

struct PendulumState {
    double q = 0.0;  // unwrapped
    double q_dot = 0.0;
};

struct PendulumDerivative {
    double dq = 0.0;
    double dq_dot = 0.0;
};

[[nodiscard]] PendulumDerivative pendulum_rhs(const PendulumState& s, double alpha, double torque);

/// ½q̇² + (1 − cos q).
[[nodiscard]] double mechanical_energy(const PendulumState& s);

/// Motor k is on while the A neuron of HCO k is above threshold.
[[nodiscard]] double motor_torque(double v_a1, double v_a2, const PlantParams& params);

enum class SteadyState { LowEnergy, HighEnergy, NonPeriodic, Indeterminate };

[[nodiscard]] std::string_view steady_state_name(SteadyState s);
[[nodiscard]] SteadyState parse_steady_state(std::string_view name);

struct Classification {
    SteadyState state = SteadyState::Indeterminate;
    std::size_t events = 0;              // actuation events used
    double mean_rotations_per_event = 0.0;  // signed Δq / 2π averaged over segments
    double max_amplitude = 0.0;          // max |q| re-centred per segment
};

/// Classifies a trace window segmented by actuation-event times. Segments are
/// [events[i], events[i+1]); fewer than `min_events` events is Indeterminate.
[[nodiscard]] Classification classify_steady_state(std::span<const double> t, std::span<const double> q,
                                                   std::span<const double> events, std::size_t min_events = 10);

/// Energy delivered by the motors between consecutive onsets, by trapezoidal
/// quadrature of q̇·I over the sampled trace.
[[nodiscard]] std::vector<double> burst_energy(std::span<const double> t, std::span<const double> q_dot,
                                               std::span<const double> torque, std::span<const double> onsets);

}  // namespace neuropend
