#pragma once

// Phase control by inhibitory current pulses and event-triggered adaptation
// of the two tuning gains.

#include <optional>
#include <utility>
#include <vector>

#include "neuropend/neuron_net.hpp"

namespace neuropend {

struct PhaseControlConfig {
    bool enabled = false;
    double q_p = -1.0;
    double P = 2.0;  // magnitude; applied as −P
    double w = 0.2;

    void validate() const;
};

enum class PulseTarget { APair = 0, BPair = 1 };

/// Pending control pulses and the A/B alternation state.
class PulseScheduler {
public:
    struct Pulse {
        PulseTarget target;
        double start;
        double duration;
        double amplitude;  // signed, added to i_app
    };

    /// Schedules −P on both neurons of the current target pair starting at
    /// `t`, then toggles the target. Returns the pair that received the pulse.
    PulseTarget on_phase_event(double t, const PhaseControlConfig& cfg);

    /// Current offsets added to the nominal applied currents at time t.
    [[nodiscard]] CurrentVector offsets(double t) const;
    [[nodiscard]] PulseTarget next_target() const noexcept { return next_; }
    [[nodiscard]] const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
    void prune(double t);

private:
    PulseTarget next_ = PulseTarget::APair;
    std::vector<Pulse> pulses_;
};

struct GainRange {
    double lo;
    double hi;

    [[nodiscard]] bool contains(double g) const { return g >= lo && g <= hi; }
};

struct AdaptiveConfig {
    bool enabled = false;
    double omega_ref = 1.0;
    double a_ref = 0.5;
    double k_omega = 0.05;
    double k_a = 0.05;
    double p_a_fixed = 0.02;
    GainRange g_us_range{1.2, 3.5};
    GainRange g_s_range{1.2, 3.0};
    double start_time = 0.0;  // corrections are suppressed before this

    void validate() const;
};

/// Result of one clamped gain update.
struct ClampedUpdate {
    double gain;
    double correction;  // requested correction before clamping
    bool saturated;
};

struct FrequencyUpdate {
    ClampedUpdate update;
    double next_predicted;
};

/// Zero-crossing law: e = t − t_pred; g_us⁺ += k_ω·e (a late crossing means
/// the rhythm is too slow, and g_us⁺ speeds it up).
[[nodiscard]] FrequencyUpdate on_zero_crossing_adapt(double event_time, double predicted_time, double g_us_plus,
                                                     const AdaptiveConfig& cfg);

/// Amplitude law. Without an A_ref crossing before the next zero crossing,
/// g_s⁻ += p_A. Otherwise e = t_A − (t_zero + π/(2ω_ref)) and g_s⁻ += k_A·e:
/// a late crossing means the swing is too small, and g_s⁻ widens the bursts.
[[nodiscard]] ClampedUpdate on_amplitude_adapt(double zero_time, std::optional<double> amplitude_time,
                                               double g_s_minus, const AdaptiveConfig& cfg);

enum class AdaptedGain { GUsPlus, GSMinus };

struct GainUpdate {
    double time;
    AdaptedGain gain;
    double correction;
    double g_us_plus;
    double g_s_minus;
    bool saturated;
};

/// State machine driven by zero and amplitude detector events.
class AdaptiveController {
public:
    AdaptiveController(const AdaptiveConfig& cfg, double g_us_plus, double g_s_minus);

    /// Handles a zero crossing; may settle a pending amplitude miss first.
    std::vector<GainUpdate> on_zero_crossing(double t);
    std::optional<GainUpdate> on_amplitude_event(double t);

    [[nodiscard]] double g_us_plus() const noexcept { return g_us_; }
    [[nodiscard]] double g_s_minus() const noexcept { return g_s_; }
    [[nodiscard]] const AdaptiveConfig& config() const noexcept { return cfg_; }

private:
    AdaptiveConfig cfg_;
    double g_us_;
    double g_s_;
    std::optional<double> predicted_zero_;
    std::optional<double> pending_zero_;  // last zero crossing still waiting for its amplitude event
};

}  // namespace neuropend
