#pragma once

// Photodetector emulation on the pendulum angle and event-log analytics.

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "neuropend/numerics.hpp"

namespace neuropend {

enum class EventKind {
    SensorZero,
    SensorAmplitude,
    SensorPhase,
    BurstOnset,
    BurstOffset,
    ControlPulse,
    AdaptiveCorrection,
};

[[nodiscard]] std::string_view event_kind_name(EventKind k);
[[nodiscard]] EventKind parse_event_kind(std::string_view name);

struct Event {
    EventKind kind;
    double time;
    double payload = 0.0;  // q at the crossing, neuron index, pulse target or correction

    friend bool operator==(const Event&, const Event&) = default;
};

/// Append-only, time-ordered record of everything that happened in a run.
class EventLog {
public:
    /// Throws std::logic_error if `e` is older than the last entry.
    void append(const Event& e);
    [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }
    [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }
    [[nodiscard]] std::vector<double> times(EventKind kind) const;
    [[nodiscard]] std::vector<Event> filter(EventKind kind) const;

private:
    std::vector<Event> events_;
};

struct SensorDetector {
    EventKind kind;
    CrossingSpec crossing;
};

/// The three angle detectors: zero, amplitude (|q| = A_ref) and phase (q = q_p).
struct SensorBank {
    std::vector<SensorDetector> detectors;

    [[nodiscard]] static SensorBank standard(std::size_t q_index, double a_ref, double q_p,
                                             bool zero = true, bool amplitude = true, bool phase = true,
                                             Direction phase_direction = Direction::Rising);
};

/// One event per detector crossing inside the step, ordered by time.
template <std::size_t N, typename Rhs>
std::vector<Event> scan_events(const StateVector<N>& before, const StateVector<N>& after, double t0, double dt,
                               const SensorBank& sensors, Rhs&& rhs, const StepperConfig& cfg) {
    std::vector<Event> out;
    for (const auto& d : sensors.detectors) {
        if (auto c = locate_crossing<N>(before, after, t0, dt, d.crossing, rhs, cfg)) {
            // Re-integrate to the crossing time so the payload is the observed angle.
            const auto at = rk4_step<N>(before, rhs, c->time - t0);
            out.push_back({d.kind, c->time, wrap_angle(at[d.crossing.index])});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    return out;
}

struct ZeroCrossing {
    double time;
    bool rising;
};

/// ω from zero crossings inside [t_begin, t_end]; needs ≥ 3 crossings in one
/// direction.
[[nodiscard]] std::optional<double> estimate_frequency(std::span<const ZeroCrossing> crossings, double t_begin,
                                                       double t_end);

/// Mean over half-periods of max |q| between consecutive zero crossings.
[[nodiscard]] std::optional<double> estimate_amplitude(std::span<const double> t, std::span<const double> q,
                                                       std::span<const double> zero_times, double t_begin,
                                                       double t_end);

/// Zero crossings of a sampled angle trace (linear interpolation, wrapped angle).
[[nodiscard]] std::vector<ZeroCrossing> sampled_zero_crossings(std::span<const double> t, std::span<const double> q);

}  // namespace neuropend
