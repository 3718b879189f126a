#include "neuropend/sensing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace neuropend {

std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::SensorZero: return "sensor-zero";
        case EventKind::SensorAmplitude: return "sensor-amplitude";
        case EventKind::SensorPhase: return "sensor-phase";
        case EventKind::BurstOnset: return "burst-onset";
        case EventKind::BurstOffset: return "burst-offset";
        case EventKind::ControlPulse: return "control-pulse";
        case EventKind::AdaptiveCorrection: return "adaptive-correction";
    }
    return "?";
}

EventKind parse_event_kind(std::string_view name) {
    for (auto k : {EventKind::SensorZero, EventKind::SensorAmplitude, EventKind::SensorPhase, EventKind::BurstOnset,
                   EventKind::BurstOffset, EventKind::ControlPulse, EventKind::AdaptiveCorrection}) {
        if (event_kind_name(k) == name) return k;
    }
    throw std::invalid_argument("unknown event kind '" + std::string(name) + "'");
}

void EventLog::append(const Event& e) {
    if (!events_.empty() && e.time < events_.back().time) {
        throw std::logic_error("event log must be appended in time order");
    }
    events_.push_back(e);
}

std::vector<double> EventLog::times(EventKind kind) const {
    std::vector<double> out;
    for (const auto& e : events_) {
        if (e.kind == kind) out.push_back(e.time);
    }
    return out;
}

std::vector<Event> EventLog::filter(EventKind kind) const {
    std::vector<Event> out;
    std::copy_if(events_.begin(), events_.end(), std::back_inserter(out),
                 [kind](const Event& e) { return e.kind == kind; });
    return out;
}

SensorBank SensorBank::standard(std::size_t q_index, double a_ref, double q_p, bool zero, bool amplitude, bool phase,
                                Direction phase_direction) {
    SensorBank bank;
    if (zero) {
        bank.detectors.push_back(
            {EventKind::SensorZero, {q_index, 0.0, Direction::Both, ObservableTransform::WrappedAngle}});
    }
    if (amplitude) {
        bank.detectors.push_back(
            {EventKind::SensorAmplitude, {q_index, a_ref, Direction::Rising, ObservableTransform::AbsWrappedAngle}});
    }
    if (phase) {
        bank.detectors.push_back(
            {EventKind::SensorPhase, {q_index, q_p, phase_direction, ObservableTransform::WrappedAngle}});
    }
    return bank;
}

std::optional<double> estimate_frequency(std::span<const ZeroCrossing> crossings, double t_begin, double t_end) {
    std::vector<double> rising;
    std::vector<double> falling;
    for (const auto& c : crossings) {
        if (c.time < t_begin || c.time > t_end) continue;
        (c.rising ? rising : falling).push_back(c.time);
    }
    // Average the full-period estimate over each direction that has enough events.
    double omega_sum = 0.0;
    int used = 0;
    for (const auto* side : {&rising, &falling}) {
        if (side->size() >= 3) {
            const double period = (side->back() - side->front()) / static_cast<double>(side->size() - 1);
            omega_sum += 2.0 * M_PI / period;
            ++used;
        }
    }
    if (used == 0) return std::nullopt;
    return omega_sum / used;
}

std::optional<double> estimate_amplitude(std::span<const double> t, std::span<const double> q,
                                         std::span<const double> zero_times, double t_begin, double t_end) {
    if (t.size() != q.size()) throw std::invalid_argument("estimate_amplitude: length mismatch");
    std::vector<double> zeros;
    for (double z : zero_times) {
        if (z >= t_begin && z <= t_end) zeros.push_back(z);
    }
    if (zeros.size() < 2) return std::nullopt;
    double total = 0.0;
    int halves = 0;
    for (std::size_t k = 0; k + 1 < zeros.size(); ++k) {
        auto lo = std::lower_bound(t.begin(), t.end(), zeros[k]);
        auto hi = std::upper_bound(t.begin(), t.end(), zeros[k + 1]);
        double peak = 0.0;
        for (auto it = lo; it != hi; ++it) {
            peak = std::max(peak, std::abs(wrap_angle(q[static_cast<std::size_t>(it - t.begin())])));
        }
        if (lo != hi) {
            total += peak;
            ++halves;
        }
    }
    if (halves == 0) return std::nullopt;
    return total / halves;
}

std::vector<ZeroCrossing> sampled_zero_crossings(std::span<const double> t, std::span<const double> q) {
    std::vector<ZeroCrossing> out;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = wrap_angle(q[i - 1]);
        const double b = a + (q[i] - q[i - 1]);
        if (std::abs(a) > M_PI / 2) continue;
        if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
            const double f = a / (a - b);
            out.push_back({t[i - 1] + f * (t[i] - t[i - 1]), b > a});
        }
    }
    return out;
}

}  // namespace neuropend
