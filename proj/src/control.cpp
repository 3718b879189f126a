#include "neuropend/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neuropend {

void PhaseControlConfig::validate() const {
    if (!(w > 0.0)) throw std::invalid_argument("phase.w must be > 0");
    if (!(P >= 0.0)) throw std::invalid_argument("phase.P must be >= 0");
}

PulseTarget PulseScheduler::on_phase_event(double t, const PhaseControlConfig& cfg) {
    const PulseTarget target = next_;
    next_ = next_ == PulseTarget::APair ? PulseTarget::BPair : PulseTarget::APair;
    if (cfg.P == 0.0) {
        return target;
    }
    // An active pulse on the same pair is extended rather than stacked.
    for (auto& p : pulses_) {
        if (p.target == target && t >= p.start && t < p.start + p.duration) {
            p.duration = t + cfg.w - p.start;
            return target;
        }
    }
    pulses_.push_back({target, t, cfg.w, -cfg.P});
    return target;
}

CurrentVector PulseScheduler::offsets(double t) const {
    CurrentVector out{};
    for (const auto& p : pulses_) {
        if (t >= p.start && t < p.start + p.duration) {
            const std::size_t first = p.target == PulseTarget::APair ? index_of(NeuronId::A1) : index_of(NeuronId::B1);
            out[first] += p.amplitude;
            out[first + 2] += p.amplitude;  // A1→A2, B1→B2
        }
    }
    return out;
}

void PulseScheduler::prune(double t) {
    std::erase_if(pulses_, [t](const Pulse& p) { return p.start + p.duration < t; });
}

void AdaptiveConfig::validate() const {
    if (!(omega_ref > 0.0)) throw std::invalid_argument("adaptive.omega_ref must be > 0");
    if (!(a_ref > 0.0 && a_ref < M_PI)) throw std::invalid_argument("adaptive.a_ref must lie in (0, pi)");
    if (!(g_us_range.lo < g_us_range.hi)) throw std::invalid_argument("adaptive.g_us range is empty");
    if (!(g_s_range.lo < g_s_range.hi)) throw std::invalid_argument("adaptive.g_s range is empty");
    if (k_omega < 0.0 || k_a < 0.0 || p_a_fixed < 0.0) {
        throw std::invalid_argument("adaptive gains must be >= 0");
    }
}

namespace {

ClampedUpdate clamped(double gain, double correction, const GainRange& range) {
    const double raw = gain + correction;
    const double out = std::clamp(raw, range.lo, range.hi);
    return {out, correction, out != raw};
}

}  // namespace

FrequencyUpdate on_zero_crossing_adapt(double event_time, double predicted_time, double g_us_plus,
                                       const AdaptiveConfig& cfg) {
    const double error = event_time - predicted_time;
    return {clamped(g_us_plus, cfg.k_omega * error, cfg.g_us_range), event_time + M_PI / cfg.omega_ref};
}

ClampedUpdate on_amplitude_adapt(double zero_time, std::optional<double> amplitude_time, double g_s_minus,
                                 const AdaptiveConfig& cfg) {
    if (!amplitude_time) {
        return clamped(g_s_minus, cfg.p_a_fixed, cfg.g_s_range);
    }
    const double error = *amplitude_time - (zero_time + M_PI / (2.0 * cfg.omega_ref));
    return clamped(g_s_minus, cfg.k_a * error, cfg.g_s_range);
}

AdaptiveController::AdaptiveController(const AdaptiveConfig& cfg, double g_us_plus, double g_s_minus)
    : cfg_(cfg), g_us_(g_us_plus), g_s_(g_s_minus) {
    cfg_.validate();
    g_us_ = std::clamp(g_us_, cfg_.g_us_range.lo, cfg_.g_us_range.hi);
    g_s_ = std::clamp(g_s_, cfg_.g_s_range.lo, cfg_.g_s_range.hi);
}

std::vector<GainUpdate> AdaptiveController::on_zero_crossing(double t) {
    std::vector<GainUpdate> out;
    if (t < cfg_.start_time) {
        return out;
    }
    if (pending_zero_) {
        const auto u = on_amplitude_adapt(*pending_zero_, std::nullopt, g_s_, cfg_);
        g_s_ = u.gain;
        out.push_back({t, AdaptedGain::GSMinus, u.correction, g_us_, g_s_, u.saturated});
    }
    if (predicted_zero_) {
        const auto f = on_zero_crossing_adapt(t, *predicted_zero_, g_us_, cfg_);
        g_us_ = f.update.gain;
        out.push_back({t, AdaptedGain::GUsPlus, f.update.correction, g_us_, g_s_, f.update.saturated});
    }
    predicted_zero_ = t + M_PI / cfg_.omega_ref;
    pending_zero_ = t;
    return out;
}

std::optional<GainUpdate> AdaptiveController::on_amplitude_event(double t) {
    if (!pending_zero_ || t < cfg_.start_time) {
        return std::nullopt;
    }
    const auto u = on_amplitude_adapt(*pending_zero_, t, g_s_, cfg_);
    g_s_ = u.gain;
    pending_zero_.reset();
    return GainUpdate{t, AdaptedGain::GSMinus, u.correction, g_us_, g_s_, u.saturated};
}

}  // namespace neuropend
