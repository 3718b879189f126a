#include "neuropend/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "neuropend/numerics.hpp"

namespace neuropend {

void PlantParams::validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("plant.alpha must be >= 0");
    if (!(i_mag >= 0.0)) throw std::invalid_argument("plant.i_mag must be >= 0");
    for (int s : motor_signs) {
        if (s != 1 && s != -1) throw std::invalid_argument("plant.motor_signs entries must be +1 or -1");
    }
}

std::array<int, 2> motor_signs_for(Configuration c) {
    return c == Configuration::InPhase ? std::array<int, 2>{+1, +1} : std::array<int, 2>{+1, -1};
}

PendulumDerivative pendulum_rhs(const PendulumState& s, double alpha, double torque) {
    return {s.q_dot, torque - alpha * s.q_dot - std::sin(s.q)};
}

double mechanical_energy(const PendulumState& s) { return 0.5 * s.q_dot * s.q_dot + (1.0 - std::cos(s.q)); }

double motor_torque(double v_a1, double v_a2, const PlantParams& params) {
    double torque = 0.0;
    if (v_a1 > params.v_th) torque += params.i_mag * params.motor_signs[0];
    if (v_a2 > params.v_th) torque += params.i_mag * params.motor_signs[1];
    return torque;
}

std::string_view steady_state_name(SteadyState s) {
    switch (s) {
        case SteadyState::LowEnergy: return "LOW_ENERGY";
        case SteadyState::HighEnergy: return "HIGH_ENERGY";
        case SteadyState::NonPeriodic: return "NONPERIODIC";
        case SteadyState::Indeterminate: return "INDETERMINATE";
    }
    return "INDETERMINATE";
}

SteadyState parse_steady_state(std::string_view name) {
    for (auto s : {SteadyState::LowEnergy, SteadyState::HighEnergy, SteadyState::NonPeriodic,
                   SteadyState::Indeterminate}) {
        if (steady_state_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown steady state '" + std::string(name) + "'");
}

namespace {

double interpolate(std::span<const double> t, std::span<const double> y, double at) {
    auto it = std::lower_bound(t.begin(), t.end(), at);
    if (it == t.begin()) return y.front();
    if (it == t.end()) return y.back();
    const auto i = static_cast<std::size_t>(it - t.begin());
    const double f = (at - t[i - 1]) / (t[i] - t[i - 1]);
    return y[i - 1] + f * (y[i] - y[i - 1]);
}

}  // namespace

Classification classify_steady_state(std::span<const double> t, std::span<const double> q,
                                     std::span<const double> events, std::size_t min_events) {
    if (t.size() != q.size()) throw std::invalid_argument("classify_steady_state: length mismatch");
    Classification c;
    std::vector<double> ev;
    for (double e : events) {
        if (!t.empty() && e >= t.front() && e <= t.back()) ev.push_back(e);
    }
    c.events = ev.size();
    if (ev.size() < std::max<std::size_t>(min_events, 2)) {
        return c;
    }
    constexpr double kTwoPi = 2.0 * M_PI;
    bool all_rotate = true;
    bool all_small = true;
    double rotations = 0.0;
    for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
        const double dq = interpolate(t, q, ev[k + 1]) - interpolate(t, q, ev[k]);
        rotations += dq / kTwoPi;
        if (std::abs(dq) < kTwoPi) all_rotate = false;

        auto lo = std::lower_bound(t.begin(), t.end(), ev[k]);
        auto hi = std::lower_bound(t.begin(), t.end(), ev[k + 1]);
        const auto i0 = static_cast<std::size_t>(lo - t.begin());
        const auto i1 = static_cast<std::size_t>(hi - t.begin());
        if (i1 <= i0) continue;
        double mean = 0.0;
        for (std::size_t i = i0; i < i1; ++i) mean += q[i];
        mean /= static_cast<double>(i1 - i0);
        const double centre = kTwoPi * std::round(mean / kTwoPi);
        for (std::size_t i = i0; i < i1; ++i) {
            c.max_amplitude = std::max(c.max_amplitude, std::abs(q[i] - centre));
        }
    }
    all_small = c.max_amplitude < M_PI;
    c.mean_rotations_per_event = rotations / static_cast<double>(ev.size() - 1);
    if (all_rotate) {
        c.state = SteadyState::HighEnergy;
    } else if (all_small) {
        c.state = SteadyState::LowEnergy;
    } else {
        c.state = SteadyState::NonPeriodic;
    }
    return c;
}

std::vector<double> burst_energy(std::span<const double> t, std::span<const double> q_dot,
                                 std::span<const double> torque, std::span<const double> onsets) {
    if (t.size() != q_dot.size() || t.size() != torque.size()) {
        throw std::invalid_argument("burst_energy: length mismatch");
    }
    std::vector<double> energies;
    if (onsets.size() < 2 || t.size() < 2) return energies;
    // Cumulative trapezoid of q̇·I, then differences at the onsets.
    std::vector<double> cumulative(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        cumulative[i] = cumulative[i - 1] +
                        0.5 * (t[i] - t[i - 1]) * (q_dot[i] * torque[i] + q_dot[i - 1] * torque[i - 1]);
    }
    auto at = [&](double time) { return interpolate(t, cumulative, time); };
    for (std::size_t k = 0; k + 1 < onsets.size(); ++k) {
        energies.push_back(at(onsets[k + 1]) - at(onsets[k]));
    }
    return energies;
}

}  // namespace neuropend
