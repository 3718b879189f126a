#include "neuropend/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neuropend {

void ClosedLoopRhs::operator()(const FullState& y, FullState& dy) const {
    using namespace layout;
    NetworkState states;
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        states[k] = {y[kV + k], y[kVs + k], y[kVus + k]};
    }
    const auto i_syn = synaptic_input(states, network->synapses);
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        const auto d = neuron_rhs(states[k], network->params, i_syn[k], i_app[k]);
        dy[kV + k] = d.dv;
        dy[kVs + k] = d.dv_s;
        dy[kVus + k] = d.dv_us;
    }
    const auto p = pendulum_rhs({y[kQ], y[kQDot]}, alpha, torque);
    dy[kQ] = p.dq;
    dy[kQDot] = p.dq_dot;
    dy[kDissipated] = alpha * y[kQDot] * y[kQDot];
}

void SimulationSetup::validate() const {
    network.validate();
    plant.validate();
    stepper.validate();
    phase.validate();
    if (adaptive.enabled) adaptive.validate();
    if (decimation < 1) throw std::invalid_argument("scenario.decimation must be >= 1");
    for (const auto& n : neurons0) {
        if (!std::isfinite(n.v) || !std::isfinite(n.v_s) || !std::isfinite(n.v_us)) {
            throw std::invalid_argument("init: neuron state must be finite");
        }
    }
    if (!std::isfinite(pendulum0.q) || !std::isfinite(pendulum0.q_dot)) {
        throw std::invalid_argument("init: pendulum state must be finite");
    }
}

Simulator::Simulator(SimulationSetup setup) : setup_(std::move(setup)), schedule_(setup_.network.params.i_nominal) {
    setup_.validate();
    using namespace layout;
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        y_[kV + k] = setup_.neurons0[k].v;
        y_[kVs + k] = setup_.neurons0[k].v_s;
        y_[kVus + k] = setup_.neurons0[k].v_us;
        thresholds_.push_back({kV + k, setup_.plant.v_th, Direction::Both, ObservableTransform::Identity});
    }
    y_[kQ] = setup_.pendulum0.q;
    y_[kQDot] = setup_.pendulum0.q_dot;
    y_[kDissipated] = 0.0;

    if (setup_.kick) {
        schedule_ = kick_start(schedule_, setup_.kick->neuron, setup_.kick->amplitude, setup_.kick->duration,
                               setup_.kick->start);
    }
    if (setup_.adaptive.enabled) {
        adaptive_.emplace(setup_.adaptive, setup_.network.params.g_us_plus, setup_.network.params.g_s_minus);
        setup_.network.params.g_us_plus = adaptive_->g_us_plus();
        setup_.network.params.g_s_minus = adaptive_->g_s_minus();
    }
    if (setup_.sensors) {
        sensors_ = SensorBank::standard(kQ, setup_.adaptive.a_ref, setup_.phase.q_p, true, setup_.adaptive.enabled,
                                        setup_.phase.enabled, setup_.phase_direction);
    }
    std::stable_sort(setup_.changes.begin(), setup_.changes.end(),
                     [](const ParameterChange& a, const ParameterChange& b) { return a.time < b.time; });
    apply_changes(0.0);
}

double Simulator::time() const noexcept { return static_cast<double>(steps_) * setup_.stepper.dt; }

PendulumState Simulator::pendulum() const noexcept { return {y_[layout::kQ], y_[layout::kQDot]}; }

NeuronState Simulator::neuron(NeuronId id) const noexcept {
    const auto k = index_of(id);
    return {y_[layout::kV + k], y_[layout::kVs + k], y_[layout::kVus + k]};
}

double Simulator::current_torque() const {
    return motor_torque(y_[layout::kV + index_of(NeuronId::A1)], y_[layout::kV + index_of(NeuronId::A2)],
                        setup_.plant);
}

void Simulator::add_current_pulse(const AppliedCurrentSchedule::Pulse& pulse) { schedule_.add_pulse(pulse); }

void Simulator::record_sample(double torque) {
    using namespace layout;
    trace_.t.push_back(time());
    trace_.q.push_back(y_[kQ]);
    trace_.q_dot.push_back(y_[kQDot]);
    trace_.torque.push_back(torque);
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        trace_.v[k].push_back(y_[kV + k]);
        trace_.v_s[k].push_back(y_[kVs + k]);
    }
}

void Simulator::apply_changes(double t) {
    while (next_change_ < setup_.changes.size() && setup_.changes[next_change_].time <= t) {
        const auto& c = setup_.changes[next_change_];
        if (c.g_s_minus) setup_.network.params.g_s_minus = *c.g_s_minus;
        if (c.g_us_plus) setup_.network.params.g_us_plus = *c.g_us_plus;
        if (c.configuration) {
            switch_configuration(setup_.network, *c.configuration);
            setup_.plant.motor_signs = motor_signs_for(*c.configuration);
        }
        ++next_change_;
    }
}

void Simulator::handle_sensor_event(const Event& e) {
    if (e.kind == EventKind::SensorPhase && setup_.phase.enabled) {
        const auto target = pulses_.on_phase_event(e.time, setup_.phase);
        log_.append({EventKind::ControlPulse, e.time, static_cast<double>(target)});
    }
    if (!adaptive_) return;
    std::vector<GainUpdate> updates;
    if (e.kind == EventKind::SensorZero) {
        updates = adaptive_->on_zero_crossing(e.time);
    } else if (e.kind == EventKind::SensorAmplitude) {
        if (auto u = adaptive_->on_amplitude_event(e.time)) updates.push_back(*u);
    }
    for (const auto& u : updates) {
        gain_updates_.push_back(u);
        log_.append({EventKind::AdaptiveCorrection, e.time, u.correction});
    }
    setup_.network.params.g_us_plus = adaptive_->g_us_plus();
    setup_.network.params.g_s_minus = adaptive_->g_s_minus();
}

void Simulator::step() {
    using namespace layout;
    const double t0 = time();
    const double dt = setup_.stepper.dt;

    CurrentVector i_app = schedule_.at(t0);
    const auto extra = pulses_.offsets(t0);
    for (std::size_t k = 0; k < kNeuronCount; ++k) i_app[k] += extra[k];
    const double torque = current_torque();

    if (setup_.record_trace && steps_ % setup_.decimation == 0) {
        record_sample(torque);
    }

    const ClosedLoopRhs rhs{&setup_.network, i_app, torque, setup_.plant.alpha};
    const FullState next = rk4_step_checked<kSize>(y_, rhs, dt, t0);

    std::vector<Event> step_events;
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        if (auto c = locate_crossing<kSize>(y_, next, t0, dt, thresholds_[k], rhs, setup_.stepper)) {
            step_events.push_back(
                {c->rising ? EventKind::BurstOnset : EventKind::BurstOffset, c->time, static_cast<double>(k)});
        }
    }
    if (!sensors_.detectors.empty()) {
        auto sensed = scan_events<kSize>(y_, next, t0, dt, sensors_, rhs, setup_.stepper);
        step_events.insert(step_events.end(), sensed.begin(), sensed.end());
    }
    std::stable_sort(step_events.begin(), step_events.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });

    work_ += torque * (next[kQ] - y_[kQ]);
    y_ = next;
    ++steps_;

    for (const auto& e : step_events) {
        log_.append(e);
        if (e.kind == EventKind::BurstOnset || e.kind == EventKind::BurstOffset) {
            const auto k = static_cast<std::size_t>(e.payload);
            (e.kind == EventKind::BurstOnset ? onsets_ : offsets_)[k].push_back(e.time);
            if (e.kind == EventKind::BurstOnset && k == index_of(NeuronId::A1)) {
                checkpoints_.push_back({e.time, work_, y_[kDissipated], mechanical_energy(pendulum())});
            }
        } else {
            handle_sensor_event(e);
        }
    }
    apply_changes(time());
    if (steps_ % 4096 == 0) {
        schedule_.prune(time());
        pulses_.prune(time());
    }
}

void Simulator::run_until(double t) {
    const double dt = setup_.stepper.dt;
    const auto target = static_cast<long long>(std::floor(t / dt + 1e-9));
    while (steps_ < target) step();
}

std::size_t Simulator::run_onsets(NeuronId neuron, std::size_t count, double t_max) {
    const auto k = index_of(neuron);
    const std::size_t start = onsets_[k].size();
    while (onsets_[k].size() - start < count && time() < t_max) step();
    return onsets_[k].size() - start;
}

void Simulator::finish_trace() {
    if (trace_finished_ || !setup_.record_trace) return;
    trace_finished_ = true;
    if (steps_ % setup_.decimation == 0) {
        record_sample(current_torque());
    }
}

}  // namespace neuropend
