#include "neuropend/neuron_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neuropend {

std::string_view neuron_name(NeuronId id) {
    switch (id) {
        case NeuronId::A1: return "A1";
        case NeuronId::B1: return "B1";
        case NeuronId::A2: return "A2";
        case NeuronId::B2: return "B2";
    }
    return "?";
}

NeuronId parse_neuron(std::string_view name) {
    for (std::size_t i = 0; i < kNeuronCount; ++i) {
        auto id = static_cast<NeuronId>(i);
        if (neuron_name(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown neuron '" + std::string(name) + "'");
}

std::string_view configuration_name(Configuration c) {
    return c == Configuration::InPhase ? "in_phase" : "anti_phase";
}

Configuration parse_configuration(std::string_view name) {
    if (name == "in_phase" || name == "IN_PHASE") return Configuration::InPhase;
    if (name == "anti_phase" || name == "ANTI_PHASE") return Configuration::AntiPhase;
    throw std::invalid_argument("unknown configuration '" + std::string(name) + "'");
}

void NeuronParams::validate() const {
    if (!(tau_f > 0.0 && tau_f < tau_s && tau_s < tau_us)) {
        throw std::invalid_argument("neuron timescales must satisfy 0 < tau_f < tau_s < tau_us");
    }
    if (g_f_minus < 0.0 || g_s_plus < 0.0 || g_s_minus < 0.0 || g_us_plus < 0.0) {
        throw std::invalid_argument("neuron gains must be nonnegative");
    }
}

namespace {

bool same_hco(NeuronId a, NeuronId b) { return index_of(a) / 2 == index_of(b) / 2; }

}  // namespace

void NetworkSpec::validate() const {
    params.validate();
    for (const auto& s : synapses) {
        if (index_of(s.pre) >= kNeuronCount || index_of(s.post) >= kNeuronCount) {
            throw std::invalid_argument("synapse references an unknown neuron");
        }
        if (s.pre == s.post) {
            throw std::invalid_argument("synapse pre and post must differ");
        }
        if (same_hco(s.pre, s.post)) {
            if (s.g_syn > 0.0) {
                throw std::invalid_argument("intra-HCO synapses must be inhibitory");
            }
        } else if (configuration == Configuration::InPhase ? s.g_syn < 0.0 : s.g_syn > 0.0) {
            throw std::invalid_argument("inter-HCO synapse sign does not match configuration");
        }
    }
}

double synapse_current(double g_syn, double v_s_pre) {
    return g_syn / (1.0 + std::exp(-2.0 * (v_s_pre + 1.0)));
}

NeuronDerivative neuron_rhs(const NeuronState& s, const NeuronParams& p, double i_syn, double i_app) {
    const double fast = -s.v + p.g_f_minus * std::tanh(s.v) - p.g_s_plus * std::tanh(s.v_s) +
                        p.g_s_minus * std::tanh(s.v_s + 0.9) - p.g_us_plus * std::tanh(s.v_us + 0.9) +
                        i_syn + i_app;
    return {fast / p.tau_f, (s.v - s.v_s) / p.tau_s, (s.v - s.v_us) / p.tau_us};
}

CurrentVector synaptic_input(const NetworkState& states, std::span<const SynapseSpec> synapses) {
    CurrentVector i_syn{};
    for (const auto& s : synapses) {
        const auto pre = index_of(s.pre);
        const auto post = index_of(s.post);
        if (pre >= kNeuronCount || post >= kNeuronCount) {
            throw std::invalid_argument("synapse references an unknown neuron");
        }
        i_syn[post] += synapse_current(s.g_syn, states[pre].v_s);
    }
    return i_syn;
}

NetworkDerivative network_rhs(const NetworkState& states, const NetworkSpec& spec, const CurrentVector& i_app) {
    const auto i_syn = synaptic_input(states, spec.synapses);
    NetworkDerivative d{};
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        d[k] = neuron_rhs(states[k], spec.params, i_syn[k], i_app[k]);
    }
    return d;
}

NetworkSpec build_network(Configuration configuration, const NeuronParams& params, double g_hco, double g_cross) {
    if (!(g_hco > 0.0) || !(g_cross > 0.0)) {
        throw std::invalid_argument("g_hco and g_cross are magnitudes and must be > 0");
    }
    NetworkSpec spec;
    spec.params = params;
    spec.configuration = configuration;
    spec.g_hco = g_hco;
    spec.g_cross = g_cross;
    using enum NeuronId;
    spec.synapses = {
        {A1, B1, -g_hco}, {B1, A1, -g_hco}, {A2, B2, -g_hco}, {B2, A2, -g_hco},
        {A1, A2, 0.0},    {A2, A1, 0.0},    {B1, B2, 0.0},    {B2, B1, 0.0},
    };
    switch_configuration(spec, configuration);
    return spec;
}

void switch_configuration(NetworkSpec& spec, Configuration configuration) {
    spec.configuration = configuration;
    const double g = configuration == Configuration::InPhase ? spec.g_cross : -spec.g_cross;
    for (auto& s : spec.synapses) {
        if (!same_hco(s.pre, s.post)) {
            s.g_syn = g;
        }
    }
}

void AppliedCurrentSchedule::add_pulse(const Pulse& pulse) {
    if (!(pulse.duration > 0.0)) {
        throw std::invalid_argument("pulse duration must be > 0");
    }
    pulses_.push_back(pulse);
}

CurrentVector AppliedCurrentSchedule::at(double t) const {
    CurrentVector i;
    i.fill(i_nominal_);
    for (const auto& p : pulses_) {
        if (t >= p.start && t < p.start + p.duration) {
            i[index_of(p.target)] += p.amplitude;
        }
    }
    return i;
}

void AppliedCurrentSchedule::prune(double t) {
    std::erase_if(pulses_, [t](const Pulse& p) { return p.start + p.duration < t; });
}

AppliedCurrentSchedule kick_start(AppliedCurrentSchedule schedule, NeuronId neuron, double pulse_amplitude,
                                  double pulse_duration, double t_start) {
    if (!(pulse_duration > 0.0)) {
        throw std::invalid_argument("kick duration must be > 0");
    }
    if (pulse_amplitude != 0.0) {
        schedule.add_pulse({neuron, t_start, pulse_duration, pulse_amplitude});
    }
    return schedule;
}

std::vector<Burst> detect_bursts(std::span<const double> t, std::span<const double> v, double v_th) {
    if (t.size() != v.size()) {
        throw std::invalid_argument("detect_bursts: time and voltage lengths differ");
    }
    std::vector<Burst> bursts;
    if (t.empty()) {
        return bursts;
    }
    auto cross = [&](std::size_t i) {
        const double f = (v_th - v[i - 1]) / (v[i] - v[i - 1]);
        return t[i - 1] + f * (t[i] - t[i - 1]);
    };
    bool above = v[0] > v_th;
    double onset = 0.0;
    bool have_onset = false;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const bool now = v[i] > v_th;
        if (now && !above) {
            onset = cross(i);
            have_onset = true;
        } else if (!now && above && have_onset) {
            bursts.push_back({onset, cross(i)});
            have_onset = false;
        }
        above = now;
    }
    return bursts;
}

std::vector<Burst> pair_bursts(std::span<const double> onsets, std::span<const double> offsets) {
    std::vector<Burst> bursts;
    std::size_t j = 0;
    for (double on : onsets) {
        while (j < offsets.size() && offsets[j] <= on) ++j;
        if (j == offsets.size()) break;
        bursts.push_back({on, offsets[j]});
        ++j;
    }
    return bursts;
}

BurstStats burst_stats(std::span<const Burst> bursts) {
    BurstStats st;
    st.count = bursts.size();
    if (bursts.empty()) {
        return st;
    }
    double size = 0.0;
    for (const auto& b : bursts) size += b.size();
    st.mean_size = size / static_cast<double>(bursts.size());
    if (bursts.size() >= 2) {
        st.mean_period = (bursts.back().onset - bursts.front().onset) / static_cast<double>(bursts.size() - 1);
    }
    return st;
}

}  // namespace neuropend
