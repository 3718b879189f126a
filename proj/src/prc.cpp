#include "neuropend/prc.hpp"

#include <cmath>
#include <stdexcept>

namespace neuropend {

SimulationSetup isolated_hco_setup(const NeuronParams& params, double g_hco) {
    SimulationSetup setup;
    setup.network.params = params;
    setup.network.synapses = {{NeuronId::A1, NeuronId::B1, -g_hco}, {NeuronId::B1, NeuronId::A1, -g_hco}};
    setup.network.g_hco = g_hco;
    setup.plant.i_mag = 0.0;
    setup.sensors = false;
    setup.record_trace = false;
    for (auto& n : setup.neurons0) n = {-1.0, -1.0, -1.0};
    return setup;
}

LimitCycle settle_on_limit_cycle(const SimulationSetup& setup, int warmup_onsets) {
    Simulator sim(setup);
    const double t_max = 200.0 * static_cast<double>(warmup_onsets + 2) * setup.network.params.tau_us;
    const auto need = static_cast<std::size_t>(warmup_onsets) + 1;
    if (sim.run_onsets(NeuronId::A1, need, t_max) < need) {
        throw std::runtime_error("HCO did not settle into bursting");
    }
    const auto& on = sim.onsets()[index_of(NeuronId::A1)];
    const std::size_t n = on.size();
    const std::size_t span = std::min<std::size_t>(5, n - 1);
    const double period = (on[n - 1] - on[n - 1 - span]) / static_cast<double>(span);
    return {sim, on.back(), period};
}

std::optional<double> pulse_phase_shift(const LimitCycle& cycle, double delay, double P, double w,
                                        int recovery_periods, NeuronId target) {
    const auto k = index_of(NeuronId::A1);
    const double pulse_start = cycle.phase_zero + delay;
    const double t_max = pulse_start + (recovery_periods + 3) * cycle.period;

    // k-th A1 onset strictly after the pulse start.
    auto measure = [&](Simulator sim, bool perturb) -> std::optional<double> {
        if (perturb && P != 0.0) {
            sim.add_current_pulse({target, pulse_start, w, -P});
        }
        while (sim.time() < t_max) {
            sim.step();
            std::size_t after = 0;
            for (double t : sim.onsets()[k]) {
                if (t > pulse_start && ++after == static_cast<std::size_t>(recovery_periods)) {
                    return t;
                }
            }
        }
        return std::nullopt;
    };

    const auto reference = measure(cycle.sim, false);
    const auto perturbed = measure(cycle.sim, true);
    if (!reference || !perturbed) {
        return std::nullopt;
    }
    double shift = (*reference - *perturbed) / cycle.period;
    shift -= std::ceil(shift - 0.5);  // into (−0.5, 0.5]
    return shift;
}

std::vector<PrcSample> compute_prc(const SimulationSetup& setup, const PrcOptions& options) {
    if (options.n_phases < 1) throw std::invalid_argument("prc: n_phases must be >= 1");
    if (!(options.w > 0.0)) throw std::invalid_argument("prc: w must be > 0");
    const auto cycle = settle_on_limit_cycle(setup, options.warmup_onsets);
    std::vector<PrcSample> out;
    for (int j = 0; j < options.n_phases; ++j) {
        const double phase = static_cast<double>(j) / options.n_phases;
        const auto shift =
            pulse_phase_shift(cycle, phase * cycle.period, options.P, options.w, options.recovery_periods, options.target);
        out.push_back({phase, shift.value_or(0.0), shift.has_value()});
    }
    return out;
}

}  // namespace neuropend
