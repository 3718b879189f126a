#pragma once

// Phase response curve of an isolated half-centre oscillator.

#include <optional>
#include <vector>

#include "neuropend/simulator.hpp"

namespace neuropend {

struct PrcOptions {
    double P = 0.3;
    double w = 0.05;
    int n_phases = 16;
    int recovery_periods = 5;   // K: onsets after the pulse before measuring
    int warmup_onsets = 15;
    NeuronId target = NeuronId::A1;
};

struct PrcSample {
    double phase;  // in [0, 1)
    double shift;  // (−0.5, 0.5], positive = advance
    bool valid;
};

/// An isolated HCO (A1/B1 only) started with the usual kick and no pendulum.
[[nodiscard]] SimulationSetup isolated_hco_setup(const NeuronParams& params, double g_hco = 0.5);

/// The HCO settled on its limit cycle, stopped just after an A1 onset.
struct LimitCycle {
    Simulator sim;
    double phase_zero;  // time of the A1 onset that defines phase 0
    double period;
};

[[nodiscard]] LimitCycle settle_on_limit_cycle(const SimulationSetup& setup, int warmup_onsets);

/// Phase shift caused by one pulse starting `delay` after phase zero.
[[nodiscard]] std::optional<double> pulse_phase_shift(const LimitCycle& cycle, double delay, double P, double w,
                                                      int recovery_periods, NeuronId target);

[[nodiscard]] std::vector<PrcSample> compute_prc(const SimulationSetup& setup, const PrcOptions& options);

}  // namespace neuropend
