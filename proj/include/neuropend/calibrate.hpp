#pragma once

// Parameter calibration: time-scale fitting and fixed-frequency gain curves.

#include <optional>
#include <vector>

#include "neuropend/config.hpp"
#include "neuropend/neuron_net.hpp"

namespace neuropend {

/// Period of the isolated HCO (mean A1 onset interval after warm-up).
[[nodiscard]] double free_hco_period(const NeuronParams& params, double g_hco = 0.5);

/// Scales τ_f, τ_s, τ_us together so the isolated HCO period equals `target`.
/// The isolated network is time-scale invariant, so one rescale is exact up to
/// the period measurement.
[[nodiscard]] NeuronParams fit_timescales(const NeuronParams& params, double target, double g_hco = 0.5);

struct CurvePoint {
    double g_s_minus;
    std::optional<double> g_us_plus;  // nullopt if the target is not bracketed
    std::optional<double> period;
    std::optional<double> amplitude;
};

/// For each g_s⁻, bisects g_us⁺ in [lo, hi] so the closed-loop A1 period of
/// `base` (a scenario config) equals `target_period`. Raising g_us⁺ shortens
/// the period.
[[nodiscard]] std::vector<CurvePoint> fixed_frequency_curve(const ConfigMap& base, const std::vector<double>& g_s,
                                                            double target_period, double lo, double hi,
                                                            double tol = 1e-3, unsigned jobs = 1);

}  // namespace neuropend
