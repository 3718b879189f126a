#include "neuropend/calibrate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "neuropend/prc.hpp"
#include "neuropend/run.hpp"

namespace neuropend {

double free_hco_period(const NeuronParams& params, double g_hco) {
    const auto cycle = settle_on_limit_cycle(isolated_hco_setup(params, g_hco), 15);
    return cycle.period;
}

NeuronParams fit_timescales(const NeuronParams& params, double target, double g_hco) {
    if (!(target > 0.0)) throw std::invalid_argument("fit_timescales: target must be > 0");
    const double scale = target / free_hco_period(params, g_hco);
    NeuronParams out = params;
    out.tau_f *= scale;
    out.tau_s *= scale;
    out.tau_us *= scale;
    return out;
}

namespace {

struct Measured {
    std::optional<double> period;
    std::optional<double> amplitude;
};

Measured measure(const ConfigMap& base, double g_s, double g_us) {
    ConfigMap cfg = base;
    cfg.set("neuron.g_s_minus", format_exact(g_s));
    cfg.set("neuron.g_us_plus", format_exact(g_us));
    const auto r = run_scenario(scenario_from_config(cfg));
    return {r.summary.bursts[index_of(NeuronId::A1)].mean_period, r.summary.amplitude};
}

CurvePoint solve(const ConfigMap& base, double g_s, double target, double lo, double hi, double tol) {
    CurvePoint p{g_s, std::nullopt, std::nullopt, std::nullopt};
    // The network may stop oscillating near the bracket ends, so scan for a
    // sub-bracket with rhythmic endpoints that straddles the target.
    constexpr int kScan = 12;
    bool found = false;
    std::optional<double> prev = measure(base, g_s, lo).period;
    for (int k = 1; k <= kScan && !found; ++k) {
        const double a = lo + (hi - lo) * (k - 1) / kScan;
        const double b = lo + (hi - lo) * k / kScan;
        const auto cur = measure(base, g_s, b).period;
        if (prev && cur && *prev >= target && *cur <= target) {
            lo = a;
            hi = b;
            found = true;
        }
        prev = cur;
    }
    if (!found) return p;
    Measured best;
    double g = lo;
    while (hi - lo > tol) {
        g = 0.5 * (lo + hi);
        best = measure(base, g_s, g);
        if (!best.period) return p;
        if (*best.period > target) {
            lo = g;
        } else {
            hi = g;
        }
    }
    g = 0.5 * (lo + hi);
    best = measure(base, g_s, g);
    p.g_us_plus = g;
    p.period = best.period;
    p.amplitude = best.amplitude;
    return p;
}

}  // namespace

std::vector<CurvePoint> fixed_frequency_curve(const ConfigMap& base, const std::vector<double>& g_s,
                                              double target_period, double lo, double hi, double tol,
                                              unsigned jobs) {
    std::vector<CurvePoint> out(g_s.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < g_s.size(); i = next++) {
            out[i] = solve(base, g_s[i], target_period, lo, hi, tol);
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(g_s.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
    }
    return out;
}

}  // namespace neuropend
