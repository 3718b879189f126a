// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "neuropend/prc.hpp"
#include "neuropend/run.hpp"

using namespace neuropend;

namespace {

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(const std::string& text) { std::printf("      %s\n", text.c_str()); }

std::string str(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> in_window(const std::vector<double>& v, double t0, double t1) {
    std::vector<double> out;
    std::copy_if(v.begin(), v.end(), std::back_inserter(out), [&](double x) { return x >= t0 && x <= t1; });
    return out;
}

// Largest |lag| of b's onsets behind a's, as a fraction of a's period.
double max_lag_fraction(const std::vector<double>& a_all, const std::vector<double>& b_all, double t0, double t1) {
    const auto a = in_window(a_all, t0, t1);
    if (a.size() < 2) return NAN;
    const double period = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
    double worst = 0.0;
    for (double x : in_window(b_all, a.front(), t1)) {
        const auto it = std::upper_bound(a.begin(), a.end(), x);
        const double f = (x - *(it - 1)) / period;
        worst = std::max(worst, std::abs(f - std::round(f)));
    }
    return worst;
}

double mean_size(const std::vector<double>& on, const std::vector<double>& off, double t0, double t1) {
    double total = 0.0;
    int n = 0;
    for (const auto& b : pair_bursts(on, off)) {
        if (b.onset >= t0 && b.offset <= t1) {
            total += b.size();
            ++n;
        }
    }
    return n ? total / n : NAN;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void integrator_order() {
    auto rhs = [](const StateVector<1>& y, StateVector<1>& dy) { dy[0] = -y[0]; };
    auto error = [&](double h) {
        StateVector<1> y{1.0};
        const int n = static_cast<int>(std::lround(1.0 / h));
        for (int i = 0; i < n; ++i) y = rk4_step<1>(y, rhs, h);
        return std::abs(y[0] - std::exp(-1.0));
    };
    const double ratio = error(0.1) / error(0.05);
    report(ratio >= 15.0 && ratio <= 17.0, "integrator order", str("error ratio %.4f (band 15-17)", ratio));
}

void conservation() {
    SimulationSetup s;
    s.plant.alpha = 0.0;
    s.plant.i_mag = 0.0;
    s.pendulum0 = {1.0, 0.0};
    s.kick.reset();
    s.sensors = false;
    s.decimation = 1;
    Simulator sim(s);
    const double e0 = mechanical_energy(s.pendulum0);
    double drift = 0.0;
    while (sim.time() < 100.0 - 1e-9) {
        sim.step();
        drift = std::max(drift, std::abs(mechanical_energy(sim.pendulum()) - e0) / e0);
    }
    report(drift < 1e-6, "energy conservation", str("max relative drift %.3e over t=100 (< 1e-6)", drift));
}

void hco_rhythm() {
    const auto sc = builtin_scenario("hco-free");
    const auto r = run_scenario(sc);
    const double t_change = sc.setup.changes.at(0).time;
    const auto& a = r.onsets[index_of(NeuronId::A1)];
    const auto& b = r.onsets[index_of(NeuronId::B1)];

    std::vector<std::pair<double, int>> merged;
    for (double t : a) merged.emplace_back(t, 0);
    for (double t : b) merged.emplace_back(t, 1);
    std::sort(merged.begin(), merged.end());
    bool interleave = true;
    for (std::size_t i = 1; i < merged.size(); ++i) interleave &= merged[i].second != merged[i - 1].second;

    // Half the pre-change run and the last half of the post-change run.
    const double before = 0.5 * (mean_size(r.onsets[0], r.offsets[0], t_change / 2, t_change) +
                                 mean_size(r.onsets[1], r.offsets[1], t_change / 2, t_change));
    const double t_after = t_change + 0.5 * (sc.horizon - t_change);
    const double after = 0.5 * (mean_size(r.onsets[0], r.offsets[0], t_after, sc.horizon) +
                                mean_size(r.onsets[1], r.offsets[1], t_after, sc.horizon));
    const double gain = after / before - 1.0;
    const bool ok = a.size() >= 10 && b.size() >= 10 && interleave && gain > 0.10;
    report(ok, "HCO rhythm",
           str("%zu/%zu A1/B1 bursts, interleaved=%s, burst size %.3f -> %.3f (+%.1f%%, > 10%%)", a.size(), b.size(),
               interleave ? "yes" : "no", before, after, 100.0 * gain));
}

void configuration_switch() {
    const auto sc = builtin_scenario("config-switch");
    const auto r = run_scenario(sc);
    const double t_switch = sc.setup.changes.at(0).time;
    const auto& a1 = r.onsets[index_of(NeuronId::A1)];
    const auto& a2 = r.onsets[index_of(NeuronId::A2)];
    const auto pre = in_window(a1, sc.transient(), t_switch);
    const double period = (pre.back() - pre.front()) / static_cast<double>(pre.size() - 1);
    const double anti = max_lag_fraction(a1, a2, sc.transient(), t_switch);
    const double settle = t_switch + 10.0 * period;
    const double in = max_lag_fraction(a1, a2, settle, sc.horizon);
    const auto post = in_window(a1, settle, sc.horizon);
    const bool ok = std::abs(anti - 0.5) <= 0.05 && in < 0.05 && post.size() >= 3;
    report(ok, "configuration switch",
           str("anti-phase lag %.4f T (0.5 +- 0.05), in-phase lag %.4f T after 10 periods (< 0.05, %zu onsets)",
               anti, in, post.size()));
}

void entrainment_map() {
    const std::vector<double> g_s{1.25, 1.5, 1.75, 2.0};
    const std::vector<double> g_us{1.25, 1.5, 1.75, 2.0};
    ConfigMap grid;
    grid.set("axis.neuron.g_s_minus", "1.25, 1.5, 1.75, 2.0");
    grid.set("axis.neuron.g_us_plus", "1.25, 1.5, 1.75, 2.0");
    const auto points = run_sweep(builtin_scenario_config("gain-sweep"), parse_grid(grid), 4);
    // g_s_minus sorts first: index = i_s * 4 + i_us.
    auto amp = [&](std::size_t i, std::size_t j) {
        const auto& p = points[i * g_us.size() + j];
        return p.summary && p.summary->amplitude ? *p.summary->amplitude : NAN;
    };
    int violations = 0, comparisons = 0;
    for (std::size_t i = 0; i < g_s.size(); ++i) {
        for (std::size_t j = 0; j < g_us.size(); ++j) {
            if (i + 1 < g_s.size()) {
                ++comparisons;
                violations += !(amp(i + 1, j) >= amp(i, j));
            }
            if (j + 1 < g_us.size()) {
                ++comparisons;
                violations += !(amp(i, j + 1) >= amp(i, j));
            }
        }
    }
    report(violations == 0, "monotone entrainment map (4x4)",
           str("%d of %d neighbour pairs decrease", violations, comparisons));
    for (std::size_t i = 0; i < g_s.size(); ++i) {
        info(str("g_s_minus %.2f: amplitude %.3f %.3f %.3f %.3f for g_us_plus 1.25..2.0", g_s[i], amp(i, 0),
                 amp(i, 1), amp(i, 2), amp(i, 3)));
    }

    // Same map along the fixed-frequency curve shipped as the three entrainment scenarios.
    double last = -1.0;
    bool rising = true;
    std::string along;
    for (const char* name : {"overdamped-entrain-small", "overdamped-entrain-medium", "overdamped-entrain-large"}) {
        const auto s = run_scenario(builtin_scenario(name)).summary;
        const double a = s.amplitude.value_or(NAN);
        rising &= a > last;
        last = a;
        along += str(" (%.3f, %.3f) -> %.3f;", s.g_s_minus, s.g_us_plus, a);
    }
    info(str("fixed-frequency curve, both gains rising, amplitude %s:%s", rising ? "rising" : "NOT rising",
             along.c_str()));
}

void bistability() {
    const auto high = run_scenario(builtin_scenario("bistability-high")).summary;
    const auto low = run_scenario(builtin_scenario("bistability-low")).summary;
    const bool ok = high.classification == "HIGH_ENERGY" && low.classification == "LOW_ENERGY" &&
                    std::abs(std::abs(high.rotations_per_event) - 2.0) < 0.05;
    report(ok, "bistability",
           str("%s / %s, %.3f rotations per event (2 +- 0.05)", high.classification.c_str(),
               low.classification.c_str(), std::abs(high.rotations_per_event)));
}

void phase_response() {
    const auto sc = builtin_scenario("prc");
    const auto setup = isolated_hco_setup(sc.setup.network.params, sc.setup.network.g_hco);
    PrcOptions opt;
    opt.P = 0.3;
    opt.w = 0.05;
    opt.n_phases = 16;
    const auto prc = compute_prc(setup, opt);
    std::vector<double> shifts;
    std::string line;
    for (const auto& s : prc) {
        if (s.valid) shifts.push_back(s.shift);
        line += str(" %.4f", s.shift);
    }
    // Monotone over the measured interval: one direction throughout.
    int up = 0, down = 0;
    for (std::size_t i = 1; i < shifts.size(); ++i) {
        up += shifts[i] > shifts[i - 1];
        down += shifts[i] < shifts[i - 1];
    }
    const bool monotone = shifts.size() == prc.size() && (up == 0 || down == 0);

    opt.P = 0.0;
    double worst = 0.0;
    for (const auto& s : compute_prc(setup, opt)) worst = std::max(worst, s.valid ? std::abs(s.shift) : 1.0);
    report(monotone && worst < 1e-4, "phase response curve",
           str("%zu/%zu valid, %d rises %d falls; P=0 max |shift| %.2e (< 1e-4)", shifts.size(), prc.size(), up,
               down, worst));
    info("shifts:" + line);
    // Longest run of one sign of slope, cyclically.
    std::size_t best = 0, run = 0;
    int dir = 0;
    const std::size_t n = shifts.size();
    for (std::size_t i = 0; i < 2 * n && n > 1; ++i) {
        const double d = shifts[(i + 1) % n] - shifts[i % n];
        const int s = d > 0 ? 1 : -1;
        run = (s == dir) ? run + 1 : 1;
        dir = s;
        best = std::max(best, std::min(run, n - 1));
    }
    info(str("longest monotone stretch: %zu of %zu phase steps", best, n));
}

void phase_control() {
    const auto s = run_scenario(builtin_scenario("phase-control")).summary;
    const auto& e = s.burst_energies;
    double spread = NAN;
    if (e.size() >= 10) {
        const auto [lo, hi] = std::minmax_element(e.end() - 10, e.end());
        double mean = 0.0;
        for (auto it = e.end() - 10; it != e.end(); ++it) mean += *it / 10.0;
        spread = (*hi - *lo) / std::abs(mean);
    }
    const bool ok = s.classification == "HIGH_ENERGY" && spread < 0.05;
    report(ok, "phase-control stabilization",
           str("%s, last 10 E_i spread %.2e of mean (< 5%%)", s.classification.c_str(), spread));
}

void adaptive() {
    for (const char* name : {"adaptive-a040", "adaptive-a050"}) {
        const auto sc = builtin_scenario(name);
        const auto r = run_scenario(sc);
        const auto& cfg = sc.setup.adaptive;
        const double w = r.summary.frequency.value_or(NAN);
        const double a = r.summary.amplitude.value_or(NAN);
        const double w_err = std::abs(w - cfg.omega_ref) / cfg.omega_ref;
        const double a_err = std::abs(a - cfg.a_ref) / cfg.a_ref;

        bool in_clamps = true;
        std::map<AdaptedGain, std::vector<double>> corrections;
        for (const auto& g : r.gains) {
            in_clamps &= cfg.g_us_range.contains(g.g_us_plus) && cfg.g_s_range.contains(g.g_s_minus);
            corrections[g.gain].push_back(std::abs(g.correction));
        }
        bool settled = corrections.size() == 2;
        std::string settle_text;
        for (const auto& [gain, c] : corrections) {
            if (c.size() < 20) {
                settled = false;
                continue;
            }
            double first = 0.0, last = 0.0;
            for (int i = 0; i < 10; ++i) {
                first += c[i] / 10.0;
                last += c[c.size() - 10 + i] / 10.0;
            }
            settled &= last < 0.1 * first;
            settle_text += str(" %s %.1e/%.1e", gain == AdaptedGain::GUsPlus ? "g_us" : "g_s", last, first);
        }
        const bool ok = w_err < 0.02 && a_err < 0.05 && settled && in_clamps;
        report(ok, (std::string("adaptive regulation ") + name).c_str(),
               str("omega %.4f (%.2f%%, < 2%%), A %.4f (%.2f%%, < 5%%), last/first corrections%s, clamps %s", w,
                   100 * w_err, a, 100 * a_err, settle_text.c_str(), in_clamps ? "held" : "LEFT"));
    }
}

void bookkeeping_and_reproducibility() {
    const auto root = std::filesystem::temp_directory_path() / "neuropend_acceptance";
    std::filesystem::remove_all(root);
    double worst_residual = 0.0;
    std::string worst_name;
    double slowest = 0.0;
    std::string slowest_name;
    std::vector<std::string> differing;
    for (const auto& name : builtin_scenario_names()) {
        const auto sc = builtin_scenario(name);
        const auto t0 = std::chrono::steady_clock::now();
        const auto r1 = run_scenario(sc);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto r2 = run_scenario(builtin_scenario(name));
        write_outputs(r1, root / name / "a");
        write_outputs(r2, root / name / "b");
        for (const char* f : {"trace.csv", "events.csv", "gains.csv", "summary.csv"}) {
            if (slurp(root / name / "a" / f) != slurp(root / name / "b" / f)) differing.push_back(name + "/" + f);
        }
        if (r1.summary.energy_residual > worst_residual || worst_name.empty()) {
            worst_residual = r1.summary.energy_residual;
            worst_name = name;
        }
        if (seconds > slowest) {
            slowest = seconds;
            slowest_name = name;
        }
    }
    std::filesystem::remove_all(root);
    report(worst_residual < 0.01, "energy bookkeeping",
           str("worst relative residual %.2e (%s) over %zu scenarios (< 1%%)", worst_residual, worst_name.c_str(),
               builtin_scenario_names().size()));
    report(differing.empty(), "reproducibility",
           differing.empty() ? "all CSVs byte-identical across two runs"
                             : str("%zu files differ, first %s", differing.size(), differing.front().c_str()));
    report(slowest < 60.0, "runtime budget", str("slowest scenario %s %.2f s (< 60 s)", slowest_name.c_str(), slowest));
}

}  // namespace

int main() {
    integrator_order();
    conservation();
    hco_rhythm();
    configuration_switch();
    entrainment_map();
    bistability();
    phase_response();
    phase_control();
    adaptive();
    bookkeeping_and_reproducibility();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
