#include "neuropend/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace neuropend {

namespace {

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string fmt9(double x) { return fmt("%.9g", x); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError(path, "cannot open for writing");
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw OutputError(path, "write failed");
}

std::optional<double> parse_optional(const std::string& text, const std::string& key) {
    if (text == "NA") return std::nullopt;
    return parse_double(text, key);
}

}  // namespace

std::string format_exact(std::optional<double> x) { return x ? fmt("%.17g", *x) : std::string("NA"); }

double energy_residual(const EnergyCheckpoint& first, const EnergyCheckpoint& last) {
    const double input = last.work - first.work;
    const double mech = last.mechanical - first.mechanical;
    const double diss = last.dissipated - first.dissipated;
    const double scale = std::max(std::abs(input), std::abs(mech) + std::abs(diss));
    if (scale < 1e-12) return 0.0;
    return std::abs(input - mech - diss) / scale;
}

std::optional<double> onset_lag_fraction(std::span<const double> a, std::span<const double> b, double t0,
                                         double t1) {
    std::vector<double> aw;
    for (double x : a) {
        if (x >= t0 && x <= t1) aw.push_back(x);
    }
    if (aw.size() < 2) return std::nullopt;
    const double period = (aw.back() - aw.front()) / static_cast<double>(aw.size() - 1);
    double total = 0.0;
    std::size_t n = 0;
    for (double x : b) {
        if (x < aw.front() || x > t1) continue;
        const auto it = std::upper_bound(aw.begin(), aw.end(), x);
        const double frac = (x - *(it - 1)) / period;
        total += std::abs(frac - std::round(frac));
        ++n;
    }
    if (n == 0) return std::nullopt;
    return total / static_cast<double>(n);
}

Summary summarize(const Scenario& scenario, const Simulator& sim) {
    Summary s;
    s.scenario = scenario.name;
    s.horizon = scenario.horizon;
    s.transient = scenario.transient();
    s.steps = sim.steps();
    const double t0 = s.transient;
    const double t1 = sim.time();

    const auto& tr = sim.trace();
    if (tr.size() > 0) {
        const auto first = static_cast<std::size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), t0) - tr.t.begin());
        const std::span<const double> tw(tr.t.data() + first, tr.size() - first);
        const std::span<const double> qw(tr.q.data() + first, tr.size() - first);
        const auto& a1 = sim.onsets()[index_of(NeuronId::A1)];
        const auto c = classify_steady_state(tw, qw, a1);
        s.classification = std::string(steady_state_name(c.state));
        s.classification_events = c.events;
        s.rotations_per_event = c.mean_rotations_per_event;
        s.max_amplitude = c.max_amplitude;

        const auto zc = sampled_zero_crossings(tr.t, tr.q);
        s.frequency = estimate_frequency(zc, t0, t1);
        std::vector<double> zero_times;
        for (const auto& z : zc) zero_times.push_back(z.time);
        s.amplitude = estimate_amplitude(tr.t, tr.q, zero_times, t0, t1);
    }

    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        auto bursts = pair_bursts(sim.onsets()[k], sim.offsets()[k]);
        std::erase_if(bursts, [&](const Burst& b) { return b.onset < t0; });
        const auto st = burst_stats(bursts);
        s.bursts[k].count = st.count;
        if (st.count > 0) s.bursts[k].mean_size = st.mean_size;
        if (st.count > 1) s.bursts[k].mean_period = st.mean_period;
    }
    s.onset_lag = onset_lag_fraction(sim.onsets()[index_of(NeuronId::A1)], sim.onsets()[index_of(NeuronId::A2)],
                                     t0, t1);

    s.g_us_plus = sim.network().params.g_us_plus;
    s.g_s_minus = sim.network().params.g_s_minus;
    s.gain_updates = sim.gain_updates().size();

    std::vector<EnergyCheckpoint> cps;
    for (const auto& cp : sim.checkpoints()) {
        if (cp.onset_time >= t0) cps.push_back(cp);
    }
    if (cps.size() < 2) {
        // No rhythm in the window: account over the whole run instead.
        const auto& y = sim.state();
        cps = {{0.0, 0.0, 0.0, mechanical_energy(scenario.setup.pendulum0)},
               {t1, sim.work(), y[layout::kDissipated], mechanical_energy(sim.pendulum())}};
    } else {
        for (std::size_t k = 0; k + 1 < cps.size(); ++k) s.burst_energies.push_back(cps[k + 1].work - cps[k].work);
    }
    s.energy_input = cps.back().work - cps.front().work;
    s.energy_mechanical = cps.back().mechanical - cps.front().mechanical;
    s.energy_dissipated = cps.back().dissipated - cps.front().dissipated;
    s.energy_residual = energy_residual(cps.front(), cps.back());
    return s;
}

RunResult run_scenario(const Scenario& scenario) {
    scenario.validate();
    Simulator sim(scenario.setup);
    const long long n = scenario.total_steps();
    while (sim.steps() < n) sim.step();
    sim.finish_trace();

    RunResult r;
    r.scenario = scenario;
    r.summary = summarize(scenario, sim);
    r.trace = sim.trace();
    r.events = sim.events();
    r.gains = sim.gain_updates();
    r.checkpoints = sim.checkpoints();
    r.onsets = sim.onsets();
    r.offsets = sim.offsets();
    return r;
}

// CSV ------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> summary_rows(const Summary& s) {
    std::vector<std::pair<std::string, std::string>> rows;
    auto add = [&](std::string key, std::string value) { rows.emplace_back(std::move(key), std::move(value)); };
    add("scenario", s.scenario);
    add("horizon", format_exact(s.horizon));
    add("transient", format_exact(s.transient));
    add("steps", std::to_string(s.steps));
    add("classification", s.classification);
    add("classification_events", std::to_string(s.classification_events));
    add("rotations_per_event", format_exact(s.rotations_per_event));
    add("max_amplitude", format_exact(s.max_amplitude));
    add("frequency", format_exact(s.frequency));
    add("amplitude", format_exact(s.amplitude));
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        const std::string p = "bursts." + std::string(neuron_name(static_cast<NeuronId>(k))) + ".";
        add(p + "count", std::to_string(s.bursts[k].count));
        add(p + "mean_size", format_exact(s.bursts[k].mean_size));
        add(p + "mean_period", format_exact(s.bursts[k].mean_period));
    }
    add("onset_lag", format_exact(s.onset_lag));
    add("g_us_plus", format_exact(s.g_us_plus));
    add("g_s_minus", format_exact(s.g_s_minus));
    add("gain_updates", std::to_string(s.gain_updates));
    add("energy.input", format_exact(s.energy_input));
    add("energy.mechanical", format_exact(s.energy_mechanical));
    add("energy.dissipated", format_exact(s.energy_dissipated));
    add("energy.residual", format_exact(s.energy_residual));
    add("energy.count", std::to_string(s.burst_energies.size()));
    for (std::size_t k = 0; k < s.burst_energies.size(); ++k) {
        add("E_i." + std::to_string(k), format_exact(s.burst_energies[k]));
    }
    return rows;
}

Summary summary_from_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::map<std::string, std::string> m(rows.begin(), rows.end());
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = m.find(key);
        if (it == m.end()) throw ConfigError(key, "missing from summary");
        return it->second;
    };
    auto num = [&](const std::string& key) { return parse_double(get(key), key); };
    auto opt = [&](const std::string& key) { return parse_optional(get(key), key); };
    auto count = [&](const std::string& key) { return static_cast<std::size_t>(std::stoull(get(key))); };

    Summary s;
    s.scenario = get("scenario");
    s.horizon = num("horizon");
    s.transient = num("transient");
    s.steps = std::stoll(get("steps"));
    s.classification = get("classification");
    s.classification_events = count("classification_events");
    s.rotations_per_event = num("rotations_per_event");
    s.max_amplitude = num("max_amplitude");
    s.frequency = opt("frequency");
    s.amplitude = opt("amplitude");
    for (std::size_t k = 0; k < kNeuronCount; ++k) {
        const std::string p = "bursts." + std::string(neuron_name(static_cast<NeuronId>(k))) + ".";
        s.bursts[k].count = count(p + "count");
        s.bursts[k].mean_size = opt(p + "mean_size");
        s.bursts[k].mean_period = opt(p + "mean_period");
    }
    s.onset_lag = opt("onset_lag");
    s.g_us_plus = num("g_us_plus");
    s.g_s_minus = num("g_s_minus");
    s.gain_updates = count("gain_updates");
    s.energy_input = num("energy.input");
    s.energy_mechanical = num("energy.mechanical");
    s.energy_dissipated = num("energy.dissipated");
    s.energy_residual = num("energy.residual");
    const auto n = count("energy.count");
    for (std::size_t k = 0; k < n; ++k) s.burst_energies.push_back(num("E_i." + std::to_string(k)));
    return s;
}

void write_trace_csv(const std::filesystem::path& path, const TraceSamples& tr) {
    auto out = open_out(path);
    out << "t,q,q_dot,I,v_A1,v_B1,v_A2,v_B2,vs_A1,vs_B1,vs_A2,vs_B2\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        out << fmt9(tr.t[i]) << ',' << fmt9(tr.q[i]) << ',' << fmt9(tr.q_dot[i]) << ',' << fmt9(tr.torque[i]);
        for (std::size_t k = 0; k < kNeuronCount; ++k) out << ',' << fmt9(tr.v[k][i]);
        for (std::size_t k = 0; k < kNeuronCount; ++k) out << ',' << fmt9(tr.v_s[k][i]);
        out << '\n';
    }
    close_out(out, path);
}

void write_events_csv(const std::filesystem::path& path, const EventLog& log) {
    auto out = open_out(path);
    out << "time,kind,payload\n";
    for (const auto& e : log.events()) {
        out << format_exact(e.time) << ',' << event_kind_name(e.kind) << ',' << format_exact(e.payload) << '\n';
    }
    close_out(out, path);
}

void write_gains_csv(const std::filesystem::path& path, const std::vector<GainUpdate>& gains) {
    auto out = open_out(path);
    out << "time,g_us_plus,g_s_minus,correction,saturated\n";
    for (const auto& g : gains) {
        out << format_exact(g.time) << ',' << format_exact(g.g_us_plus) << ',' << format_exact(g.g_s_minus) << ','
            << format_exact(g.correction) << ',' << (g.saturated ? 1 : 0) << '\n';
    }
    close_out(out, path);
}

void write_summary_csv(const std::filesystem::path& path, const Summary& summary) {
    auto out = open_out(path);
    out << "key,value\n";
    for (const auto& [k, v] : summary_rows(summary)) out << k << ',' << v << '\n';
    close_out(out, path);
}

void write_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw OutputError(out_dir, ec.message());
    write_trace_csv(out_dir / "trace.csv", result.trace);
    write_events_csv(out_dir / "events.csv", result.events);
    write_gains_csv(out_dir / "gains.csv", result.gains);
    write_summary_csv(out_dir / "summary.csv", result.summary);
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError(path, "cannot open for reading");
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.header = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split(line, ','));
    }
    return table;
}

Summary read_summary_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& r : table.rows) {
        if (r.size() != 2) throw OutputError(path, "expected key,value rows");
        rows.emplace_back(r[0], r[1]);
    }
    return summary_from_rows(rows);
}

// Sweeps ---------------------------------------------------------------------

std::vector<ConfigMap> parse_grid(const ConfigMap& grid) {
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    std::map<long long, ConfigMap> explicit_points;
    for (const auto& [key, value] : grid.values()) {
        if (key.starts_with("axis.")) {
            std::vector<std::string> values;
            for (const auto& v : split(value, ',')) values.push_back(trim(v));
            if (values.empty()) throw ConfigError(key, "axis needs at least one value");
            axes.emplace_back(key.substr(5), std::move(values));
        } else if (key.starts_with("point.")) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) throw ConfigError(key, "expected point.<n>.<key>");
            long long id = 0;
            try {
                id = std::stoll(rest.substr(0, dot));
            } catch (const std::exception&) {
                throw ConfigError(key, "point index must be an integer");
            }
            explicit_points[id].set(rest.substr(dot + 1), value);
        } else {
            throw ConfigError(key, "grid keys start with axis. or point.");
        }
    }
    // Axes come out in sorted key order; the last one varies fastest.
    std::vector<ConfigMap> points;
    std::size_t total = axes.empty() ? 0 : 1;
    for (const auto& [key, values] : axes) total *= values.size();
    for (std::size_t n = 0; n < total; ++n) {
        ConfigMap p;
        std::size_t rem = n;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& values = axes[a].second;
            p.set(axes[a].first, values[rem % values.size()]);
            rem /= values.size();
        }
        points.push_back(std::move(p));
    }
    for (auto& [id, p] : explicit_points) points.push_back(std::move(p));
    if (points.empty()) throw ConfigError("grid", "no grid points");
    return points;
}

std::vector<SweepPoint> run_sweep(const ConfigMap& base, const std::vector<ConfigMap>& grid, unsigned jobs) {
    if (grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    std::vector<SweepPoint> results(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            auto& r = results[i];
            r.index = i;
            r.overrides = grid[i];
            try {
                ConfigMap cfg = base;
                cfg.merge(grid[i]);
                r.summary = run_scenario(scenario_from_config(cfg)).summary;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
    };
    jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(grid.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
    }
    return results;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
    std::vector<std::string> override_keys;
    std::set<std::string> seen;
    for (const auto& p : points) {
        for (const auto& [k, v] : p.overrides.values()) {
            if (seen.insert(k).second) override_keys.push_back(k);
        }
    }
    std::vector<std::string> summary_keys;
    for (const auto& [k, v] : summary_rows(Summary{})) {
        if (!k.starts_with("E_i.")) summary_keys.push_back(k);
    }

    auto out = open_out(path);
    out << "index";
    for (const auto& k : override_keys) out << ',' << k;
    out << ",status";
    for (const auto& k : summary_keys) out << ',' << k;
    out << '\n';
    for (const auto& p : points) {
        out << p.index;
        for (const auto& k : override_keys) out << ',' << p.overrides.get_string(k, "NA");
        std::map<std::string, std::string> row;
        if (p.summary) {
            for (auto& [k, v] : summary_rows(*p.summary)) row[k] = v;
            out << ",ok";
        } else {
            // Errors can contain commas; keep the column count fixed.
            std::string err = p.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << ",error: " << err;
        }
        for (const auto& k : summary_keys) {
            const auto it = row.find(k);
            out << ',' << (it == row.end() ? "NA" : it->second);
        }
        out << '\n';
    }
    close_out(out, path);
}

}  // namespace neuropend
