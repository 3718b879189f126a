// Command-line harness: run scenarios, sweeps, PRCs and calibrations.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "neuropend/calibrate.hpp"
#include "neuropend/prc.hpp"
#include "neuropend/run.hpp"

using namespace neuropend;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

ConfigMap load_scenario(const std::string& name, const std::vector<std::string>& sets) {
    ConfigMap cfg = resolve_scenario_config(name);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, "--set expects key=value");
        cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return cfg;
}

void print_summary(const Summary& s) {
    for (const auto& [k, v] : summary_rows(s)) {
        if (!k.starts_with("E_i.")) std::cout << k << " = " << v << '\n';
    }
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError(dir, ec.message());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuromorphic pendulum controller harness"};
    app.require_subcommand(1);

    std::string scenario_name;
    std::string out_dir;
    std::vector<std::string> sets;
    bool quiet = false;

    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its CSV outputs");
    simulate->add_option("--scenario", scenario_name, "Built-in name or config file")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--set", sets, "Override a config key (key=value)");
    simulate->add_flag("--quiet", quiet, "Do not print the summary");

    std::string grid_file;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run a scenario over a grid of overrides");
    sweep->add_option("--scenario", scenario_name, "Built-in name or config file")->required();
    sweep->add_option("--grid", grid_file, "Grid file (axis.<key> / point.<n>.<key>)")->required();
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--set", sets, "Override a config key (key=value)");

    PrcOptions prc_opts;
    auto* prc = app.add_subcommand("prc", "Phase response curve of the isolated HCO");
    prc->add_option("--P", prc_opts.P, "Pulse amplitude (inhibitory)")->capture_default_str();
    prc->add_option("--w", prc_opts.w, "Pulse duration")->capture_default_str();
    prc->add_option("--phases", prc_opts.n_phases, "Number of sampled phases")->capture_default_str();
    prc->add_option("--recovery", prc_opts.recovery_periods, "Onsets to wait before measuring")
        ->capture_default_str();
    prc->add_option("--scenario", scenario_name, "Scenario supplying neuron parameters")->default_val("prc");
    prc->add_option("--out", out_dir, "Output directory")->required();

    auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

    auto* show = app.add_subcommand("show-scenario", "Print the resolved configuration of a scenario");
    show->add_option("--scenario", scenario_name, "Built-in name or config file")->required();

    double target_period = 2.0 * M_PI;
    std::vector<double> g_s_values{1.25, 1.5, 1.75, 2.0, 2.25, 2.5};
    double lo = 1.0, hi = 4.0;
    auto* calibrate = app.add_subcommand("calibrate", "Fit time scales and the fixed-frequency gain curve");
    calibrate->add_option("--scenario", scenario_name, "Closed-loop scenario for the gain curve")
        ->default_val("gain-sweep");
    calibrate->add_option("--period", target_period, "Target period")->capture_default_str();
    calibrate->add_option("--g-s", g_s_values, "g_s_minus values on the curve");
    calibrate->add_option("--lo", lo, "Lower g_us_plus bracket")->capture_default_str();
    calibrate->add_option("--hi", hi, "Upper g_us_plus bracket")->capture_default_str();
    calibrate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    calibrate->add_option("--set", sets, "Override a config key (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const auto scenario = scenario_from_config(load_scenario(scenario_name, sets));
            const auto result = run_scenario(scenario);
            write_outputs(result, out_dir);
            if (!quiet) print_summary(result.summary);
        } else if (*sweep) {
            const auto base = load_scenario(scenario_name, sets);
            const auto grid = parse_grid(ConfigMap::load(grid_file));
            // Reject a bad base or grid key up front rather than per point.
            (void)scenario_from_config(base);
            const auto points = run_sweep(base, grid, jobs);
            ensure_dir(out_dir);
            write_sweep_csv(std::filesystem::path(out_dir) / "sweep.csv", points);
            std::size_t failed = 0;
            for (const auto& p : points) {
                if (!p.error.empty()) {
                    ++failed;
                    std::cerr << "point " << p.index << ": " << p.error << '\n';
                }
            }
            std::cout << points.size() << " points, " << failed << " failed\n";
        } else if (*prc) {
            const auto scenario = scenario_from_config(load_scenario(scenario_name, {}));
            const auto setup = isolated_hco_setup(scenario.setup.network.params, scenario.setup.network.g_hco);
            const auto samples = compute_prc(setup, prc_opts);
            ensure_dir(out_dir);
            const auto path = std::filesystem::path(out_dir) / "prc.csv";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw OutputError(path, "cannot open for writing");
            out << "phase,shift,valid\n";
            for (const auto& s : samples) {
                out << format_exact(s.phase) << ',' << format_exact(s.shift) << ',' << (s.valid ? 1 : 0) << '\n';
            }
            if (!out) throw OutputError(path, "write failed");
        } else if (*list) {
            for (const auto& name : builtin_scenario_names()) {
                const auto cfg = builtin_scenario_config(name);
                std::cout << name << "  " << cfg.get_string("scenario.description", "") << '\n';
            }
        } else if (*show) {
            ConfigMap cfg = default_config();
            cfg.merge(resolve_scenario_config(scenario_name));
            (void)scenario_from_config(cfg);
            std::cout << cfg.to_text();
        } else if (*calibrate) {
            const auto base = load_scenario(scenario_name, sets);
            const auto scenario = scenario_from_config(base);
            const auto& p = scenario.setup.network.params;
            const auto fitted = fit_timescales(p, target_period, scenario.setup.network.g_hco);
            std::printf("free HCO period %.6f at tau_f %.6g\n", free_hco_period(p, scenario.setup.network.g_hco),
                        p.tau_f);
            std::printf("fitted tau_f %.6g tau_s %.6g tau_us %.6g\n", fitted.tau_f, fitted.tau_s, fitted.tau_us);
            std::printf("g_s_minus,g_us_plus,period,amplitude\n");
            for (const auto& c : fixed_frequency_curve(base, g_s_values, target_period, lo, hi, 1e-3, jobs)) {
                std::printf("%.6g,%s,%s,%s\n", c.g_s_minus, format_exact(c.g_us_plus).c_str(),
                            format_exact(c.period).c_str(), format_exact(c.amplitude).c_str());
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const SimulationFault& e) {
        std::cerr << "numerical fault: " << e.what() << '\n';
        return kNumerical;
    } catch (const OutputError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
