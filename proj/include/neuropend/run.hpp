#pragma once

// Running scenarios, summarizing them, and persisting the results as CSV.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "neuropend/scenario.hpp"

namespace neuropend {

/// I/O failure, carrying the offending path.
class OutputError : public std::runtime_error {
public:
    OutputError(std::filesystem::path path, const std::string& message)
        : std::runtime_error(path.string() + ": " + message), path_(std::move(path)) {}

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

struct NeuronBurstSummary {
    std::size_t count = 0;
    std::optional<double> mean_size;
    std::optional<double> mean_period;

    friend bool operator==(const NeuronBurstSummary&, const NeuronBurstSummary&) = default;
};

/// Everything below is measured over the steady window [transient, horizon]
/// unless named otherwise.
struct Summary {
    std::string scenario;
    double horizon = 0.0;
    double transient = 0.0;
    long long steps = 0;

    std::string classification = "INDETERMINATE";
    std::size_t classification_events = 0;
    double rotations_per_event = 0.0;
    double max_amplitude = 0.0;

    std::optional<double> frequency;
    std::optional<double> amplitude;
    std::array<NeuronBurstSummary, kNeuronCount> bursts;
    std::optional<double> onset_lag;  // mean |A2 − A1| onset lag as a fraction of the A1 period

    double g_us_plus = 0.0;  // final values
    double g_s_minus = 0.0;
    std::size_t gain_updates = 0;

    // Energy between the first and last A1 onsets of the window.
    double energy_input = 0.0;          // Σ E_i
    double energy_mechanical = 0.0;     // ΔE_mech
    double energy_dissipated = 0.0;     // α∫q̇²dt
    double energy_residual = 0.0;       // |Σ E_i − ΔE_mech − α∫q̇²| / scale
    std::vector<double> burst_energies;  // E_i

    friend bool operator==(const Summary&, const Summary&) = default;
};

struct RunResult {
    Scenario scenario;
    TraceSamples trace;
    EventLog events;
    std::vector<GainUpdate> gains;
    std::vector<EnergyCheckpoint> checkpoints;
    std::array<std::vector<double>, kNeuronCount> onsets, offsets;
    Summary summary;
};

/// Runs to the horizon. Throws SimulationFault on a non-finite state.
[[nodiscard]] RunResult run_scenario(const Scenario& scenario);

[[nodiscard]] Summary summarize(const Scenario& scenario, const Simulator& sim);

/// Energy residual between two checkpoints.
[[nodiscard]] double energy_residual(const EnergyCheckpoint& first, const EnergyCheckpoint& last);

/// Mean |onset lag| of `b` behind `a`, as a fraction of a's period, over onsets in [t0, t1].
[[nodiscard]] std::optional<double> onset_lag_fraction(std::span<const double> a, std::span<const double> b,
                                                       double t0, double t1);

// CSV ------------------------------------------------------------------------

[[nodiscard]] std::vector<std::pair<std::string, std::string>> summary_rows(const Summary& s);
[[nodiscard]] Summary summary_from_rows(const std::vector<std::pair<std::string, std::string>>& rows);

void write_trace_csv(const std::filesystem::path& path, const TraceSamples& trace);
void write_events_csv(const std::filesystem::path& path, const EventLog& log);
void write_gains_csv(const std::filesystem::path& path, const std::vector<GainUpdate>& gains);
void write_summary_csv(const std::filesystem::path& path, const Summary& summary);

/// trace.csv, events.csv, gains.csv and summary.csv in `out_dir` (created if needed).
void write_outputs(const RunResult& result, const std::filesystem::path& out_dir);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
};

[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);
[[nodiscard]] Summary read_summary_csv(const std::filesystem::path& path);

// Sweeps ---------------------------------------------------------------------

/// Grid file: `axis.<key> = v1, v2, ...` lines expand to a Cartesian product
/// (sorted key order, last axis fastest); `point.<n>.<key> = value` lines add explicit
/// points. Each point is a set of config overrides.
[[nodiscard]] std::vector<ConfigMap> parse_grid(const ConfigMap& grid);

struct SweepPoint {
    std::size_t index = 0;
    ConfigMap overrides;
    std::optional<Summary> summary;
    std::string error;  // empty on success
};

/// One independent run per grid point on up to `jobs` threads; results are in
/// grid order.
[[nodiscard]] std::vector<SweepPoint> run_sweep(const ConfigMap& base, const std::vector<ConfigMap>& grid,
                                                unsigned jobs);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);

/// Formats with 17 significant digits ("NA" for nullopt).
[[nodiscard]] std::string format_exact(std::optional<double> x);

}  // namespace neuropend
